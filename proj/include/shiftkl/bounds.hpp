#pragma once

#include <optional>

#include "shiftkl/shifts.hpp"

namespace shiftkl {

struct KernelAssumptions {
  double L = 1.0;
  double gamma = 0.0;
  double c = 0.0;
  double c_prime = 0.0;
  double b_bar = 0.0;
  double e_weak = 0.0;
  double e_strong = 0.0;
  double a = 0.0;
  double implied_constant = 1.0;

  void validate() const;
  // N ∧ 1/(1-L)_+, equal to N when L >= 1.
  double effective_horizon(long N) const;
};

enum class BoundMode { ClosedForm, Certified };

struct BoundReport {
  double value = 0.0;
  BoundMode mode = BoundMode::ClosedForm;
  std::optional<ShiftSchedule> schedule;
  std::optional<ObjectiveTrace> trace;
  double constant_used = 1.0;
};

const char* to_string(BoundMode mode);

// Squared W2 bound of the standard local error framework.
BoundReport w2_framework_bound(const KernelAssumptions& k, long N, double w2_init);

// Exact-constant KL bound for the coupling framework; L must lie in (0,1].
BoundReport kl_simple_bound(const KernelAssumptions& k, long N, double w2_init);

BoundReport kl_framework_bound(const KernelAssumptions& k, long N, double w2_init, BoundMode mode);

// Same arithmetic as kl_simple_bound with order-q constants and a W_inf start.
BoundReport renyi_simple_bound(double order, const KernelAssumptions& k, long N, double winf_init);

struct LastStepKernel {
  double c_prime = 0.0;
  double b_bar = 0.0;
};

KernelAssumptions last_step_substitution(const KernelAssumptions& k, const LastStepKernel& last);

}  // namespace shiftkl
