#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftkl/bounds.hpp"

namespace shiftkl {

struct Check {
  std::string name;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool all_passed() const;
  std::size_t failures() const;
};

const std::vector<std::string>& verify_suite_names();

// Throws InputError for an unknown suite.
SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed = 0);

// Constants of the shifted-Gaussian toy pair x + N(0,1) against x + N(w, 1 + sigma^2).
KernelAssumptions toy_simple_assumptions(double w, double sigma);
KernelAssumptions toy_certified_assumptions(double w, double sigma);

// LMC on the standard normal target started at a point mass x0.
struct GaussianLmcCertificate {
  double exact_kl = 0.0;
  BoundReport bound;
  KernelAssumptions assumptions;
  double w2_init = 0.0;
};

GaussianLmcCertificate gaussian_lmc_certificate(double h, long N, double x0);

}  // namespace shiftkl
