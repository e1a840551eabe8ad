#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace shiftkl {

// d_{n+1} = L (1 - eta) d_n + a
struct SimpleError {
  double a = 0.0;
};

// d_{n+1}^2 = L^2 (1 - eta)^2 d_n^2 + 2 a1 (1 - eta) d_n + a0^2
struct WeakAwareError {
  double a0 = 0.0;  // strong level
  double a1 = 0.0;  // weak level (weak + gamma * strong)
};

struct ShiftProblem {
  long N = 1;
  double L = 1.0;
  double d0 = 0.0;
  std::variant<SimpleError, WeakAwareError> error = SimpleError{};
  double c = 1.0;
  double c_prime = 1.0;
  double b = 0.0;

  void validate() const;
  bool weak_aware() const { return std::holds_alternative<WeakAwareError>(error); }
};

struct ShiftSchedule {
  std::vector<double> eta;

  std::size_t size() const { return eta.size(); }
  // Throws FeasibilityError unless every entry is in [0,1] and the last is 1.
  void check_feasible() const;
};

struct ObjectiveTrace {
  std::vector<double> distances;  // d_0 .. d_{N-1}
  double main_term = 0.0;         // c * sum_{n<N-1} eta_n^2 d_n^2
  double final_term = 0.0;        // c' d_{N-1}^2 + b^2
  double total = 0.0;
};

struct ShiftSolution {
  ShiftSchedule schedule;
  std::vector<double> distances;  // explicit distance formula, d_0 .. d_{N-1}
};

struct StepChoice {
  double eta;
  double value;
};

// One step of the distance recursion for the problem's error model.
double next_distance(const ShiftProblem& problem, double d, double eta);

ObjectiveTrace evaluate_schedule(const ShiftProblem& problem, const ShiftSchedule& schedule);

double optimal_value_L1(long N, double a, double d0);
ShiftSolution optimal_shifts_L1(long N, double a, double d0);
StepChoice single_step_opt(double d, double a, long M);

double optimal_value_Lgeneral(long N, double a, double d0, double L);
ShiftSolution optimal_shifts_Lgeneral(long N, double a, double d0, double L);

double final_bound_with_cross_reg(long N, double a, double d0, double L, double c, double c_prime, double b);

// Phase-stitched schedule for 1/2 <= L <= 2. The error levels are validated but
// do not influence the choice.
ShiftSchedule three_phase_schedule(long N, double L, double a0, double a1);

// Index of the last initial-phase entry, or -1 when the initial phase is empty.
long three_phase_boundary(long N, double L);

struct OracleGrid {
  std::size_t distance_points = 2000;  // WeakAware value-iteration grid
  std::size_t eta_points = 200;        // candidate shifts per step
  std::size_t max_work = 400000000;    // N * distance_points * eta_points cap
};

struct OracleResult {
  ShiftSchedule schedule;
  double value = 0.0;  // objective of the returned schedule, evaluated exactly
};

OracleResult dp_oracle(const ShiftProblem& problem, const OracleGrid& grid = {});

}  // namespace shiftkl
