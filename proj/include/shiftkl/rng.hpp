#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace shiftkl {

// Counter-based stream: a SplitMix64 sequence whose start is a hash of
// (seed, replica, step). Any replica/step can be regenerated independently.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t step);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double uniform();  // in [0, 1)
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index d);

 private:
  std::uint64_t state_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace shiftkl
