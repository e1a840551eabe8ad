#include "shiftkl/rng.hpp"

namespace shiftkl {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t step)
    : state_(mix64(mix64(mix64(seed) ^ replica) ^ (step * 0xd1b54a32d192ed03ULL))) {}

CounterRng::result_type CounterRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return unif_(*this); }

double CounterRng::normal() { return gauss_(*this); }

Eigen::VectorXd CounterRng::normal_vector(Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = normal();
  return v;
}

}  // namespace shiftkl
