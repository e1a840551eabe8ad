#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "shiftkl/chains.hpp"
#include "shiftkl/errors.hpp"

namespace shiftkl {

namespace {

// Stream tags so the two chains never share noise.
constexpr std::uint64_t kApproxStream = 0x6170707278ULL;
constexpr std::uint64_t kAuxStream = 0x6175786c79ULL;

double sorted_w2(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(acc / static_cast<double>(x.size()));
}

// One batch: returns W2 estimates for steps 0..N.
std::vector<double> run_batch(const Kernel1D& approx, const Kernel1D& exact, const ShiftSchedule& schedule,
                              const AuxConfig& config, long first, long count) {
  const std::size_t N = schedule.size();
  std::vector<double> x(count, config.x0), y(count, config.y0), out(N + 1);
  std::vector<std::size_t> ix(count), iy(count);
  for (std::size_t n = 0; n < N; ++n) {
    std::iota(ix.begin(), ix.end(), 0);
    std::iota(iy.begin(), iy.end(), 0);
    std::sort(ix.begin(), ix.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::sort(iy.begin(), iy.end(), [&](std::size_t i, std::size_t j) { return y[i] < y[j]; });
    const double eta = schedule.eta[n];
    std::vector<double> xs(count), ys(count);
    double acc = 0.0;
    for (long k = 0; k < count; ++k) {
      xs[k] = x[ix[k]];
      const double gap = xs[k] - y[iy[k]];
      acc += gap * gap;
      ys[k] = y[iy[k]] + eta * gap;  // shift toward the coupled partner
    }
    out[n] = std::sqrt(acc / static_cast<double>(count));
    // the reference chain switches to the approximate kernel on the last step
    const Kernel1D& aux_kernel = (n + 1 == N) ? approx : exact;
    for (long k = 0; k < count; ++k) {
      const auto id = static_cast<std::uint64_t>(first + k);
      CounterRng ra(config.seed ^ kApproxStream, id, n + 1);
      CounterRng ry(config.seed ^ kAuxStream, id, n + 1);
      x[k] = approx(xs[k], ra);
      y[k] = aux_kernel(ys[k], ry);
      if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
        throw NumericError("auxiliary_process_sim: non-finite state", static_cast<long>(n + 1));
      }
    }
  }
  out[N] = sorted_w2(x, y);
  return out;
}

}  // namespace

Kernel1D toy_approx_kernel(double w, double sigma) {
  if (!std::isfinite(w) || !(sigma >= 0.0)) throw DomainError("toy_approx_kernel: need finite w and sigma >= 0");
  const double sd = std::sqrt(1.0 + sigma * sigma);
  return [w, sd](double x, CounterRng& rng) { return x + w + sd * rng.normal(); };
}

Kernel1D toy_exact_kernel() {
  return [](double x, CounterRng& rng) { return x + rng.normal(); };
}

Kernel1D scheme_kernel_1d(const PotentialSpec& pot, Scheme scheme, double h) {
  pot.validate();
  if (pot.dimension != 1) throw InputError("scheme_kernel_1d: only dimension 1 is supported");
  if (!(h > 0.0)) throw DomainError("scheme_kernel_1d: h must be > 0");
  switch (scheme) {
    case Scheme::LMC:
      return [pot, h](double x, CounterRng& rng) {
        Eigen::VectorXd v(1), xi(1);
        v << x;
        xi << rng.normal();
        return lmc_step(pot, v, h, xi)(0);
      };
    case Scheme::RMLMC:
      return [pot, h](double x, CounterRng& rng) {
        const double u = rng.uniform();
        Eigen::VectorXd v(1), xi1(1), xi2(1);
        v << x;
        xi1 << rng.normal();
        xi2 << rng.normal();
        return rmlmc_step(pot, v, h, u, BrownianPair::from_normals(u, h, xi1, xi2))(0);
      };
    case Scheme::ExactDiffusion: {
      Eigen::VectorXd origin = Eigen::VectorXd::Zero(1);
      const Gaussian from_zero = exact_diffusion_kernel(pot, origin, h);
      const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
      const double slope = exact_diffusion_kernel(pot, one, h).mean()(0) - from_zero.mean()(0);
      const double offset = from_zero.mean()(0);
      const double sd = std::sqrt(from_zero.cov()(0, 0));
      return [slope, offset, sd](double x, CounterRng& rng) { return offset + slope * x + sd * rng.normal(); };
    }
  }
  throw InputError("scheme_kernel_1d: unknown scheme");
}

AuxTrace auxiliary_process_sim(const Kernel1D& approx, const Kernel1D& exact, const ShiftSchedule& schedule,
                               const AuxConfig& config) {
  schedule.check_feasible();
  if (config.batches < 2) throw InputError("auxiliary_process_sim: need at least 2 batches");
  if (config.replicas < 2 * config.batches) throw InputError("auxiliary_process_sim: too few replicas per batch");
  const long B = config.batches;
  const long per = config.replicas / B;
  std::vector<std::vector<double>> traces(B);
  std::vector<std::exception_ptr> failures(B);
  const long workers = std::max<long>(1, std::min<long>(std::thread::hardware_concurrency(), B));
  std::vector<std::thread> pool;
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long b = w; b < B; b += workers) {
        try {
          traces[b] = run_batch(approx, exact, schedule, config, b * per, per);
        } catch (...) {
          failures[b] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  const std::size_t steps = schedule.size() + 1;
  AuxTrace trace;
  trace.distance.assign(steps, 0.0);
  trace.std_error.assign(steps, 0.0);
  for (std::size_t n = 0; n < steps; ++n) {
    double mean = 0.0;
    for (const auto& t : traces) mean += t[n];
    mean /= static_cast<double>(B);
    double ss = 0.0;
    for (const auto& t : traces) ss += (t[n] - mean) * (t[n] - mean);
    trace.distance[n] = mean;
    trace.std_error[n] = std::sqrt(ss / static_cast<double>(B - 1) / static_cast<double>(B));
  }
  return trace;
}

AuxTrace auxiliary_process_sim(const PotentialSpec& pot, const ShiftSchedule& schedule,
                               const SamplerConfig& config, double x0, double y0, long batches) {
  if (pot.dimension != 1) throw InputError("auxiliary_process_sim: only dimension 1 is supported");
  if (config.scheme == Scheme::ExactDiffusion) {
    throw InputError("auxiliary_process_sim: the approximate chain must be lmc or rmlmc");
  }
  config.validate(pot);
  AuxConfig aux;
  aux.replicas = config.samples;
  aux.batches = batches;
  aux.seed = config.seed;
  aux.x0 = x0;
  aux.y0 = y0;
  return auxiliary_process_sim(scheme_kernel_1d(pot, config.scheme, config.h),
                               scheme_kernel_1d(pot, Scheme::ExactDiffusion, config.h), schedule, aux);
}

}  // namespace shiftkl
