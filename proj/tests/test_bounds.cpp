#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftkl/bounds.hpp"
#include "shiftkl/errors.hpp"
#include "shiftkl/gauss.hpp"
#include "shiftkl/verify.hpp"

using namespace shiftkl;

namespace {

KernelAssumptions base(double L, double c, double cp, double a, double b) {
  KernelAssumptions k;
  k.L = L;
  k.c = c;
  k.c_prime = cp;
  k.a = a;
  k.b_bar = b;
  return k;
}

}  // namespace

TEST(W2FrameworkBound, Examples) {
  KernelAssumptions k = base(0.8, 0, 0, 0, 0);
  EXPECT_NEAR(w2_framework_bound(k, 5, 2.0).value, std::pow(0.8, 5) * 4.0, 1e-14);
  k = base(1.0, 0, 0, 0, 0);
  k.e_weak = 0.1;
  k.e_strong = 1.0;
  EXPECT_NEAR(w2_framework_bound(k, 4, 0.0).value, 4.16, 1e-14);
  k.L = 2.0;
  const double v = w2_framework_bound(k, 3, 1.0).value;
  EXPECT_NEAR(v, std::pow(2.0, 9) * (1.0 + 0.01 + 1.0), 1e-10);
  k.implied_constant = 3.0;
  EXPECT_NEAR(w2_framework_bound(k, 3, 1.0).value, 3.0 * v, 1e-9);
  EXPECT_THROW(w2_framework_bound(k, 0, 1.0), DomainError);
}

TEST(KlSimpleBound, Examples) {
  EXPECT_NEAR(kl_simple_bound(base(0.7, 1.0, 2.0, 0.0, 0.3), 5, 0.0).value, 0.09, 1e-15);
  EXPECT_NEAR(kl_simple_bound(base(0.5, 1.0, 2.0, 0.0, 0.0), 2, 1.0).value, 0.36, 1e-14);
  EXPECT_THROW(kl_simple_bound(base(1.1, 1.0, 1.0, 0.0, 0.0), 2, 1.0), DomainError);
}

TEST(KlSimpleBound, ToySpotValue) {
  const double v = kl_simple_bound(toy_simple_assumptions(0.1, 1.0), 4, 0.0).value;
  // exact evaluation gives 0.5719654; the published 0.571979 comes from rounding a
  EXPECT_NEAR(v, 0.5719654, 5e-7);
  EXPECT_NEAR(v, 0.571979, 1e-4);
  EXPECT_GE(v, toy_exact_kl(4, 0.1, 1.0));
}

TEST(KlSimpleBound, EqualsScheduleEvaluation) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const long N = 1 + static_cast<long>(30 * u(gen)) % 30;
    const double L = i % 4 == 0 ? 1.0 : 0.5 + 0.5 * u(gen);
    const KernelAssumptions k = base(L, 3 * u(gen), 3 * u(gen), 5 * u(gen), 2 * u(gen));
    const double d0 = k.a + 10 * u(gen);
    const ShiftSchedule s =
        L == 1.0 ? optimal_shifts_L1(N, k.a, d0).schedule : optimal_shifts_Lgeneral(N, k.a, d0, L).schedule;
    ShiftProblem p;
    p.N = N;
    p.L = L;
    p.d0 = d0;
    p.error = SimpleError{k.a};
    p.c = k.c;
    p.c_prime = k.c_prime;
    p.b = k.b_bar;
    const double ev = evaluate_schedule(p, s).total;
    EXPECT_NEAR(kl_simple_bound(k, N, d0).value, ev, 1e-12 * std::max(1.0, ev));
  }
}

TEST(KlFrameworkBound, ClosedFormErrorFree) {
  KernelAssumptions k = base(0.6, 1.0, 2.0, 0.0, 0.0);
  const long N = 7;
  const double want = 3.0 * (1.0 / 0.6 - 1.0) / (std::pow(0.6, -N) - 1.0) * 4.0;
  EXPECT_NEAR(kl_framework_bound(k, N, 2.0, BoundMode::ClosedForm).value, want, 1e-13);
  k.implied_constant = 2.5;
  EXPECT_NEAR(kl_framework_bound(k, N, 2.0, BoundMode::ClosedForm).value, 2.5 * want, 1e-12);
}

TEST(KlFrameworkBound, CertifiedCarriesScheduleAndTrace) {
  KernelAssumptions k = base(0.9, 1.0, 2.0, 0.0, 0.4);
  k.e_weak = 0.05;
  k.e_strong = 0.3;
  k.gamma = 0.1;
  const BoundReport r = kl_framework_bound(k, 12, 3.0, BoundMode::Certified);
  ASSERT_TRUE(r.schedule.has_value());
  ASSERT_TRUE(r.trace.has_value());
  EXPECT_EQ(r.mode, BoundMode::Certified);
  EXPECT_NEAR(r.value, r.trace->total + 0.16, 1e-15);
  EXPECT_THROW(kl_framework_bound(base(0.3, 1, 1, 0, 0), 3, 1.0, BoundMode::Certified), DomainError);
}

TEST(KlFrameworkBound, ToyGridValidity) {
  for (double w : {0.0, 0.1, 1.0}) {
    for (double s : {0.5, 1.0, 2.0}) {
      const KernelAssumptions simple = toy_simple_assumptions(w, s);
      const KernelAssumptions cert = toy_certified_assumptions(w, s);
      for (long N = 1; N <= 100; ++N) {
        const double exact = toy_exact_kl(N, w, s);
        EXPECT_GE(kl_simple_bound(simple, N, 0.0).value, exact);
        EXPECT_GE(kl_framework_bound(cert, N, 0.0, BoundMode::Certified).value, exact);
      }
    }
  }
}

TEST(KlFrameworkBound, GaussianLmcCertificates) {
  for (double h : {0.2, 0.1, 0.05}) {
    for (long N : {10L, 100L}) {
      for (double x0 : {0.0, 1.0, 4.0}) {
        const GaussianLmcCertificate c = gaussian_lmc_certificate(h, N, x0);
        EXPECT_GE(c.bound.value, c.exact_kl) << h << " " << N << " " << x0;
        EXPECT_GT(c.exact_kl, 0.0);
      }
    }
  }
}

TEST(RenyiSimpleBound, MatchesKlArithmetic) {
  const KernelAssumptions k = base(0.5, 1.0, 2.0, 0.0, 0.0);
  EXPECT_NEAR(renyi_simple_bound(1.0, k, 2, 1.0).value, kl_simple_bound(k, 2, 1.0).value, 1e-15);
  EXPECT_NEAR(renyi_simple_bound(3.0, k, 2, 1.0).value, 0.36, 1e-14);
  EXPECT_NEAR(renyi_simple_bound(2.0, base(1.0, 1.0, 1.0, 0.0, 0.7), 4, 0.0).value, 0.49, 1e-15);
  EXPECT_THROW(renyi_simple_bound(0.5, k, 2, 1.0), InputError);
}

TEST(LastStepSubstitution, OverridesFinalConstants) {
  const KernelAssumptions k = base(0.8, 1.0, 2.0, 0.5, 0.3);
  const KernelAssumptions same = last_step_substitution(k, {2.0, 0.3});
  EXPECT_DOUBLE_EQ(kl_simple_bound(same, 6, 1.0).value, kl_simple_bound(k, 6, 1.0).value);
  const KernelAssumptions zero = last_step_substitution(k, {0.0, 0.0});
  const ShiftSchedule s = optimal_shifts_Lgeneral(6, 0.5, 1.0, 0.8).schedule;
  ShiftProblem p;
  p.N = 6;
  p.L = 0.8;
  p.d0 = 1.0;
  p.error = SimpleError{0.5};
  p.c = 1.0;
  p.c_prime = 0.0;
  const ObjectiveTrace t = evaluate_schedule(p, s);
  EXPECT_EQ(t.final_term, 0.0);
  EXPECT_NEAR(kl_simple_bound(zero, 6, 1.0).value, t.total, 1e-12);
}
