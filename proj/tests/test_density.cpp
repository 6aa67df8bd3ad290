#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlab/density.hpp"

#include <cmath>
#include <cstdio>

#include "mlab/quadrature.hpp"

using namespace mlab::density;

namespace {

const WeightConfig kCfg{100.0, 0.2, 0.01, +1};

// Nested fully adaptive reference for the (Z,Y) window average (oracle for
// the fixed tensor rule used by nu_weight).
double nu_weight_adaptive(const WeightConfig& cfg, double x, double y, double z) {
  double sz = cfg.sign * z;
  if (!(sz > 0) || !(x > 0) || !(y > 0)) return 0;
  double B2 = cfg.B * cfg.B;
  auto outer = [&](double tz) {
    double fz = bump(sz * std::exp(-tz));
    if (fz == 0) return 0.0;
    double xe = x * std::exp(tz) / B2;
    return fz * mlab::quad::integrate(
                    [&](double ty) { return bump(y * std::exp(-ty)) * bump(xe * std::exp(ty)); },
                    std::log(cfg.Y1()), std::log(cfg.Y2()), 1e-16, 1e-10)
                    .value;
  };
  return mlab::quad::integrate(outer, std::log(cfg.Z1()), std::log(cfg.Z2()), 1e-16, 1e-10).value;
}

}  // namespace

TEST_CASE("config validation") {
  WeightConfig bad = kCfg;
  bad.eta = 0.05;  // violates eta < delta/10
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kCfg;
  bad.sign = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(kCfg.validate());
}

TEST_CASE("bump: support, frozen value, unit mass") {
  CHECK(bump(0.5) == 0.0);
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(2.5) == 0.0);
  // c * e^{-1} with c = 2 / 0.443993816168079 (high-precision oracle)
  CHECK(std::fabs(bump(1.5) - 1.65713767973821) < 1e-12);
  auto mass = mlab::quad::integrate([](double u) { return bump(u); }, 1.0, 2.0, 1e-15, 1e-12);
  CHECK(std::fabs(mass.value - 1.0) < 1e-10);
}

TEST_CASE("nu_weight: support windows") {
  // sign support
  CHECK(nu_weight(kCfg, 120, 55, -3.1) == 0.0);
  // |z| above the window
  CHECK(nu_weight(kCfg, 120, 55, 2 * kCfg.Z2() + 0.1) == 0.0);
  CHECK(nu_weight(kCfg, 120, 55, kCfg.Z1() - 0.01) == 0.0);
  // x outside [Xlo, 2 Xhi]
  CHECK(nu_weight(kCfg, kCfg.Xlo() - 1, 55, 3.1) == 0.0);
  CHECK(nu_weight(kCfg, 2 * kCfg.Xhi() + 1, 55, 3.1) == 0.0);
  // y outside
  CHECK(nu_weight(kCfg, 120, kCfg.Y1() - 0.5, 3.1) == 0.0);
  CHECK(nu_weight(kCfg, 120, 2 * kCfg.Y2() + 0.5, 3.1) == 0.0);
  // boundary grid sweep: zero outside, finite inside
  for (double x : {80.0, 100.0, 150.0, 200.0})
    for (double y : {35.0, 45.0, 70.0, 90.0})
      for (double z : {2.0, 3.0, 4.5, 6.0}) {
        double w = nu_weight(kCfg, x, y, z);
        CHECK(w >= 0.0);
        bool inside = x > kCfg.Xlo() && x < 2 * kCfg.Xhi() && y > kCfg.Y1() && y < 2 * kCfg.Y2() &&
                      z > kCfg.Z1() && z < 2 * kCfg.Z2();
        if (!inside) CHECK(w == 0.0);
      }
}

TEST_CASE("nu_weight matches the nested adaptive oracle at 1e-8") {
  for (double x : {90.0, 110.0, 140.0, 180.0})
    for (double y : {40.5, 55.0, 80.0})
      for (double z : {2.7, 3.3, 4.1, 5.2}) {
        double fast = nu_weight(kCfg, x, y, z);
        double slow = nu_weight_adaptive(kCfg, x, y, z);
        CHECK(std::fabs(fast - slow) < 1e-8);
      }
}

TEST_CASE("nu_weight mirror symmetry in the sign") {
  WeightConfig neg = kCfg;
  neg.sign = -1;
  for (double z : {2.8, 3.5, 5.0})
    CHECK(nu_weight(neg, 120, 55, -z) == nu_weight(kCfg, 120, 55, z));
}

TEST_CASE("sigma_infty: out-of-range a vanishes; interior positive") {
  auto [lo, hi] = reachable_a_interval(kCfg);
  CHECK(sigma_infty(kCfg, hi + 1000).value == 0.0);
  CHECK(sigma_infty(kCfg, lo - 1000).value == 0.0);
  CHECK(sigma_infty(kCfg, -5000).value > 0.0);
}

TEST_CASE("sigma_infty vs slab oracle and eps stability") {
  for (double a : {-12000.0, -5000.0, 1500.0}) {
    auto s = sigma_infty(kCfg, a);
    auto l1 = sigma_infty_slab(kCfg, a, 50.0);
    auto l2 = sigma_infty_slab(kCfg, a, 25.0);
    CHECK(std::fabs(s.value - l1.value) <= 0.01 * s.value);
    CHECK(std::fabs(l1.value - l2.value) <= 0.005 * s.value + l1.error + l2.error);
  }
}

TEST_CASE("grid matches direct evaluation") {
  auto grid = SigmaGrid::build(kCfg, 257);
  for (double a : {-15000.0, -8000.0, -2500.0, 500.0, 4000.0}) {
    double direct = sigma_infty(kCfg, a).value;
    CHECK(std::fabs(grid(a) - direct) <= 5e-3 * direct + 1e-12);
  }

  SUBCASE("tensor-square routes agree (int-eq identities)") {
    auto t2 = sigma_tensor2(kCfg, grid);
    auto t2v = sigma_tensor2_volume(kCfg, grid);
    CHECK(t2.value > 0);
    CHECK(std::fabs(t2v.value - t2.value) <= 0.05 * t2.value);
    // the lattice discretization carries the coarse-z Poisson error; report it
    auto t2l = sigma_tensor2_lattice(kCfg, grid);
    double rel = std::fabs(t2l.value - t2.value) / t2.value;
    std::printf("[info] int-eq lattice discretization deviation at B=100: %.4f\n", rel);
    CHECK(rel < 0.12);
  }

  SUBCASE("poisson progression check") {
    auto full = poisson_progression_check(kCfg, 1, 0, grid);
    CHECK(full.rel_deviation < 0.02);
    auto p0 = poisson_progression_check(kCfg, 2, 0, grid);
    auto p1 = poisson_progression_check(kCfg, 2, 1, grid);
    CHECK(std::fabs(p0.progression_sum + p1.progression_sum - full.progression_sum) <=
          1e-9 * full.progression_sum);
    for (int b = 0; b < 4; ++b) {
      auto p = poisson_progression_check(kCfg, 4, b, grid);
      CHECK(p.rel_deviation < 0.10);
    }
  }

  SUBCASE("profile-style spot check: sigma smooth between grid nodes") {
    double a = -6000.0;
    double mid = 0.5 * (grid(a) + grid(a + 64));
    CHECK(std::fabs(grid(a + 32) - mid) < 0.05 * (std::fabs(mid) + 1e-12));
  }
}

TEST_CASE("pair density: out-of-window zero, symmetry, slab oracle") {
  WeightConfig cfg{60.0, 0.2, 0.01, +1};  // z-window [2.36, 4.92]: a1 in {3,4}
  CHECK(sigma_tensor2_fixed(cfg, 50, 3).value == 0.0);
  CHECK(sigma_tensor2_fixed(cfg, 3, -3).value == 0.0);
  auto v34 = sigma_tensor2_fixed(cfg, 3, 4);
  auto v43 = sigma_tensor2_fixed(cfg, 4, 3);
  CHECK(v34.value > 0);
  CHECK(std::fabs(v34.value - v43.value) <= 0.02 * v34.value);
  auto slab = sigma_tensor2_fixed_slab(cfg, 3, 4, 20.0);
  CHECK(std::fabs(slab.value - v34.value) <= 0.03 * v34.value);
}

TEST_CASE("pair density upper bound shape B^2 (log B)^2 / |a1 a2|") {
  WeightConfig cfg{100.0, 0.2, 0.01, +1};
  double lb = std::log(cfg.B);
  double cfit = 0;
  for (auto [a1, a2] : {std::pair<int64_t, int64_t>{3, 4}, {3, 5}, {4, 5}, {5, 3}}) {
    double v = sigma_tensor2_fixed(cfg, a1, a2).value;
    CHECK(v > 0);
    cfit = std::max(cfit, v * std::fabs(static_cast<double>(a1 * a2)) /
                              (cfg.B * cfg.B * lb * lb));
  }
  std::printf("[info] pair-density bound fitted constant = %.6f\n", cfit);
  CHECK(cfit < 10.0);
}

TEST_CASE("lower-bound growth: sigma(B^2) / (log B)^2 stays positive") {
  double kappa_prev = 0;
  for (double B : {1000.0, 10000.0}) {
    WeightConfig cfg{B, 0.2, 0.01, +1};
    double s = sigma_infty(cfg, B * B).value;
    double kappa = s / (std::log(B) * std::log(B));
    CHECK(s > 0);
    std::printf("[info] B=%g sigma(B^2)=%.6e kappa=%.6e\n", B, s, kappa);
    if (kappa_prev > 0) CHECK(kappa < 50 * kappa_prev);
    if (kappa_prev > 0) CHECK(kappa > kappa_prev / 50);
    kappa_prev = kappa;
  }
}
