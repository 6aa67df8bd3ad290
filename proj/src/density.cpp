#include "mlab/density.hpp"

#include <cmath>
#include <stdexcept>

#include "mlab/delta.hpp"

namespace mlab::density {

namespace {

using quad::integrate;
using quad::Result;

double rho0_mass() {
  static const double I0 =
      integrate([](double s) { return delta::varrho0(s); }, -1.0, 1.0, 1e-15, 1e-13).value;
  return I0;
}

// Fixed 15-point Gauss-Kronrod tensor rule; the (Y,Z) windows are short and
// the integrand analytic, so a single panel per axis is exact to roundoff.
template <class F>
double gk15_fixed(F&& f, double a, double b) {
  using quad::detail::kWgk;
  using quad::detail::kXgk;
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kWgk[7] * f(c);
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    s += kWgk[j] * (f(c - x) + f(c + x));
  }
  return s * h;
}

}  // namespace

double WeightConfig::Z1() const { return std::pow(B, delta + eta); }
double WeightConfig::Z2() const { return std::pow(B, delta + 2 * eta); }
double WeightConfig::Y1() const { return std::pow(B, 1 - delta); }
double WeightConfig::Y2() const { return std::pow(B, 1 - delta + eta); }
double WeightConfig::Xlo() const { return B * B / (Y2() * Z2()); }
double WeightConfig::Xhi() const { return B * B / (Y1() * Z1()); }

void WeightConfig::validate() const {
  if (!(B > 1)) throw std::invalid_argument("WeightConfig: B > 1 required");
  if (!(eta > 0) || !(delta > 0) || !(eta < delta / 10))
    throw std::invalid_argument("WeightConfig: 0 < eta < delta/10 required");
  if (!(delta < 0.5)) throw std::invalid_argument("WeightConfig: delta < 1/2 required");
  if (sign != 1 && sign != -1) throw std::invalid_argument("WeightConfig: sign must be +-1");
}

double bump(double u) {
  if (u <= 1.0 || u >= 2.0) return 0.0;
  static const double c = 2.0 / rho0_mass();
  return c * delta::varrho0(2 * u - 3);
}

double nu_weight(const WeightConfig& cfg, double x, double y, double z) {
  double sz = cfg.sign * z;
  if (!(sz > 0) || !(x > 0) || !(y > 0)) return 0.0;
  const double Z1 = cfg.Z1(), Z2 = cfg.Z2(), Y1 = cfg.Y1(), Y2 = cfg.Y2();
  if (sz <= Z1 || sz >= 2 * Z2 || y <= Y1 || y >= 2 * Y2) return 0.0;
  if (x <= cfg.Xlo() || x >= 2 * cfg.Xhi()) return 0.0;
  const double B2 = cfg.B * cfg.B;
  auto outer = [&](double tz) {
    double fz = bump(sz * std::exp(-tz));
    if (fz == 0.0) return 0.0;
    double xe = x * std::exp(tz) / B2;
    return fz * gk15_fixed(
                    [&](double ty) { return bump(y * std::exp(-ty)) * bump(xe * std::exp(ty)); },
                    std::log(Y1), std::log(Y2));
  };
  return gk15_fixed(outer, std::log(Z1), std::log(Z2));
}

DensityValue sigma_infty(const WeightConfig& cfg, double a) {
  cfg.validate();
  // Scaled coordinates: x = X u, y = Y v with u,v in the bump support [1,2];
  // the level-set measure contributes 1/|2z - xy| = 1/sqrt(D) at each z-root.
  const double B2 = cfg.B * cfg.B;
  const double lZ1 = std::log(cfg.Z1()), lZ2 = std::log(cfg.Z2());
  const double lY1 = std::log(cfg.Y1()), lY2 = std::log(cfg.Y2());
  Result r = integrate(
      [&](double lz) {
        double Z = std::exp(lz);
        return integrate(
                   [&](double ly) {
                     double Y = std::exp(ly);
                     double X = B2 / (Y * Z);
                     double inner = integrate(
                                        [&](double u) {
                                          double x = X * u, bu = bump(u);
                                          return bu * integrate(
                                                          [&](double v) {
                                                            double y = Y * v;
                                                            double xy = x * y;
                                                            double D = xy * xy -
                                                                       4 * (x * x + y * y - a);
                                                            if (D <= 0) return 0.0;
                                                            double s = std::sqrt(D);
                                                            double w =
                                                                bump(cfg.sign * 0.5 * (xy - s) / Z) +
                                                                bump(cfg.sign * 0.5 * (xy + s) / Z);
                                                            if (w == 0.0) return 0.0;
                                                            return bump(v) * w / s;
                                                          },
                                                          1.0, 2.0, 1e-18, 3e-6)
                                                          .value;
                                        },
                                        1.0, 2.0, 1e-18, 1e-6)
                                        .value;
                     return X * Y * inner;
                   },
                   lY1, lY2, 1e-18, 1e-5)
            .value;
      },
      lZ1, lZ2, 1e-18, 3e-5);
  DensityValue out;
  out.value = r.value;
  out.error = r.error + 1e-4 * std::fabs(r.value);
  out.route = Route::SurfaceIntegral;
  out.converged = r.converged;
  return out;
}

namespace {

// Intervals of t where |q(t)| <= eps for q(t) = t^2 + b t + c (monic).
// Returns 0, 1 or 2 intervals in inc order.
int slab_intervals(double b, double c, double eps, double out[2][2]) {
  double dm = b * b - 4 * (c - eps);  // roots of q = +eps
  if (dm <= 0) return 0;
  double sm = std::sqrt(dm);
  double r1 = 0.5 * (-b - sm), r2 = 0.5 * (-b + sm);
  double dp = b * b - 4 * (c + eps);  // roots of q = -eps
  if (dp <= 0) {
    out[0][0] = r1;
    out[0][1] = r2;
    return 1;
  }
  double sp = std::sqrt(dp);
  double s1 = 0.5 * (-b - sp), s2 = 0.5 * (-b + sp);
  out[0][0] = r1;
  out[0][1] = s1;
  out[1][0] = s2;
  out[1][1] = r2;
  return 2;
}

}  // namespace

DensityValue sigma_infty_slab(const WeightConfig& cfg, double a, double eps) {
  cfg.validate();
  if (!(eps > 0)) throw std::invalid_argument("sigma_infty_slab: eps > 0 required");
  const double xlo = cfg.Xlo(), xhi = 2 * cfg.Xhi();
  const double ylo = cfg.Y1(), yhi = 2 * cfg.Y2();
  const double zlo = cfg.sign > 0 ? cfg.Z1() : -2 * cfg.Z2();
  const double zhi = cfg.sign > 0 ? 2 * cfg.Z2() : -cfg.Z1();
  Result r = integrate(
      [&](double x) {
        return integrate(
                   [&](double y) {
                     // M(x,y,z) - a = z^2 - xy z + (x^2+y^2-a)
                     double iv[2][2];
                     int n = slab_intervals(-x * y, x * x + y * y - a, eps, iv);
                     double acc = 0;
                     for (int i = 0; i < n; ++i) {
                       double lo = std::max(iv[i][0], zlo), hi = std::min(iv[i][1], zhi);
                       if (lo >= hi) continue;
                       acc += integrate([&](double z) { return nu_weight(cfg, x, y, z); }, lo, hi,
                                        1e-18, 1e-6)
                                  .value;
                     }
                     return acc;
                   },
                   ylo, yhi, 1e-18, 3e-6)
            .value;
      },
      xlo, xhi, 1e-18, 1e-5);
  DensityValue out;
  out.value = r.value / (2 * eps);
  out.error = (r.error + 1e-5 * std::fabs(r.value)) / (2 * eps);
  out.route = Route::SlabLimit;
  out.converged = r.converged;
  return out;
}

std::pair<double, double> reachable_a_interval(const WeightConfig& cfg) {
  double x2hi = 4 * cfg.Xhi() * cfg.Xhi(), y2hi = 4 * cfg.Y2() * cfg.Y2(),
         z2hi = 4 * cfg.Z2() * cfg.Z2();
  double x2lo = cfg.Xlo() * cfg.Xlo(), y2lo = cfg.Y1() * cfg.Y1(), z2lo = cfg.Z1() * cfg.Z1();
  double p_lo = cfg.Xlo() * cfg.Y1() * cfg.Z1();      // min |xyz|
  double p_hi = 8 * cfg.Xhi() * cfg.Y2() * cfg.Z2();  // max |xyz|
  double xyz_min, xyz_max;
  if (cfg.sign > 0) {
    xyz_min = p_lo;
    xyz_max = p_hi;
  } else {
    xyz_min = -p_hi;
    xyz_max = -p_lo;
  }
  double lo = x2lo + y2lo + z2lo - xyz_max;
  double hi = x2hi + y2hi + z2hi - xyz_min;
  double pad = 0.01 * (hi - lo);
  return {lo - pad, hi + pad};
}

SigmaGrid SigmaGrid::build(const WeightConfig& cfg, int nodes) {
  cfg.validate();
  if (nodes < 8) throw std::invalid_argument("SigmaGrid: nodes >= 8 required");
  auto [lo, hi] = reachable_a_interval(cfg);
  SigmaGrid g;
  g.amin_ = lo;
  g.amax_ = hi;
  std::vector<double> xs(nodes), ys(nodes);
  for (int i = 0; i < nodes; ++i) {
    xs[i] = lo + (hi - lo) * i / (nodes - 1);
    ys[i] = sigma_infty(cfg, xs[i]).value;
  }
  g.interp_ = quad::Pchip(xs, ys);
  return g;
}

double SigmaGrid::operator()(double a) const {
  if (a <= amin_ || a >= amax_) return 0.0;
  double v = interp_(a);
  return v > 0 ? v : 0.0;
}

DensityValue sigma_tensor2(const WeightConfig& cfg, const SigmaGrid& grid) {
  cfg.validate();
  Result r = integrate([&](double a) { double s = grid(a); return s * s; }, grid.a_min(),
                       grid.a_max(), 1e-18, 1e-7, 48);
  DensityValue out;
  out.value = r.value;
  out.error = r.error + 0.005 * std::fabs(r.value);  // grid interpolation allowance
  out.route = Route::AIntegral;
  out.converged = r.converged;
  return out;
}

DensityValue sigma_tensor2_volume(const WeightConfig& cfg, const SigmaGrid& grid) {
  cfg.validate();
  const double xlo = cfg.Xlo(), xhi = 2 * cfg.Xhi();
  const double ylo = cfg.Y1(), yhi = 2 * cfg.Y2();
  const double zlo = cfg.sign > 0 ? cfg.Z1() : -2 * cfg.Z2();
  const double zhi = cfg.sign > 0 ? 2 * cfg.Z2() : -cfg.Z1();
  Result r = integrate(
      [&](double z) {
        return integrate(
                   [&](double y) {
                     return integrate(
                                [&](double x) {
                                  double w = nu_weight(cfg, x, y, z);
                                  if (w == 0.0) return 0.0;
                                  return w * grid(x * x + y * y + z * z - x * y * z);
                                },
                                xlo, xhi, 1e-18, 1e-6)
                         .value;
                   },
                   ylo, yhi, 1e-18, 3e-6)
            .value;
      },
      zlo, zhi, 1e-18, 1e-5);
  DensityValue out;
  out.value = r.value;
  out.error = r.error + 0.005 * std::fabs(r.value);
  out.route = Route::VolumeIntegral;
  out.converged = r.converged;
  return out;
}

DensityValue sigma_tensor2_lattice(const WeightConfig& cfg, const SigmaGrid& grid) {
  cfg.validate();
  int64_t zlo = static_cast<int64_t>(std::ceil(cfg.Z1()));
  int64_t zhi = static_cast<int64_t>(std::floor(2 * cfg.Z2()));
  int64_t ylo = static_cast<int64_t>(std::ceil(cfg.Y1()));
  int64_t yhi = static_cast<int64_t>(std::floor(2 * cfg.Y2()));
  int64_t xlo = static_cast<int64_t>(std::ceil(cfg.Xlo()));
  int64_t xhi = static_cast<int64_t>(std::floor(2 * cfg.Xhi()));
  double acc = 0;
  for (int64_t zz = zlo; zz <= zhi; ++zz) {
    int64_t z = cfg.sign > 0 ? zz : -zz;
    for (int64_t y = ylo; y <= yhi; ++y)
      for (int64_t x = xlo; x <= xhi; ++x) {
        double w = nu_weight(cfg, static_cast<double>(x), static_cast<double>(y),
                             static_cast<double>(z));
        if (w == 0.0) continue;
        int64_t m = x * x + y * y + z * z - x * y * z;
        acc += w * grid(static_cast<double>(m));
      }
  }
  DensityValue out;
  out.value = acc;
  out.error = 0.01 * std::fabs(acc);
  out.route = Route::LatticeSum;
  return out;
}

namespace {

// G_{a1,a2}(v,w) couples the two factors only through the scalar
// c = Q2(w) - a1^2 + a2^2 with Q2(w) = w1^2 + w2^2 - a2 w1 w2, so both pair
// density routes reduce to a 1D inner profile in c played against a 2D outer
// integral over (w1, w2).
template <class Inner>
DensityValue pair_density_outer(const WeightConfig& cfg, int64_t a1, int64_t a2, Inner&& inner,
                                density::Route route) {
  DensityValue out;
  out.route = route;
  double sa1 = cfg.sign * static_cast<double>(a1), sa2 = cfg.sign * static_cast<double>(a2);
  if (sa1 <= cfg.Z1() || sa1 >= 2 * cfg.Z2() || sa2 <= cfg.Z1() || sa2 >= 2 * cfg.Z2()) return out;
  const double xlo = cfg.Xlo(), xhi = 2 * cfg.Xhi();
  const double ylo = cfg.Y1(), yhi = 2 * cfg.Y2();
  const double da1 = static_cast<double>(a1), da2 = static_cast<double>(a2);
  auto c_of = [&](double w1, double w2) {
    return w1 * w1 + w2 * w2 - da2 * w1 * w2 - da1 * da1 + da2 * da2;
  };
  // range of c over the support box (quadratic in w: scan + pad)
  double cmin = 1e300, cmax = -1e300;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      double c = c_of(xlo + (xhi - xlo) * i / 40.0, ylo + (yhi - ylo) * j / 40.0);
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  double pad = 0.02 * (cmax - cmin) + 1;
  cmin -= pad;
  cmax += pad;
  const int nodes = 385;
  std::vector<double> cs(nodes), vs(nodes);
  for (int i = 0; i < nodes; ++i) {
    cs[i] = cmin + (cmax - cmin) * i / (nodes - 1);
    vs[i] = inner(cs[i]);
  }
  quad::Pchip profile(cs, vs);
  Result r = integrate(
      [&](double w1) {
        return integrate(
                   [&](double w2) {
                     double nw = nu_weight(cfg, w1, w2, da2);
                     if (nw == 0.0) return 0.0;
                     return nw * profile(c_of(w1, w2));
                   },
                   ylo, yhi, 1e-18, 3e-5)
            .value;
      },
      xlo, xhi, 1e-18, 1e-4);
  out.value = r.value;
  out.error = r.error + 1e-2 * std::fabs(r.value);  // inner-profile interpolation allowance
  out.converged = r.converged;
  return out;
}

}  // namespace

DensityValue sigma_tensor2_fixed(const WeightConfig& cfg, int64_t a1, int64_t a2) {
  cfg.validate();
  const double xlo = cfg.Xlo(), xhi = 2 * cfg.Xhi();
  const double da1 = static_cast<double>(a1);
  // surface route: solve Q1(v) = c for v2; the root-collision locus
  // v2 = a1 v1 / 2 lies outside the y-window, so 1/|2v2 - a1 v1| stays bounded
  auto inner = [&](double c) {
    return integrate(
               [&](double v1) {
                 double D = da1 * da1 * v1 * v1 - 4 * (v1 * v1 - c);
                 if (D <= 0) return 0.0;
                 double s = std::sqrt(D);
                 double acc = 0;
                 for (double v2 : {0.5 * (da1 * v1 - s), 0.5 * (da1 * v1 + s)})
                   acc += nu_weight(cfg, v1, v2, da1);
                 return acc / s;
               },
               xlo, xhi, 1e-18, 1e-5)
        .value;
  };
  return pair_density_outer(cfg, a1, a2, inner, Route::SurfaceIntegral);
}

DensityValue sigma_tensor2_fixed_slab(const WeightConfig& cfg, int64_t a1, int64_t a2,
                                      double eps) {
  cfg.validate();
  if (!(eps > 0)) throw std::invalid_argument("sigma_tensor2_fixed_slab: eps > 0 required");
  const double xlo = cfg.Xlo(), xhi = 2 * cfg.Xhi();
  const double ylo = cfg.Y1(), yhi = 2 * cfg.Y2();
  const double da1 = static_cast<double>(a1);
  // slab route: (2 eps)^{-1} exact v1-interval measure of |Q1(v) - c| <= eps
  auto inner = [&](double c) {
    double v =
        integrate(
            [&](double v2) {
              double iv[2][2];
              int n = slab_intervals(-da1 * v2, v2 * v2 - c, eps, iv);
              double acc = 0;
              for (int i = 0; i < n; ++i) {
                double lo = std::max(iv[i][0], xlo), hi = std::min(iv[i][1], xhi);
                if (lo >= hi) continue;
                acc += integrate([&](double v1) { return nu_weight(cfg, v1, v2, da1); }, lo, hi,
                                 1e-18, 1e-5)
                           .value;
              }
              return acc;
            },
            ylo, yhi, 1e-18, 3e-5)
            .value;
    return v / (2 * eps);
  };
  return pair_density_outer(cfg, a1, a2, inner, Route::SlabLimit);
}

ProgressionReport poisson_progression_check(const WeightConfig& cfg, int N, int b,
                                            const SigmaGrid& grid) {
  if (N < 1 || N > 8) throw std::invalid_argument("poisson_progression_check: 1 <= N <= 8");
  ProgressionReport rep;
  int64_t lo = static_cast<int64_t>(std::floor(grid.a_min()));
  int64_t first = lo + ((b - lo) % N + N) % N;
  for (int64_t a = first; a <= static_cast<int64_t>(std::ceil(grid.a_max())); a += N) {
    double s = grid(static_cast<double>(a));
    rep.progression_sum += s * s;
  }
  rep.expected = sigma_tensor2(cfg, grid).value / N;
  rep.rel_deviation = rep.expected != 0 ? std::fabs(rep.progression_sum - rep.expected) /
                                              std::fabs(rep.expected)
                                        : std::fabs(rep.progression_sum);
  return rep;
}

}  // namespace mlab::density
