#include "mlab/delta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <stdexcept>

#include "json.hpp"
#include "mlab/arith.hpp"
#include "mlab/quadrature.hpp"

namespace mlab::delta {

namespace {

using quad::integrate;

double rho0_mass() {
  static const double I0 = integrate([](double s) { return varrho0(s); }, -1.0, 1.0, 1e-15, 1e-13).value;
  return I0;
}

}  // namespace

double varrho0(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double varrho(double x) {
  static const double c = 4.0 / rho0_mass();
  return c * varrho0(4 * x - 3);
}

double h_kernel(double x, double y) {
  if (!(x > 0)) throw std::invalid_argument("h_kernel: x > 0 required");
  double s = 0;
  // rho(x j) != 0 only for x j in (1/2, 1)
  long j_lo = static_cast<long>(std::floor(0.5 / x)) + 1;
  long j_hi = static_cast<long>(std::ceil(1.0 / x)) - 1;
  for (long j = std::max(1L, j_lo); j <= j_hi; ++j) s += varrho(x * j) / (x * j);
  // rho(|y|/(x j)) != 0 only for x j in (|y|, 2|y|)
  double ay = std::fabs(y);
  if (ay > 0) {
    j_lo = static_cast<long>(std::floor(ay / x)) + 1;
    j_hi = static_cast<long>(std::ceil(2 * ay / x)) - 1;
    for (long j = std::max(1L, j_lo); j <= j_hi; ++j) s -= varrho(ay / (x * j)) / (x * j);
  }
  return s;
}

double h_kernel_naive(double x, double y, long jmax) {
  if (!(x > 0)) throw std::invalid_argument("h_kernel_naive: x > 0 required");
  double s = 0;
  double ay = std::fabs(y);
  for (long j = 1; j <= jmax; ++j) {
    double xj = x * j;
    s += (varrho(xj) - varrho(ay / xj)) / xj;
  }
  return s;
}

namespace {

double smooth_step(double t) {  // 0 for t<=0, 1 for t>=1, C^inf
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  double r0 = std::exp(-1.0 / t), r1 = std::exp(-1.0 / (1 - t));
  return r0 / (r0 + r1);
}

double test_fn(TestFunction f, double y) {
  switch (f) {
    case TestFunction::GaussBump:
      return varrho0(y);
    case TestFunction::ZeroAtOrigin:
      return 0.5 * y * y * varrho0(y);
    case TestFunction::PlateauOnSupport:
      return smooth_step(2.0 * (1.0 - std::fabs(y)));
  }
  return 0.0;
}

}  // namespace

TaylorReport taylor_check(double x, TestFunction f) {
  if (!(x > 0)) throw std::invalid_argument("taylor_check: x > 0 required");
  TaylorReport rep;
  rep.f0 = test_fn(f, 0.0);
  auto r = integrate([&](double y) { return test_fn(f, y) * h_kernel(x, y); }, -1.0, 1.0, 1e-13,
                     1e-10, 48);
  rep.integral = r.value;
  rep.residual = std::fabs(r.value - rep.f0);
  rep.quad_ok = r.converged;
  return rep;
}

FrakS frak_S(const QuadForm4& F, int64_t k, int Kq, EnumBudget budget) {
  if (Kq < 1) throw std::invalid_argument("frak_S: Kq >= 1 required");
  FrakS out;
  out.Kq = Kq;
  // S_q at prime powers, assembled multiplicatively per q.
  std::map<uint64_t, int64_t> pp;
  std::array<int64_t, 4> c0 = {0, 0, 0, 0};
  std::vector<double> dyadic(2, 0.0);  // |S_q| q^{-4} over (Kq/4,Kq/2], (Kq/2,Kq]
  double sum = 0;
  for (uint64_t q = 1; q <= static_cast<uint64_t>(Kq); ++q) {
    __int128 s = 1;
    for (auto [p, e] : arith::factorize(q).factors) {
      uint64_t pe = 1;
      for (int i = 0; i < e; ++i) pe *= p;
      auto it = pp.find(pe);
      if (it == pp.end()) it = pp.emplace(pe, expsums::S_q_quadform(F, k, c0, pe, budget)).first;
      s *= it->second;
    }
    double term = static_cast<double>(static_cast<int64_t>(s)) /
                  (static_cast<double>(q) * q * q * q);
    sum += term;
    if (2 * q > static_cast<uint64_t>(Kq)) dyadic[1] += std::fabs(term);
    else if (4 * q > static_cast<uint64_t>(Kq)) dyadic[0] += std::fabs(term);
  }
  out.value = sum;
  // Partial summation of the q^{7/2} average bound gives a K^{-1/2} tail; fit
  // the constant on the last two observed dyadic blocks.
  double c_fit = 0;
  c_fit = std::max(c_fit, dyadic[0] * std::sqrt(static_cast<double>(Kq) / 4.0));
  c_fit = std::max(c_fit, dyadic[1] * std::sqrt(static_cast<double>(Kq) / 2.0));
  out.tail = 3.5 * c_fit / std::sqrt(static_cast<double>(Kq));
  return out;
}

double annulus_weight(double x1, double x2, double x3, double x4) {
  double r = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4);
  return varrho0(2.0 * (r - 1.5));
}

namespace {

struct QuadInX4 {
  double A, B, C;  // F(x) - k = A x4^2 + B x4 + C for fixed x1..x3
};

QuadInX4 x4_quadratic(const QuadForm4& F, int64_t k, double x1, double x2, double x3) {
  QuadInX4 q;
  q.A = static_cast<double>(F.diag[3]);
  q.B = F.cross[0][3] * x1 + F.cross[1][3] * x2 + F.cross[2][3] * x3;
  q.C = F.diag[0] * x1 * x1 + F.diag[1] * x2 * x2 + F.diag[2] * x3 * x3 +
        F.cross[0][1] * x1 * x2 + F.cross[0][2] * x1 * x3 + F.cross[1][2] * x2 * x3 -
        static_cast<double>(k);
  return q;
}

// Intervals where |A t^2 + B t + C| <= eps (A != 0); up to 2, in inc order.
int quad_slab_intervals(double A, double B, double C, double eps, double out[2][2]) {
  // reduce to monic by dividing by A (flips the band for A < 0)
  double lo_lvl = (-eps) / A, hi_lvl = eps / A;
  if (A < 0) std::swap(lo_lvl, hi_lvl);
  double b = B / A, c = C / A;
  // now need lo_lvl <= t^2 + b t + c <= hi_lvl
  double d_hi = b * b - 4 * (c - hi_lvl);
  if (d_hi <= 0) return 0;
  double s = std::sqrt(d_hi);
  double r1 = 0.5 * (-b - s), r2 = 0.5 * (-b + s);
  double d_lo = b * b - 4 * (c - lo_lvl);
  if (d_lo <= 0) {
    out[0][0] = r1;
    out[0][1] = r2;
    return 1;
  }
  double t = std::sqrt(d_lo);
  double s1 = 0.5 * (-b - t), s2 = 0.5 * (-b + t);
  out[0][0] = r1;
  out[0][1] = s1;
  out[1][0] = s2;
  out[1][1] = r2;
  return 2;
}

// Coefficients of disc(x3) = B(x3)^2 - 4 A C(x3) as a quadratic in x3.
struct DiscQuad {
  double qa, qb, qc;
};

DiscQuad disc_in_x3(const QuadForm4& F, int64_t k, double x1, double x2) {
  double A = static_cast<double>(F.diag[3]);
  double b1c = F.cross[2][3];
  double b0c = F.cross[0][3] * x1 + F.cross[1][3] * x2;
  double c2 = static_cast<double>(F.diag[2]);
  double c1 = F.cross[0][2] * x1 + F.cross[1][2] * x2;
  double c0 =
      F.diag[0] * x1 * x1 + F.diag[1] * x2 * x2 + F.cross[0][1] * x1 * x2 - static_cast<double>(k);
  return {b1c * b1c - 4 * A * c2, 2 * b0c * b1c - 4 * A * c1, b0c * b0c - 4 * A * c0};
}

// Appends the real roots of qa t^2 + qb t + qc + shift inside (-b, b).
void push_cuts(const DiscQuad& d, double shift, double b, double* cuts, int& n) {
  double qc = d.qc + shift;
  if (d.qa != 0) {
    double dd = d.qb * d.qb - 4 * d.qa * qc;
    if (dd <= 0) return;
    double sd = std::sqrt(dd);
    for (double r : {(-d.qb - sd) / (2 * d.qa), (-d.qb + sd) / (2 * d.qa)})
      if (r > -b && r < b) cuts[n++] = r;
  } else if (d.qb != 0) {
    double r = -qc / d.qb;
    if (r > -b && r < b) cuts[n++] = r;
  }
}

double halton(uint64_t i, uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// 5-point Gauss-Legendre on [a,b] (the x4-intervals are short and w smooth).
template <class F>
double gl5(F&& f, double a, double b) {
  static const double x[5] = {-0.906179845938664, -0.538469310105683, 0.0, 0.538469310105683,
                              0.906179845938664};
  static const double w[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                              0.478628670499366, 0.236926885056189};
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 5; ++i) s += w[i] * f(c + h * x[i]);
  return s * h;
}

// Deterministic Halton QMC over (x1,x2,x3) with the exact x4-interval
// measure, evaluated at eps and eps/2 on the same point stream so the
// Richardson step cancels the common QMC error.
std::pair<double, double> sigma_slab_pair(const QuadForm4& F, int64_t k,
                                          const std::array<double, 4>& lambda, double P,
                                          double eps, long npts = 1 << 23) {
  const double b1 = 2 * P / lambda[0], b2 = 2 * P / lambda[1], b3 = 2 * P / lambda[2],
               b4 = 2 * P / lambda[3];
  double acc1 = 0, acc2 = 0;
  for (long i = 1; i <= npts; ++i) {
    double x1 = b1 * (2 * halton(i, 2) - 1);
    double x2 = b2 * (2 * halton(i, 3) - 1);
    double x3 = b3 * (2 * halton(i, 5) - 1);
    auto q = x4_quadratic(F, k, x1, x2, x3);
    auto w4 = [&](double x4) {
      return annulus_weight(lambda[0] * x1 / P, lambda[1] * x2 / P, lambda[2] * x3 / P,
                            lambda[3] * x4 / P);
    };
    for (int half = 0; half < 2; ++half) {
      double e = half ? eps / 2 : eps;
      double iv[2][2];
      int n = quad_slab_intervals(q.A, q.B, q.C, e, iv);
      double a = 0;
      for (int j = 0; j < n; ++j) {
        double lo = std::max(iv[j][0], -b4), hi = std::min(iv[j][1], b4);
        if (lo >= hi) continue;
        a += gl5(w4, lo, hi);
      }
      (half ? acc2 : acc1) += a / (2 * e);
    }
  }
  double scale = 8 * b1 * b2 * b3 / static_cast<double>(npts);
  return {acc1 * scale, acc2 * scale};
}

}  // namespace

double sigma_infty_quadform(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                            double P) {
  if (F.diag[3] == 0)
    throw std::invalid_argument("sigma_infty_quadform: need a nonzero x4^2 coefficient");
  double nf = to_double(F.norm());
  double eps0 = 0.02 * P * (1.0 + nf);
  auto [s1, s2] = sigma_slab_pair(F, k, lambda, P, eps0);
  return (4 * s2 - s1) / 3;  // Richardson over {eps0, eps0/2}
}

double sigma_infty_quadform_surface(const QuadForm4& F, int64_t k,
                                    const std::array<double, 4>& lambda, double P) {
  if (F.diag[3] == 0)
    throw std::invalid_argument("sigma_infty_quadform_surface: need a nonzero x4^2 coefficient");
  const double b1 = 2 * P / lambda[0], b2 = 2 * P / lambda[1], b3 = 2 * P / lambda[2];
  const long npts = 1 << 22;
  double acc = 0;
  for (long i = 1; i <= npts; ++i) {
    double x1 = b1 * (2 * halton(i, 2) - 1);
    double x2 = b2 * (2 * halton(i, 3) - 1);
    double x3 = b3 * (2 * halton(i, 5) - 1);
    auto q = x4_quadratic(F, k, x1, x2, x3);
    double disc = q.B * q.B - 4 * q.A * q.C;
    if (disc <= 0) continue;
    double s = std::sqrt(disc);
    for (double x4 : {(-q.B - s) / (2 * q.A), (-q.B + s) / (2 * q.A)})
      acc += annulus_weight(lambda[0] * x1 / P, lambda[1] * x2 / P, lambda[2] * x3 / P,
                            lambda[3] * x4 / P) /
             s;
  }
  return acc * 8 * b1 * b2 * b3 / static_cast<double>(npts);
}

double weighted_count(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                      double P) {
  if (F.diag[3] == 0) throw std::invalid_argument("weighted_count: need a nonzero x4^2 coefficient");
  const int64_t b1 = static_cast<int64_t>(std::floor(2 * P / lambda[0]));
  const int64_t b2 = static_cast<int64_t>(std::floor(2 * P / lambda[1]));
  const int64_t b3 = static_cast<int64_t>(std::floor(2 * P / lambda[2]));
  const int64_t A = F.diag[3];
  double acc = 0;
  for (int64_t x1 = -b1; x1 <= b1; ++x1)
    for (int64_t x2 = -b2; x2 <= b2; ++x2)
      for (int64_t x3 = -b3; x3 <= b3; ++x3) {
        int64_t B = F.cross[0][3] * x1 + F.cross[1][3] * x2 + F.cross[2][3] * x3;
        int64_t C = F.diag[0] * x1 * x1 + F.diag[1] * x2 * x2 + F.diag[2] * x3 * x3 +
                    F.cross[0][1] * x1 * x2 + F.cross[0][2] * x1 * x3 + F.cross[1][2] * x2 * x3 -
                    k;
        __int128 disc = static_cast<__int128>(B) * B - 4 * static_cast<__int128>(A) * C;
        if (disc < 0) continue;
        __int128 s = static_cast<__int128>(std::sqrt(static_cast<double>(disc)));
        while (s > 0 && s * s > disc) --s;
        while ((s + 1) * (s + 1) <= disc) ++s;
        if (s * s != disc) continue;
        for (int pm = 0; pm < (s == 0 ? 1 : 2); ++pm) {
          __int128 num = -static_cast<__int128>(B) + (pm == 0 ? -s : s);
          __int128 den = 2 * static_cast<__int128>(A);
          if (num % den != 0) continue;
          int64_t x4 = static_cast<int64_t>(num / den);
          acc += annulus_weight(lambda[0] * x1 / P, lambda[1] * x2 / P, lambda[2] * x3 / P,
                                lambda[3] * x4 / P);
        }
      }
  return acc;
}

double I_q_c0(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda, double P,
              uint64_t q) {
  if (q < 1) throw std::invalid_argument("I_q_c0: q >= 1 required");
  const double Q = std::sqrt(1.0 + to_double(F.norm())) * P;
  const double b1 = 2 * P / lambda[0], b2 = 2 * P / lambda[1], b3 = 2 * P / lambda[2],
               b4 = 2 * P / lambda[3];
  const long npts = 1 << 22;
  double acc = 0;
  for (long i = 1; i <= npts; ++i) {
    std::array<int64_t, 4> none{};
    (void)none;
    double x1 = b1 * (2 * halton(i, 2) - 1);
    double x2 = b2 * (2 * halton(i, 3) - 1);
    double x3 = b3 * (2 * halton(i, 5) - 1);
    double x4 = b4 * (2 * halton(i, 7) - 1);
    double w = annulus_weight(lambda[0] * x1 / P, lambda[1] * x2 / P, lambda[2] * x3 / P,
                              lambda[3] * x4 / P);
    if (w == 0.0) continue;
    auto qx = x4_quadratic(F, k, x1, x2, x3);
    double Fv = qx.A * x4 * x4 + qx.B * x4 + qx.C;
    acc += w * h_kernel(static_cast<double>(q) / Q, Fv / (Q * Q));
  }
  return acc * 16 * b1 * b2 * b3 * b4 / static_cast<double>(npts);
}

std::string MainTermReport::to_json() const {
  nlohmann::ordered_json j;
  j["sigma_infty"] = sigma_infty;
  j["frakS_truncated"] = frakS;
  j["frakS_tail"] = frakS_tail;
  j["brute_count"] = brute_count;
  j["residual"] = residual;
  return j.dump();
}

MainTermReport blackbox_compare(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                                double P, int Kq, EnumBudget budget) {
  MainTermReport rep;
  rep.P = P;
  rep.sigma_infty = sigma_infty_quadform(F, k, lambda, P);
  auto fs = frak_S(F, k, Kq, budget);
  rep.frakS = fs.value;
  rep.frakS_tail = fs.tail;
  rep.brute_count = weighted_count(F, k, lambda, P);
  rep.residual = rep.brute_count - rep.sigma_infty * rep.frakS;
  rep.residual_scaled = rep.residual / std::pow(P, 1.5);
  const double eps = 0.01;
  double nf = 1.0 + to_double(F.norm());
  double ldet = std::fabs(to_double(F.det()));
  double lam4 = lambda[0] * lambda[1] * lambda[2] * lambda[3];
  double lmax = std::max({lambda[0], lambda[1], lambda[2], lambda[3]});
  rep.E_factor = std::pow(nf, 0.75 + eps) * std::pow(nf, 32.0) * std::pow(lam4, 15.0) /
                     std::pow(ldet, 8.0) +
                 std::pow(nf, 2.75 + eps) * std::pow(lmax, 4.0);
  return rep;
}

}  // namespace mlab::delta
