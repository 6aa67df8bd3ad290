#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mlab/expsums.hpp"

namespace mlab::delta {

using expsums::EnumBudget;
using expsums::QuadForm4;

// rho0(x) = exp(-(1-x^2)^{-1}) on |x| < 1, zero outside.
double varrho0(double x);

// rho(x) = 4 (int rho0)^{-1} rho0(4x-3); mass 1, supported on [1/2, 1].
double varrho(double x);

// h(x,y) = sum_{j>=1} (xj)^{-1} (rho(xj) - rho(|y|/(xj))); both j-windows are
// finite and evaluated exactly.
double h_kernel(double x, double y);

// Naive truncated summation oracle (j <= jmax).
double h_kernel_naive(double x, double y, long jmax);

enum class TestFunction { GaussBump, ZeroAtOrigin, PlateauOnSupport };

struct TaylorReport {
  double integral = 0;
  double f0 = 0;
  double residual = 0;  // |integral - f(0)|
  bool quad_ok = true;
};

// I(f) = int f(y) h(x,y) dy compared against f(0).
TaylorReport taylor_check(double x, TestFunction f);

struct FrakS {
  double value = 0;
  double tail = 0;  // fitted K^{-1/2} estimate for the truncated remainder
  int Kq = 0;
};

// Truncated singular series sum_{q<=Kq} q^{-4} S_q(F,k,0) with a tail fit.
FrakS frak_S(const QuadForm4& F, int64_t k, int Kq, EnumBudget budget = {});

// sigma_infty = lim (2 eps)^{-1} int_{|F(x)-k|<=eps} w(lambda x / P) dx with
// the built-in annulus weight w; Richardson extrapolation over eps, eps/2.
double sigma_infty_quadform(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                            double P);

// Surface-parametrization route (oracle): int over the level set of
// w / |dF/dx4| summed over x4-roots.
double sigma_infty_quadform_surface(const QuadForm4& F, int64_t k,
                                    const std::array<double, 4>& lambda, double P);

// Exact weighted count of integer solutions of F(x) = k in the support box.
double weighted_count(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                      double P);

struct MainTermReport {
  double sigma_infty = 0;
  double frakS = 0;
  double frakS_tail = 0;
  double brute_count = 0;
  double residual = 0;        // brute_count - sigma_infty * frakS
  double residual_scaled = 0; // residual / P^{3/2}
  double E_factor = 0;        // the uniform error factor E(F,lambda), eps = 0.01
  double P = 0;
  std::string to_json() const;
};

MainTermReport blackbox_compare(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda,
                                double P, int Kq, EnumBudget budget = {});

// The built-in smooth annulus weight w(x) = rho0(2(||x|| - 3/2)) (support
// 1 <= ||x|| <= 2).
double annulus_weight(double x1, double x2, double x3, double x4);

// Optional diagnostic: the oscillation-free integral
//   I_q(F,k,w,lambda,P,0) = int w(lambda x/P) h(q/Q, (F(x)-k)/Q^2) dx,
// Q = (1+||F||)^{1/2} P. For q << Q, I_q / Q^2 approaches sigma_infty.
double I_q_c0(const QuadForm4& F, int64_t k, const std::array<double, 4>& lambda, double P,
              uint64_t q);

}  // namespace mlab::delta
