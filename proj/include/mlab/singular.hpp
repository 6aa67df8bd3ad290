#pragma once

#include <cstdint>
#include <vector>

#include "mlab/expsums.hpp"
#include "mlab/rational.hpp"

namespace mlab::singular {

using expsums::EnumBudget;

// Truncated singular series value, exact.
struct SingularSeriesValue {
  Rational value;
  uint64_t K = 1;
  double as_double() const { return to_double(value); }
};

// Partial local factor gamma_p^{(L)}(a) with a tail estimate. The tail is
// exactly zero once the truncation passes the vanishing threshold of
// T_a(p^l); otherwise it is a fitted geometric bound.
struct LocalFactor {
  uint64_t p = 2;
  int L = 0;
  Rational value;
  double tail = 0.0;
  bool converged = false;
};

// gamma(a) = prod_p gamma_p(a), float with an interval error bar.
struct GammaValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

// s_a(K) = sum_{m <= K} m^{-3} T_a(m)
SingularSeriesValue s_a(int64_t a, uint64_t K, EnumBudget budget = {});

// t_a(K) = sum_{n <= K, gcd(n,30)=1} mu(n) n^{-3} T_a(n)
Rational t_a(int64_t a, uint64_t K, EnumBudget budget = {});

// Multiplicative coefficients with prime-power values
//   c_a(p^l) = p^{-l} [ T^nat_a(p^l) - T^nat_a(p^{l-1}) T^nat_a(p) 1_{p>=7} ].
Rational c_a(int64_t a, uint64_t n, EnumBudget budget = {});

// Divisor-sum form of c_a (cross-check route):
//   c_a(n) = n^{-3} sum_{d | n, gcd(n/d,30)=1} T_a(d) mu(n/d) T_a(n/d).
Rational c_a_divisor_sum(int64_t a, uint64_t n, EnumBudget budget = {});

// Partial local factor through level L:
//   gamma_p^{(L)}(a) = (1 - p^{-3} T_a(p) 1_{p>=7}) (1 + sum_{l<=L} p^{-3l} T_a(p^l)).
LocalFactor gamma_p(int64_t a, uint64_t p, int L, EnumBudget budget = {});

// Product over p <= P0 with explicit factors, plus interval bounds for the
// primes beyond the cutoff. Requires a != 0.
GammaValue gamma_product(int64_t a, uint64_t P0, EnumBudget budget = {});

// S(A, K, eta) = { a : |a| <= A, a admissible, |s_a(K)| <= eta }, ascending.
std::vector<int64_t> small_value_set(int64_t A, uint64_t K, double eta, EnumBudget budget = {});

// Fitted constant C with |T^nat_a(p^l)| <= C p^{l/2} over the calibration
// sample of prime powers p^l <= 81, l >= 2 (cached).
double bound_T2_fitted_constant();

}  // namespace mlab::singular
