#include "mlab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "mlab/arith.hpp"
#include "mlab/markoff.hpp"

namespace mlab::singular {

namespace {

using arith::factorize;
using arith::mobius;
using expsums::T;
using expsums::t_table;

uint64_t pow_u64(uint64_t p, int e) {
  uint64_t r = 1;
  while (e--) r *= p;
  return r;
}

BigInt pow_big(uint64_t p, int e) {
  BigInt r = 1;
  while (e--) r *= p;
  return r;
}

// p-adic valuation of a(a-4); -1 encodes infinity (a in {0,4}).
int v_p_of_a(int64_t a, uint64_t p) {
  __int128 n = static_cast<__int128>(a) * (a - 4);
  if (n == 0) return -1;
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

double bound_T2_fitted_constant() {
  static std::once_flag flag;
  static double cfit = 0.0;
  std::call_once(flag, [] {
    for (uint64_t m : {4ull, 8ull, 16ull, 32ull, 64ull, 9ull, 27ull, 81ull, 25ull, 49ull, 121ull,
                       169ull}) {
      auto f = factorize(m).factors;
      double p = static_cast<double>(f[0].first);
      double l = static_cast<double>(f[0].second);
      auto tab = t_table(m);
      for (int64_t v : tab) {
        double tn = std::fabs(static_cast<double>(v)) / (static_cast<double>(m) * m);
        cfit = std::max(cfit, tn / std::pow(p, l / 2.0));
      }
    }
  });
  return cfit;
}

SingularSeriesValue s_a(int64_t a, uint64_t K, EnumBudget budget) {
  if (K < 1) throw std::invalid_argument("s_a: K >= 1 required");
  Rational s = 0;
  for (uint64_t m = 1; m <= K; ++m) s += Rational(T(a, m, budget), pow_big(m, 3));
  return SingularSeriesValue{s, K};
}

Rational t_a(int64_t a, uint64_t K, EnumBudget budget) {
  if (K < 1) throw std::invalid_argument("t_a: K >= 1 required");
  Rational s = 0;
  for (uint64_t n = 1; n <= K; ++n) {
    if (std::gcd<uint64_t>(n, 30) != 1) continue;
    int mu = mobius(n);
    if (!mu) continue;
    s += Rational(mu * T(a, n, budget), pow_big(n, 3));
  }
  return s;
}

Rational c_a(int64_t a, uint64_t n, EnumBudget budget) {
  if (n < 1) throw std::invalid_argument("c_a: n >= 1 required");
  Rational prod = 1;
  for (auto [p, e] : factorize(n).factors) {
    uint64_t pe = pow_u64(p, e), pe1 = pe / p;
    Rational tn_hi = expsums::T_natural(a, pe, budget);
    Rational term = tn_hi;
    if (p >= 7) term -= expsums::T_natural(a, pe1, budget) * expsums::T_natural(a, p, budget);
    prod *= term / pe;
  }
  return prod;
}

Rational c_a_divisor_sum(int64_t a, uint64_t n, EnumBudget budget) {
  Rational s = 0;
  for (uint64_t d : arith::divisors(n)) {
    uint64_t q = n / d;
    if (std::gcd<uint64_t>(q, 30) != 1) continue;
    int mu = mobius(q);
    if (!mu) continue;
    s += Rational(BigInt(T(a, d, budget)) * mu * T(a, q, budget));
  }
  return s / pow_big(n, 3);
}

LocalFactor gamma_p(int64_t a, uint64_t p, int L, EnumBudget budget) {
  if (!arith::is_prime(p)) throw std::invalid_argument("gamma_p: p must be prime");
  if (L < 0) throw std::invalid_argument("gamma_p: L >= 0 required");
  LocalFactor lf;
  lf.p = p;
  lf.L = L;
  Rational delta = 1;
  uint64_t pl = 1;
  std::vector<int64_t> tvals(static_cast<size_t>(L) + 1, 1);
  for (int l = 1; l <= L; ++l) {
    pl *= p;
    auto tab = t_table(pl, budget);
    tvals[l] = tab[static_cast<uint64_t>(((a % static_cast<int64_t>(pl)) + pl) % pl)];
    delta += Rational(tvals[l], pow_big(pl, 3));
  }
  Rational pref = 1;
  if (p >= 7) pref -= Rational(L >= 1 ? tvals[1] : T(a, p, budget), pow_big(p, 3));
  lf.value = pref * delta;

  // Tail of sum_{l > L} p^{-3l} T_a(p^l). It vanishes identically beyond the
  // level forced by T_a(p^l) = 0 for p^{l-1} not dividing a(a-4) (odd p), and
  // beyond the 2-adic stabilization level v_2(a(a-4)) + 4.
  int v = v_p_of_a(a, p);
  int zero_from;  // T_a(p^l) = 0 for all l >= zero_from
  if (v < 0)
    zero_from = INT32_MAX;
  else if (p == 2)
    zero_from = v + 4;
  else
    zero_from = std::max(2, v + 2);
  if (L + 1 >= zero_from) {
    lf.tail = 0.0;
    lf.converged = true;
  } else {
    double C = bound_T2_fitted_constant();
    double sp = std::sqrt(static_cast<double>(p));
    // sum_{l > L} C p^{-l/2} = C p^{-(L+1)/2} / (1 - p^{-1/2})
    double geo = C * std::pow(sp, -(L + 1)) / (1.0 - 1.0 / sp);
    lf.tail = std::fabs(to_double(pref)) * geo;
    lf.converged = lf.tail < 1e-12;
  }
  return lf;
}

GammaValue gamma_product(int64_t a, uint64_t P0, EnumBudget budget) {
  // a(a-4) = 0 leaves no usable tail bounds (the fiber is singular), so the
  // product is defined away from a in {0, 4}.
  if (a == 0 || a == 4) throw std::invalid_argument("gamma_product: a(a-4) != 0 required");
  GammaValue g;
  double lo = 1.0, hi = 1.0;
  bool all_converged = true;

  const double C2 = bound_T2_fitted_constant();
  for (uint32_t p : arith::primes_upto(static_cast<uint32_t>(P0))) {
    int v = v_p_of_a(a, p);
    int L;
    if (v < 0) {
      L = (p == 2) ? 8 : (p == 3 ? 5 : (p <= 7 ? 3 : (p <= 21 ? 2 : 1)));
    } else if (p == 2) {
      L = v + 3;
    } else {
      L = std::max(1, v + 1);
    }
    // clamp to the enumeration budget, keeping at least level 1
    while (L > 1) {
      double cost = std::pow(static_cast<double>(p), 3.0 * L);
      if (cost <= static_cast<double>(budget.limit)) break;
      --L;
    }
    LocalFactor lf = gamma_p(a, p, L, budget);
    double flo = to_double(lf.value) - lf.tail;
    double fhi = to_double(lf.value) + lf.tail;
    double cand[4] = {lo * flo, lo * fhi, hi * flo, hi * fhi};
    lo = *std::min_element(cand, cand + 4);
    hi = *std::max_element(cand, cand + 4);
    if (!lf.converged) all_converged = false;
  }

  // Primes beyond the cutoff dividing a(a-4): interval from the fitted bounds.
  uint64_t rest = 1;
  {
    __int128 n = static_cast<__int128>(a) * (a - 4);
    if (n < 0) n = -n;
    uint64_t n64 = static_cast<uint64_t>(n);
    for (auto [p, e] : factorize(n64).factors) {
      if (p <= P0) continue;
      (void)e;
      double c1 = 4.0 + 1.0 / static_cast<double>(p);
      double u = c1 / static_cast<double>(p);
      double w = u + 1.5 * C2 / static_cast<double>(p);
      double slack = (1.0 + u) * (1.0 + w) - 1.0;
      double flo = 1.0 - slack, fhi = 1.0 + slack;
      double cand[4] = {lo * flo, lo * fhi, hi * flo, hi * fhi};
      lo = *std::min_element(cand, cand + 4);
      hi = *std::max_element(cand, cand + 4);
      rest *= p;
    }
  }

  // Global tail over p > P0 with p not dividing a(a-4):
  // gamma_p = 1 - (p^{-3} T_a(p))^2 in [1 - c1^2/p^2, 1].
  {
    static std::mutex tail_mu;
    static std::map<uint64_t, double> tail_cache;
    double tail_sum;
    {
      std::lock_guard<std::mutex> lock(tail_mu);
      auto it = tail_cache.find(P0);
      if (it == tail_cache.end()) {
        double t = 1e-6;  // remainder beyond 10^6
        for (uint32_t p : arith::primes_upto(1000000))
          if (p > P0) t += 1.0 / (static_cast<double>(p) * p);
        it = tail_cache.emplace(P0, t).first;
      }
      tail_sum = it->second;
    }
    double c1 = 4.0 + 1.0 / static_cast<double>(P0);
    double slack = c1 * c1 * tail_sum;
    double flo = 1.0 - slack, fhi = 1.0;
    double cand[4] = {lo * flo, lo * fhi, hi * flo, hi * fhi};
    lo = *std::min_element(cand, cand + 4);
    hi = *std::max_element(cand, cand + 4);
  }

  g.value = 0.5 * (lo + hi);
  g.error = 0.5 * (hi - lo);
  g.converged = all_converged;
  return g;
}

std::vector<int64_t> small_value_set(int64_t A, uint64_t K, double eta, EnumBudget budget) {
  if (A < 0) throw std::invalid_argument("small_value_set: A >= 0 required");
  Rational bound(eta);
  std::vector<int64_t> out;
  for (int64_t a = -A; a <= A; ++a) {
    if (!markoff::is_admissible(a)) continue;
    Rational s = s_a(a, K, budget).value;
    if (s < 0) s = -s;
    if (s <= bound) out.push_back(a);
  }
  return out;
}

}  // namespace mlab::singular
