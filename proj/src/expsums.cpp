#include "mlab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "mlab/arith.hpp"

namespace mlab::expsums {

namespace {

using arith::divisors;
using arith::factorize;
using arith::mobius;

int64_t checked_i64(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
  return static_cast<int64_t>(v);
}

uint64_t pow_u64(uint64_t p, int e) {
  uint64_t r = 1;
  while (e--) r *= p;
  return r;
}

uint64_t inv_mod(uint64_t a, uint64_t m) {
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(m), nr = static_cast<int64_t>(a % m);
  while (nr) {
    int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(m) : t);
}

// Histogram of M(x,y,z) mod m over all m^3 triples.
std::vector<int64_t> rho_hist_enum(uint64_t m, const EnumBudget& budget) {
  if (m * m > budget.limit || m * m * m > budget.limit)
    throw budget_error("rho enumeration over budget at m=" + std::to_string(m));
  std::vector<int64_t> hist(m, 0);
  const uint32_t mm = static_cast<uint32_t>(m);
  for (uint32_t x = 0; x < mm; ++x) {
    uint32_t x2 = static_cast<uint32_t>((static_cast<uint64_t>(x) * x) % mm);
    for (uint32_t y = 0; y < mm; ++y) {
      uint32_t c1 = static_cast<uint32_t>((x2 + static_cast<uint64_t>(y) * y) % mm);
      uint32_t xy = static_cast<uint32_t>((static_cast<uint64_t>(x) * y) % mm);
      uint32_t z2 = 0;   // z^2 mod m
      uint32_t dz = 1;   // (z+1)^2 - z^2 = 2z+1 mod m
      uint32_t xyz = 0;  // x*y*z mod m
      for (uint32_t z = 0; z < mm; ++z) {
        uint32_t v = c1 + z2 + (mm - xyz);
        while (v >= mm) v -= mm;
        ++hist[v];
        z2 += dz;
        if (z2 >= mm) z2 -= mm;
        dz += 2;
        if (dz >= mm) dz -= mm;
        xyz += xy;
        if (xyz >= mm) xyz -= mm;
      }
    }
  }
  return hist;
}

// rho_b(p) for every b mod p, odd prime p, via the completed square
//   #{z : M(x,y,z) = b} = 1 + chi(D),  D = (x^2-4)(y^2-4) + 4(b-4),
// bucketing (x^2-4)(y^2-4) by value first: O(p^2).
std::vector<int64_t> rho_hist_odd_prime(uint64_t p) {
  const int64_t q = static_cast<int64_t>(p);
  std::vector<int8_t> chi(p, -1);
  chi[0] = 0;
  for (int64_t r = 1; r < q; ++r) chi[(r * r) % q] = 1;
  std::vector<int64_t> W(p, 0);
  for (int64_t u = 0; u < q; ++u) {
    int64_t cu = 1 + chi[(u + 4) % q];
    if (!cu) continue;
    for (int64_t v = 0; v < q; ++v) {
      int64_t cv = 1 + chi[(v + 4) % q];
      if (!cv) continue;
      W[(u * v) % q] += cu * cv;
    }
  }
  std::vector<int64_t> hist(p, 0);
  for (int64_t b = 0; b < q; ++b) {
    int64_t shift = (4 * (b - 4)) % q;
    if (shift < 0) shift += q;
    int64_t s = 0;
    for (int64_t t = 0; t < q; ++t) s += W[t] * chi[(t + shift) % q];
    hist[b] = q * q + s;
  }
  return hist;
}

struct Cache {
  std::recursive_mutex mu;
  std::map<uint64_t, std::unique_ptr<const std::vector<int64_t>>> rho;
  std::map<uint64_t, std::unique_ptr<const std::vector<int64_t>>> t;
};
Cache& cache() {
  static Cache c;
  return c;
}

const std::vector<int64_t>& rho_table_ref(uint64_t m, const EnumBudget& budget);

std::vector<int64_t> rho_table_prime_power(uint64_t p, int e, const EnumBudget& budget) {
  uint64_t m = pow_u64(p, e);
  if (e == 1 && p >= 67 && p % 2 == 1) return rho_hist_odd_prime(p);
  return rho_hist_enum(m, budget);
}

const std::vector<int64_t>& rho_table_ref(uint64_t m, const EnumBudget& budget) {
  auto& c = cache();
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  auto it = c.rho.find(m);
  if (it != c.rho.end()) return *it->second;
  std::vector<int64_t> v;
  if (m == 1) {
    v = {1};
  } else {
    auto f = factorize(m);
    if (f.factors.size() == 1) {
      v = rho_table_prime_power(f.factors[0].first, f.factors[0].second, budget);
    } else {
      std::vector<uint64_t> pes;
      std::vector<const std::vector<int64_t>*> tabs;
      for (auto [p, e] : f.factors) {
        pes.push_back(pow_u64(p, e));
        tabs.push_back(&rho_table_ref(pes.back(), budget));
      }
      v.assign(m, 0);
      for (uint64_t b = 0; b < m; ++b) {
        __int128 prod = 1;
        for (size_t i = 0; i < pes.size(); ++i) prod *= (*tabs[i])[b % pes[i]];
        v[b] = checked_i64(prod, "rho CRT overflow");
      }
    }
  }
  auto ins = c.rho.emplace(m, std::make_unique<const std::vector<int64_t>>(std::move(v)));
  return *ins.first->second;
}

const std::vector<int64_t>& t_table_ref(uint64_t m, const EnumBudget& budget) {
  auto& c = cache();
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  auto it = c.t.find(m);
  if (it != c.t.end()) return *it->second;
  std::vector<int64_t> v;
  if (m == 1) {
    v = {1};
  } else {
    auto f = factorize(m);
    if (f.factors.size() == 1) {
      uint64_t p = f.factors[0].first;
      int e = f.factors[0].second;
      uint64_t pe = pow_u64(p, e), pe1 = pe / p;
      const auto& hi = rho_table_ref(pe, budget);
      const auto& lo = rho_table_ref(pe1, budget);
      v.assign(pe, 0);
      for (uint64_t b = 0; b < pe; ++b) {
        __int128 t = static_cast<__int128>(pe) * hi[b] -
                     static_cast<__int128>(p) * p * p * pe1 * lo[b % pe1];
        v[b] = checked_i64(t, "T inversion overflow");
      }
    } else {
      std::vector<uint64_t> pes;
      std::vector<const std::vector<int64_t>*> tabs;
      for (auto [p, e] : f.factors) {
        pes.push_back(pow_u64(p, e));
        tabs.push_back(&t_table_ref(pes.back(), budget));
      }
      v.assign(m, 0);
      for (uint64_t b = 0; b < m; ++b) {
        __int128 prod = 1;
        for (size_t i = 0; i < pes.size(); ++i) prod *= (*tabs[i])[b % pes[i]];
        v[b] = checked_i64(prod, "T CRT overflow");
      }
    }
  }
  auto ins = c.t.emplace(m, std::make_unique<const std::vector<int64_t>>(std::move(v)));
  return *ins.first->second;
}

uint64_t umod(int64_t a, uint64_t m) {
  int64_t r = a % static_cast<int64_t>(m);
  if (r < 0) r += static_cast<int64_t>(m);
  return static_cast<uint64_t>(r);
}

}  // namespace

int64_t point_count_rho(int64_t a, uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("point_count_rho: m >= 1 required");
  if (m == 1) return 1;
  __int128 prod = 1;
  for (auto [p, e] : factorize(m).factors) {
    uint64_t pe = pow_u64(p, e);
    prod *= rho_table_ref(pe, budget)[umod(a, pe)];
  }
  return checked_i64(prod, "rho overflow");
}

std::vector<int64_t> rho_table(uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("rho_table: m >= 1 required");
  return rho_table_ref(m, budget);
}

int64_t T(int64_t a, uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("T: m >= 1 required");
  // T_a(m) = sum_{d | m} mu(d) d^3 (m/d) rho_a(m/d)
  __int128 acc = 0;
  for (uint64_t d : divisors(m)) {
    int mu = mobius(d);
    if (!mu) continue;
    uint64_t md = m / d;
    acc += static_cast<__int128>(mu) * d * d * d * md * point_count_rho(a, md, budget);
  }
  return checked_i64(acc, "T overflow");
}

std::vector<int64_t> t_table(uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("t_table: m >= 1 required");
  return t_table_ref(m, budget);
}

int64_t T_direct(int64_t a, uint64_t m) {
  if (m == 0 || m > 60) throw std::invalid_argument("T_direct: 1 <= m <= 60 required");
  const long double PI = std::acos(-1.0L);
  std::vector<std::complex<long double>> e(m);
  for (uint64_t t = 0; t < m; ++t)
    e[t] = std::polar<long double>(1.0L, 2.0L * PI * static_cast<long double>(t) / m);
  const int64_t mm = static_cast<int64_t>(m);
  const int64_t am = static_cast<int64_t>(umod(a, m));
  std::complex<long double> s = 0;
  for (int64_t u = 1; u <= mm; ++u) {
    if (std::gcd(u, mm) != 1) continue;
    for (int64_t x = 0; x < mm; ++x)
      for (int64_t y = 0; y < mm; ++y) {
        int64_t base = (x * x + y * y - am) % mm;
        for (int64_t z = 0; z < mm; ++z) {
          int64_t t = ((base + z * z - x * y % mm * z) % mm * u) % mm;
          if (t < 0) t += mm;
          s += e[t];
        }
      }
  }
  long double re = s.real();
  int64_t rounded = static_cast<int64_t>(std::llroundl(re));
  long double m4 = static_cast<long double>(m) * m * m * m;
  if (std::fabs(re - rounded) > 1e-6L * m4 || std::fabs(s.imag()) > 1e-6L * m4)
    throw std::logic_error("T_direct: rounding residual too large");
  return rounded;
}

Rational T_natural(int64_t a, uint64_t n, EnumBudget budget) {
  return Rational(T(a, n, budget), BigInt(n) * n);
}

namespace {

// #{x in (Z/m)^6 : M(x1,x2,x3) = M(x4,x5,x6) mod m} = sum_b rho_b(m)^2
int64_t rho_tilde(uint64_t m, const EnumBudget& budget) {
  const auto& h = rho_table_ref(m, budget);
  __int128 s = 0;
  for (int64_t v : h) s += static_cast<__int128>(v) * v;
  return checked_i64(s, "rho_tilde overflow");
}

int64_t S0_prime_power(uint64_t p, int e, const EnumBudget& budget) {
  uint64_t pe = pow_u64(p, e), pe1 = pe / p;
  __int128 s = static_cast<__int128>(pe) * rho_tilde(pe, budget) -
               static_cast<__int128>(p) * p * p * p * p * p * pe1 * rho_tilde(pe1, budget);
  return checked_i64(s, "S0 overflow");
}

// h[t] = #{(v1,v2) mod m : v1^2 + v2^2 - a v1 v2 = t}
std::vector<int64_t> block_hist(int64_t a, uint64_t m) {
  std::vector<int64_t> h(m, 0);
  const int64_t mm = static_cast<int64_t>(m);
  const int64_t am = static_cast<int64_t>(umod(a, m));
  for (int64_t v1 = 0; v1 < mm; ++v1) {
    int64_t v1s = v1 * v1 % mm;
    int64_t av1 = am * v1 % mm;
    for (int64_t v2 = 0; v2 < mm; ++v2) {
      int64_t t = (v1s + v2 * v2 - av1 * v2) % mm;
      if (t < 0) t += mm;
      ++h[t];
    }
  }
  return h;
}

// #{(v,w) in (Z/m)^4 : G_{a1,a2}(v,w) = 0 mod m}
int64_t rho_G(int64_t a1, int64_t a2, uint64_t m, const EnumBudget& budget) {
  if (m == 1) return 1;
  if (m * m > budget.limit) throw budget_error("rho_G over budget at m=" + std::to_string(m));
  auto h1 = block_hist(a1, m);
  auto h2 = block_hist(a2, m);
  const uint64_t s1 = umod(a1 * a1, m), s2 = umod(a2 * a2, m);
  // Q1(v) + a1^2 = Q2(w) + a2^2 mod m
  __int128 c = 0;
  for (uint64_t s = 0; s < m; ++s)
    c += static_cast<__int128>(h1[(s + m - s1) % m]) * h2[(s + m - s2) % m];
  return checked_i64(c, "rho_G overflow");
}

int64_t S0_fixed_prime_power(int64_t a1, int64_t a2, uint64_t p, int e, const EnumBudget& budget) {
  uint64_t pe = pow_u64(p, e), pe1 = pe / p;
  __int128 s = static_cast<__int128>(pe) * rho_G(a1, a2, pe, budget) -
               static_cast<__int128>(p) * p * p * p * pe1 * rho_G(a1, a2, pe1, budget);
  return checked_i64(s, "S0_fixed overflow");
}

}  // namespace

int64_t S0(uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("S0: m >= 1 required");
  __int128 prod = 1;
  for (auto [p, e] : factorize(m).factors) prod *= S0_prime_power(p, e, budget);
  return checked_i64(prod, "S0 product overflow");
}

int64_t S0_fixed(int64_t a1, int64_t a2, uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("S0_fixed: m >= 1 required");
  __int128 prod = 1;
  for (auto [p, e] : factorize(m).factors) prod *= S0_fixed_prime_power(a1, a2, p, e, budget);
  return checked_i64(prod, "S0_fixed product overflow");
}

// --- QuadForm4 ---------------------------------------------------------------

int64_t QuadForm4::operator()(const std::array<int64_t, 4>& x) const {
  __int128 s = 0;
  for (int i = 0; i < 4; ++i) s += static_cast<__int128>(diag[i]) * x[i] * x[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s += static_cast<__int128>(cross[i][j]) * x[i] * x[j];
  return checked_i64(s, "QuadForm4 eval overflow");
}

Rational QuadForm4::det() const {
  Rational a[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j)
        a[i][j] = diag[i];
      else
        a[i][j] = Rational(cross[std::min(i, j)][std::max(i, j)], 2);
    }
  // Fraction-free-ish Gaussian elimination with exact rationals.
  Rational det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != col) {
      for (int j = 0; j < 4; ++j) std::swap(a[piv][j], a[col][j]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < 4; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

Rational QuadForm4::norm() const {
  Rational n = 0;
  for (int i = 0; i < 4; ++i) n = std::max(n, Rational(std::abs(diag[i])));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) n = std::max(n, Rational(std::abs(cross[i][j]), 2));
  return n;
}

bool QuadForm4::block22() const {
  return cross[0][2] == 0 && cross[0][3] == 0 && cross[1][2] == 0 && cross[1][3] == 0;
}

QuadForm4 QuadForm4::diagonal(int64_t d1, int64_t d2, int64_t d3, int64_t d4) {
  QuadForm4 f;
  f.diag = {d1, d2, d3, d4};
  return f;
}

QuadForm4 QuadForm4::markoff_slice(int64_t a1, int64_t a2) {
  QuadForm4 f;
  f.diag = {1, 1, -1, -1};
  f.cross[0][1] = -a1;
  f.cross[2][3] = a2;
  return f;
}

namespace {

// Histogram of a 2-variable block d1 x^2 + d2 y^2 + cxy x y over (Z/m)^2.
std::vector<int64_t> qf_block_hist(int64_t d1, int64_t d2, int64_t cxy, uint64_t m) {
  std::vector<int64_t> h(m, 0);
  const int64_t mm = static_cast<int64_t>(m);
  const int64_t e1 = static_cast<int64_t>(umod(d1, m));
  const int64_t e2 = static_cast<int64_t>(umod(d2, m));
  const int64_t ec = static_cast<int64_t>(umod(cxy, m));
  for (int64_t x = 0; x < mm; ++x) {
    int64_t xs = e1 * x % mm * x % mm;
    int64_t cx = ec * x % mm;
    for (int64_t y = 0; y < mm; ++y) {
      int64_t t = (xs + e2 * y % mm * y + cx * y) % mm;
      ++h[t];
    }
  }
  return h;
}

}  // namespace

int64_t quadform_count(const QuadForm4& F, int64_t k, uint64_t m, EnumBudget budget) {
  if (m == 0) throw std::invalid_argument("quadform_count: m >= 1 required");
  if (m == 1) return 1;
  const uint64_t km = umod(k, m);
  if (F.block22()) {
    if (m * m > budget.limit) throw budget_error("quadform_count over budget");
    auto h1 = qf_block_hist(F.diag[0], F.diag[1], F.cross[0][1], m);
    auto h2 = qf_block_hist(F.diag[2], F.diag[3], F.cross[2][3], m);
    __int128 c = 0;
    for (uint64_t t = 0; t < m; ++t) c += static_cast<__int128>(h1[t]) * h2[(km + m - t) % m];
    return checked_i64(c, "quadform_count overflow");
  }
  if (m * m * m * m > budget.limit) throw budget_error("quadform_count over budget");
  int64_t count = 0;
  std::array<int64_t, 4> x;
  const int64_t mm = static_cast<int64_t>(m);
  for (x[0] = 0; x[0] < mm; ++x[0])
    for (x[1] = 0; x[1] < mm; ++x[1])
      for (x[2] = 0; x[2] < mm; ++x[2])
        for (x[3] = 0; x[3] < mm; ++x[3])
          if (umod(F(x) - k, m) == 0) ++count;
  return count;
}

namespace {

int64_t Sq_prime_power(const QuadForm4& F, int64_t k, const std::array<int64_t, 4>& c, uint64_t p,
                       int e, const EnumBudget& budget) {
  const uint64_t pe = pow_u64(p, static_cast<int>(e));
  bool c_zero = true;
  for (int i = 0; i < 4; ++i)
    if (umod(c[i], pe) != 0) c_zero = false;
  if (c_zero) {
    uint64_t pe1 = pe / p;
    __int128 s = static_cast<__int128>(pe) * quadform_count(F, k, pe, budget) -
                 static_cast<__int128>(p) * p * p * p * pe1 * quadform_count(F, k, pe1, budget);
    return checked_i64(s, "S_q overflow");
  }
  // General c: accumulate the full phase-count vector and require the result
  // to be Galois-stable (a rational integer).
  __int128 cost = 1;
  for (int i = 0; i < 5; ++i) cost *= pe;
  if (cost > static_cast<__int128>(budget.limit)) throw budget_error("S_q over budget");
  std::vector<int64_t> C(pe, 0);
  const int64_t mm = static_cast<int64_t>(pe);
  std::array<int64_t, 4> x;
  std::array<int64_t, 4> cm;
  for (int i = 0; i < 4; ++i) cm[i] = static_cast<int64_t>(umod(c[i], pe));
  for (x[0] = 0; x[0] < mm; ++x[0])
    for (x[1] = 0; x[1] < mm; ++x[1])
      for (x[2] = 0; x[2] < mm; ++x[2])
        for (x[3] = 0; x[3] < mm; ++x[3]) {
          int64_t g = static_cast<int64_t>(umod(F(x) - k, pe));
          int64_t l = static_cast<int64_t>(
              umod(cm[0] * x[0] + cm[1] * x[1] + cm[2] * x[2] + cm[3] * x[3], pe));
          for (int64_t a = 1; a < mm; ++a) {
            if (std::gcd(a, mm) != 1) continue;
            ++C[(a * g + l) % mm];
          }
          if (mm == 1) ++C[0];
        }
  // Galois classes are indexed by gcd(r, pe).
  std::map<uint64_t, int64_t> cls;
  for (uint64_t r = 0; r < pe; ++r) {
    uint64_t g = std::gcd<uint64_t>(r, pe);
    auto it = cls.find(g);
    if (it == cls.end())
      cls[g] = C[r];
    else if (it->second != C[r])
      throw std::domain_error("S_q(F,k,c): value is not a rational integer for this c");
  }
  __int128 s = 0;
  for (auto [g, cnt] : cls) s += static_cast<__int128>(mobius(pe / g)) * cnt;
  return checked_i64(s, "S_q overflow");
}

}  // namespace

int64_t S_q_quadform(const QuadForm4& F, int64_t k, const std::array<int64_t, 4>& c, uint64_t q,
                     EnumBudget budget) {
  if (q == 0) throw std::invalid_argument("S_q_quadform: q >= 1 required");
  if (q == 1) return 1;
  if (F.det() == 0) throw std::invalid_argument("S_q_quadform: F must be non-singular");
  __int128 prod = 1;
  for (auto [p, e] : factorize(q).factors) {
    uint64_t pe = pow_u64(p, e);
    uint64_t cof = q / pe;
    uint64_t cbar = inv_mod(cof % pe, pe);  // cofactor inverse twists c
    std::array<int64_t, 4> ct;
    for (int i = 0; i < 4; ++i) ct[i] = static_cast<int64_t>(umod(c[i], pe) * cbar % pe);
    prod *= Sq_prime_power(F, k, ct, p, e, budget);
  }
  return checked_i64(prod, "S_q product overflow");
}

Rational moment_T(const std::vector<uint64_t>& m_vec, const std::vector<uint64_t>& n_vec,
                  EnumBudget budget) {
  __int128 Q = 1;
  for (uint64_t m : m_vec) Q *= m;
  for (uint64_t n : n_vec) {
    if (mobius(n) == 0) throw std::invalid_argument("moment_T: n_vec entries must be squarefree");
    Q *= n;
  }
  if (Q > static_cast<__int128>(budget.limit)) throw budget_error("moment_T over budget");
  const uint64_t q = static_cast<uint64_t>(Q);
  std::vector<uint64_t> mods(m_vec);
  mods.insert(mods.end(), n_vec.begin(), n_vec.end());
  std::vector<std::vector<int64_t>> tabs;
  for (uint64_t m : mods) tabs.push_back(t_table(m, budget));
  Rational sum = 0;
  for (uint64_t b = 0; b < q; ++b) {
    Rational term = 1;
    for (size_t i = 0; i < mods.size(); ++i) {
      int64_t t = tabs[i][b % mods[i]];
      term *= Rational(t < 0 ? -t : t, BigInt(mods[i]) * mods[i]);
    }
    sum += term;
  }
  return sum / q;
}

// --- binary dump ----------------------------------------------------------------

namespace {

void put_u64(FILE* f, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  std::fwrite(b, 1, 8, f);
}

uint64_t get_u64(FILE* f) {
  unsigned char b[8];
  if (std::fread(b, 1, 8, f) != 8) throw std::runtime_error("t-table file truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void dump_t_tables(const std::string& path, uint64_t m_max, EnumBudget budget) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path);
  const unsigned char header[8] = {'M', 'L', 'T', 'T', 1, 0, 0, 0};
  std::fwrite(header, 1, 8, f);
  uint64_t count = 0;
  for (uint64_t m = 1; m <= m_max; ++m) count += m;
  put_u64(f, count);
  for (uint64_t m = 1; m <= m_max; ++m) {
    auto tab = t_table(m, budget);
    for (uint64_t b = 0; b < m; ++b) {
      put_u64(f, m);
      put_u64(f, b);
      put_u64(f, static_cast<uint64_t>(tab[b]));
    }
  }
  std::fclose(f);
}

std::vector<TableTriple> load_t_tables(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + path);
  unsigned char header[8];
  if (std::fread(header, 1, 8, f) != 8 || std::memcmp(header, "MLTT", 4) != 0) {
    std::fclose(f);
    throw std::runtime_error("bad t-table magic");
  }
  if (header[4] != 1) {
    std::fclose(f);
    throw std::runtime_error("unsupported t-table version");
  }
  uint64_t count = get_u64(f);
  std::vector<TableTriple> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    TableTriple t;
    t.m = get_u64(f);
    t.b = get_u64(f);
    t.t = static_cast<int64_t>(get_u64(f));
    out.push_back(t);
  }
  std::fclose(f);
  return out;
}

}  // namespace mlab::expsums
