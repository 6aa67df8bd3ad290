#include "mlab/arith.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace mlab::arith {

uint64_t gcd64(uint64_t a, uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = m > 1 ? 1 : 0;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

namespace {

// Deterministic Miller-Rabin for 64-bit inputs.
bool miller_rabin(uint64_t n, uint64_t a) {
  if (a % n == 0) return true;
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

uint64_t pollard_brent(uint64_t n) {
  if ((n & 1) == 0) return 2;
  uint64_t c = 1;
  for (;;) {
    uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0;
    const uint64_t m = 128;
    uint64_t r = 1;
    while (d == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (uint64_t k = 0; k < r && d == 1; k += m) {
        ys = y;
        uint64_t lim = std::min(m, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        d = gcd64(q, n);
      }
      r <<= 1;
    }
    if (d == n) {
      d = 1;
      while (d == 1) {
        ys = (mulmod(ys, ys, n) + c) % n;
        d = gcd64(x > ys ? x - ys : ys - x, n);
      }
    }
    if (d != n) return d;
    ++c;  // rare cycle degeneracy, retry with a new increment
  }
}

void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

std::mutex g_sieve_mutex;
std::vector<uint32_t> g_primes{2, 3, 5, 7, 11, 13};
uint32_t g_sieved_upto = 13;

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

Factorization factorize(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  if (n == 1) return f;
  std::vector<uint64_t> ps;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  // Trial division with a 2,4-wheel up to ~2^20, then rho for what remains.
  uint64_t d = 37;
  int step = 2;
  while (d <= 1u << 20 && d * d <= n) {
    while (n % d == 0) {
      ps.push_back(d);
      n /= d;
    }
    d += step;
    step = 6 - step;
  }
  if (n > 1) factor_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  for (uint64_t p : ps) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

uint64_t Factorization::value() const {
  uint64_t n = 1;
  for (auto [p, e] : factors)
    for (int i = 0; i < e; ++i) n *= p;
  return n;
}

int mobius(uint64_t n) {
  auto f = factorize(n);
  for (auto [p, e] : f.factors)
    if (e >= 2) return 0;
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

uint64_t euler_phi(uint64_t n) {
  uint64_t r = n;
  for (auto [p, e] : factorize(n).factors) r = r / p * (p - 1);
  return r;
}

uint64_t radical(uint64_t n) {
  uint64_t r = 1;
  for (auto [p, e] : factorize(n).factors) r *= p;
  return r;
}

std::vector<uint64_t> divisors(uint64_t n) {
  std::vector<uint64_t> ds{1};
  for (auto [p, e] : factorize(n).factors) {
    size_t sz = ds.size();
    uint64_t pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pe);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

SquarefullSplit squarefull_split(uint64_t n) {
  SquarefullSplit s;
  for (auto [p, e] : factorize(n).factors) {
    uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (e >= 3)
      s.n3 *= pe;
    else if (e == 2)
      s.n2 *= pe;
    else
      s.n1 *= pe;
  }
  return s;
}

int valuation(uint64_t n, uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation: n must be >= 1");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int omega(uint64_t n) { return static_cast<int>(factorize(n).factors.size()); }

std::vector<uint32_t> primes_upto(uint32_t n) {
  std::lock_guard<std::mutex> lock(g_sieve_mutex);
  if (n > g_sieved_upto) {
    uint32_t hi = std::max(n, g_sieved_upto * 2);
    std::vector<bool> comp(hi + 1, false);
    g_primes.clear();
    for (uint32_t i = 2; i <= hi; ++i) {
      if (!comp[i]) {
        g_primes.push_back(i);
        for (uint64_t j = static_cast<uint64_t>(i) * i; j <= hi; j += i) comp[j] = true;
      }
    }
    g_sieved_upto = hi;
  }
  auto it = std::upper_bound(g_primes.begin(), g_primes.end(), n);
  return std::vector<uint32_t>(g_primes.begin(), it);
}

}  // namespace mlab::arith
