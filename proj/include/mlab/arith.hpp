#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mlab::arith {

// Exact prime factorization, ascending prime order, exponents >= 1.
struct Factorization {
  std::vector<std::pair<uint64_t, int>> factors;

  uint64_t value() const;
  bool empty() const { return factors.empty(); }
};

// n = n1*n2*n3 with n1 squarefree, n2 the product of the exponent-2 prime
// powers, n3 the cube-full part (exponents >= 3). Pairwise coprime.
struct SquarefullSplit {
  uint64_t n1 = 1, n2 = 1, n3 = 1;
};

bool is_prime(uint64_t n);

Factorization factorize(uint64_t n);

int mobius(uint64_t n);
uint64_t euler_phi(uint64_t n);
uint64_t radical(uint64_t n);
std::vector<uint64_t> divisors(uint64_t n);  // ascending
SquarefullSplit squarefull_split(uint64_t n);

int valuation(uint64_t n, uint64_t p);          // largest e with p^e | n, n >= 1
int omega(uint64_t n);                           // number of distinct primes

// Cached prime list (shared, grow-only; thread-safe).
std::vector<uint32_t> primes_upto(uint32_t n);

uint64_t gcd64(uint64_t a, uint64_t b);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

}  // namespace mlab::arith
