#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlab/rational.hpp"

namespace mlab::expsums {

// Thrown when a requested modulus would exceed the enumeration budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration budget: a prime-power modulus m is enumerable when m^3 (three
// variables) resp. m^4/m^5 (four-variable sums) stays below `limit`.
struct EnumBudget {
  uint64_t limit = 100'000'000;
};

// --- point counts -----------------------------------------------------------

// #{x in (Z/m)^3 : M(x) = a mod m}, assembled multiplicatively over the
// prime powers of m; each prime power is enumerated (or counted via the
// completed-square character sum for odd primes).
int64_t point_count_rho(int64_t a, uint64_t m, EnumBudget budget = {});

// Counts per residue class: v[b] = #{x mod m : M(x) = b}, b = 0..m-1.
std::vector<int64_t> rho_table(uint64_t m, EnumBudget budget = {});

// --- complete exponential sums ----------------------------------------------

// T_a(m) = sum_{u coprime to m} sum_{x mod m} e_m(u (M(x) - a)).
// Exact integer via Moebius inversion of m rho_a(m) = sum_{d|m} (m/d)^3 T_a(d).
int64_t T(int64_t a, uint64_t m, EnumBudget budget = {});

// T_b(m) for every residue b, assembled from prime-power tables by CRT.
// Cached per modulus; safe for concurrent use.
std::vector<int64_t> t_table(uint64_t m, EnumBudget budget = {});

// Floating-point root-of-unity oracle, m <= 60. Must agree with T exactly;
// throws logic_error if the rounding residual exceeds 1e-6 * m^4.
int64_t T_direct(int64_t a, uint64_t m);

// T_a^nat(n) = n^{-2} T_a(n), exact.
Rational T_natural(int64_t a, uint64_t n, EnumBudget budget = {});

// S_0(m) = sum_{u coprime} sum_{x in (Z/m)^6} e_m(u(M(x1..3) - M(x4..6))).
int64_t S0(uint64_t m, EnumBudget budget = {});

// S_0(a1,a2;m): the four-variable analog with the slice polynomial
// G_{a1,a2}(v,w) = v1^2+v2^2-a1 v1 v2 - w1^2-w2^2+a2 w1 w2 + a1^2-a2^2.
int64_t S0_fixed(int64_t a1, int64_t a2, uint64_t m, EnumBudget budget = {});

// --- quadratic forms in 4 variables ------------------------------------------

// F(x) = x^t A x with A symmetric, a_ii integral and 2 a_ij integral (i != j),
// stored as integer diagonal d_i = a_ii and integer cross terms c_ij = 2 a_ij.
struct QuadForm4 {
  std::array<int64_t, 4> diag{};                 // a_ii
  std::array<std::array<int64_t, 4>, 4> cross{};  // c_ij = 2 a_ij, i < j used

  int64_t operator()(const std::array<int64_t, 4>& x) const;
  Rational det() const;       // det A, exact
  Rational norm() const;      // max |a_ij|
  bool block22() const;       // no coupling between (x1,x2) and (x3,x4)

  static QuadForm4 diagonal(int64_t d1, int64_t d2, int64_t d3, int64_t d4);
  // x1^2+y1^2-a1 x1 y1 - x2^2-y2^2+a2 x2 y2 (variables ordered x1,y1,x2,y2)
  static QuadForm4 markoff_slice(int64_t a1, int64_t a2);
};

// S_q(F,k,c) = sum_{a in (Z/q)^*} sum_{x in (Z/q)^4} e_q(a(F(x)-k) + c.x).
// Exact integer; assembled multiplicatively over prime powers (with the
// CRT-twisted c). Throws domain_error when the value is not a rational
// integer (possible for c != 0).
int64_t S_q_quadform(const QuadForm4& F, int64_t k, const std::array<int64_t, 4>& c, uint64_t q,
                     EnumBudget budget = {});

// #{x in (Z/m)^4 : F(x) = k mod m}
int64_t quadform_count(const QuadForm4& F, int64_t k, uint64_t m, EnumBudget budget = {});

// --- moments ------------------------------------------------------------------

// E_{b mod prod}( |T_b^nat(m1)...T_b^nat(mr) * T_b^nat(n1)...T_b^nat(nr)| ),
// exact rational. The n_i must be squarefree.
Rational moment_T(const std::vector<uint64_t>& m_vec, const std::vector<uint64_t>& n_vec,
                  EnumBudget budget = {});

// --- binary table dump ---------------------------------------------------------
//
// Layout (little-endian):
//   bytes 0..3   magic "MLTT"
//   byte  4      version (1)
//   bytes 5..7   zero padding
//   bytes 8..15  u64 record count
//   then per record: u64 m, u64 b (0 <= b < m), i64 T_b(m)

struct TableTriple {
  uint64_t m;
  uint64_t b;
  int64_t t;
};

void dump_t_tables(const std::string& path, uint64_t m_max, EnumBudget budget = {});
std::vector<TableTriple> load_t_tables(const std::string& path);

}  // namespace mlab::expsums
