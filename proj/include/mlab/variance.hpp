#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "mlab/density.hpp"

namespace mlab::variance {

using density::SigmaGrid;
using density::WeightConfig;

// Weighted representation counts r_a over the weight support, bucketed by a
// and additionally by (z, a) for the diagonal split.
struct CountProfile {
  WeightConfig cfg;
  std::map<int64_t, double> r;                              // a -> r_a
  std::map<std::pair<int64_t, int64_t>, double> rz;         // (z, a) -> partial sum
  uint64_t points_visited = 0;

  double total_weight() const;
};

CountProfile r_profile(const WeightConfig& cfg, int workers = 1);

struct VarianceReport {
  double var = 0;
  double sigma1 = 0, sigma2 = 0, sigma3 = 0;
  double sigma1_d = 0, sigma1_nd = 0;
  int64_t a_lo = 0, a_hi = 0;
  uint64_t K = 1;
};

// Var(B,sign,K) = sum_a (r_a - s_a(K) sigma_a)^2 over the reachable range,
// with sigma from the supplied grid; also returns the three-term split.
VarianceReport variance(const WeightConfig& cfg, uint64_t K, const SigmaGrid& grid,
                        std::optional<std::pair<int64_t, int64_t>> a_range = std::nullopt,
                        int workers = 1);

// (Sigma_{1,d}, Sigma_{1,nd}): the z1 = z2 diagonal split of Sigma_1.
std::pair<double, double> diagonal_split(const CountProfile& profile);

// Grouped-by-residue form of Sigma_2 (mirrors the modulus-n regrouping).
double sigma2_grouped(const WeightConfig& cfg, uint64_t K, const SigmaGrid& grid);

// CSV columns: a,r_a,s_aK,sigma,residual
void dump_profile_csv(const std::string& path, const CountProfile& profile, uint64_t K,
                      const SigmaGrid& grid);

}  // namespace mlab::variance
