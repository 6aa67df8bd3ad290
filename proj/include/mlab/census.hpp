#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlab/markoff.hpp"
#include "mlab/rational.hpp"

namespace mlab::census {

struct CensusConfig {
  int64_t A = 100;
  uint64_t K = 30;
  double eta = 0.1;
  double search_mult = 3.0;
  std::optional<int64_t> shift_c;
  int workers = 1;
  uint64_t gamma_P0 = 199;  // prime cutoff for the gamma column
};

struct CensusRecord {
  int64_t a = 0;
  bool admissible = false;
  markoff::SurfaceClass cls = markoff::SurfaceClass::NotAdmissible;
  std::optional<markoff::Triple> witness;
  Rational s_aK;
  std::optional<double> gamma;
  bool gamma_converged = false;
  std::optional<bool> in_prime_family;
  int64_t search_bound = 0;
  bool budget_failure = false;  // some column could not be computed in budget
};

struct CensusSummary {
  int64_t A = 0;
  uint64_t K = 0;
  double eta = 0;
  uint64_t rows = 0;
  uint64_t n_not_admissible = 0;
  uint64_t n_solvable = 0;
  uint64_t n_failure_candidate = 0;
  uint64_t n_budget_failures = 0;
  double admissible_fraction = 0;
  uint64_t failure_candidates = 0;   // E_cand(A)
  uint64_t small_value_count = 0;    // |S(A,K,eta)|
  double wall_seconds = 0;
};

std::pair<std::vector<CensusRecord>, CensusSummary> run_census(const CensusConfig& cfg);

// CSV header (exact):
//   a,admissible,class,witness_x,witness_y,witness_z,s_aK,gamma,in_prime_family,search_bound
void write_csv(std::ostream& os, const std::vector<CensusRecord>& records);

// JSON object {"records": [...], "summary": {...}}; records carry the exact
// rational s_aK alongside its decimal rendering.
void write_json(std::ostream& os, const std::vector<CensusRecord>& records,
                const CensusSummary& summary);

struct GrowthRow {
  int64_t A = 0;
  uint64_t e_cand = 0;
  double ratio_sqrt = 0;  // E_cand / sqrt(A)
  double ratio_log = 0;   // E_cand (log A)^2 / A
};

std::vector<GrowthRow> summarize_growth(const std::vector<CensusRecord>& records,
                                        const std::vector<int64_t>& checkpoints);

struct SmallValueReport {
  uint64_t s_size = 0;
  double s_fraction = 0;                 // |S| / A
  uint64_t in_s_by_class[3] = {0, 0, 0};   // indexed by SurfaceClass
  uint64_t out_s_by_class[3] = {0, 0, 0};
  double failure_fraction_in_s = 0;      // failure candidates inside S / |S|
};

SmallValueReport correlate_small_values(const std::vector<CensusRecord>& records, uint64_t K,
                                        double eta);

}  // namespace mlab::census
