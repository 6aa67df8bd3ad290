#include "mlab/census.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mlab/arith.hpp"
#include "mlab/expsums.hpp"
#include "mlab/singular.hpp"

namespace mlab::census {

namespace {

const char* class_name(markoff::SurfaceClass c) {
  switch (c) {
    case markoff::SurfaceClass::NotAdmissible:
      return "not_admissible";
    case markoff::SurfaceClass::Solvable:
      return "solvable";
    case markoff::SurfaceClass::FailureCandidate:
      return "failure_candidate";
  }
  return "?";
}

constexpr int64_t kChunk = 4096;  // static chunking keeps the merge deterministic

CensusRecord make_record(int64_t a, const CensusConfig& cfg,
                         const std::vector<std::vector<int64_t>>& sa_tables) {
  CensusRecord rec;
  rec.a = a;
  rec.admissible = markoff::is_admissible(a);
  auto cls = markoff::has_integral_point(a, cfg.search_mult);
  rec.cls = cls.cls;
  rec.witness = cls.witness;
  rec.search_bound = cls.searched_bound;

  Rational s = 0;
  for (uint64_t m = 1; m <= cfg.K; ++m) {
    int64_t b = a % static_cast<int64_t>(m);
    if (b < 0) b += m;
    s += Rational(sa_tables[m - 1][b], BigInt(m) * m * m);
  }
  rec.s_aK = s;

  if (a != 0 && a != 4) {
    try {
      auto g = singular::gamma_product(a, cfg.gamma_P0, expsums::EnumBudget{200'000'000});
      rec.gamma = g.value;
      rec.gamma_converged = g.converged;
    } catch (const expsums::budget_error&) {
      rec.budget_failure = true;
    }
  }

  if (cfg.shift_c) {
    int64_t p = a - *cfg.shift_c;
    rec.in_prime_family = p >= 2 && arith::is_prime(static_cast<uint64_t>(p));
  }
  return rec;
}

}  // namespace

std::pair<std::vector<CensusRecord>, CensusSummary> run_census(const CensusConfig& cfg) {
  if (cfg.A < 0 || cfg.A > 10'000'000) throw std::invalid_argument("census: 0 <= A <= 10^7");
  if (cfg.K < 1) throw std::invalid_argument("census: K >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("census: workers >= 1");
  auto t0 = std::chrono::steady_clock::now();

  // shared read-mostly tables, built once before the sweep
  std::vector<std::vector<int64_t>> sa_tables;
  for (uint64_t m = 1; m <= cfg.K; ++m) sa_tables.push_back(expsums::t_table(m));
  singular::gamma_product(1, cfg.gamma_P0, expsums::EnumBudget{200'000'000});  // warm caches

  const int64_t n_rows = 2 * cfg.A + 1;
  const int64_t n_chunks = (n_rows + kChunk - 1) / kChunk;
  std::vector<std::vector<CensusRecord>> chunks(static_cast<size_t>(n_chunks));
  auto work = [&](int64_t ci) {
    int64_t lo = -cfg.A + ci * kChunk;
    int64_t hi = std::min(lo + kChunk - 1, cfg.A);
    auto& out = chunks[static_cast<size_t>(ci)];
    out.reserve(static_cast<size_t>(hi - lo + 1));
    for (int64_t a = lo; a <= hi; ++a) out.push_back(make_record(a, cfg, sa_tables));
  };
  if (cfg.workers == 1) {
    for (int64_t ci = 0; ci < n_chunks; ++ci) work(ci);
  } else {
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          int64_t ci = next.fetch_add(1);
          if (ci >= n_chunks) return;
          work(ci);
        }
      });
    for (auto& t : pool) t.join();
  }

  std::vector<CensusRecord> records;
  records.reserve(static_cast<size_t>(n_rows));
  for (auto& c : chunks)
    for (auto& r : c) records.push_back(std::move(r));

  CensusSummary sum;
  sum.A = cfg.A;
  sum.K = cfg.K;
  sum.eta = cfg.eta;
  sum.rows = records.size();
  Rational eta_bound(cfg.eta);
  for (const auto& r : records) {
    switch (r.cls) {
      case markoff::SurfaceClass::NotAdmissible:
        ++sum.n_not_admissible;
        break;
      case markoff::SurfaceClass::Solvable:
        ++sum.n_solvable;
        break;
      case markoff::SurfaceClass::FailureCandidate:
        ++sum.n_failure_candidate;
        break;
    }
    if (r.budget_failure) ++sum.n_budget_failures;
    if (r.admissible) {
      Rational s = r.s_aK < 0 ? Rational(-r.s_aK) : r.s_aK;
      if (s <= eta_bound) ++sum.small_value_count;
    }
  }
  sum.failure_candidates = sum.n_failure_candidate;
  sum.admissible_fraction =
      static_cast<double>(sum.rows - sum.n_not_admissible) / static_cast<double>(sum.rows);
  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(records), sum};
}

void write_csv(std::ostream& os, const std::vector<CensusRecord>& records) {
  os << "a,admissible,class,witness_x,witness_y,witness_z,s_aK,gamma,in_prime_family,"
        "search_bound\n";
  char buf[64];
  for (const auto& r : records) {
    os << r.a << ',' << (r.admissible ? "true" : "false") << ',' << class_name(r.cls) << ',';
    if (r.witness) os << r.witness->x << ',' << r.witness->y << ',' << r.witness->z << ',';
    else os << ",,,";
    os << to_decimal(r.s_aK, 12) << ',';
    if (r.gamma) {
      std::snprintf(buf, sizeof(buf), "%.9g", *r.gamma);
      os << buf;
    }
    os << ',';
    if (r.in_prime_family) os << (*r.in_prime_family ? "true" : "false");
    os << ',';
    if (r.cls != markoff::SurfaceClass::NotAdmissible) os << r.search_bound;
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<CensusRecord>& records,
                const CensusSummary& summary) {
  nlohmann::ordered_json root;
  auto& arr = root["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["a"] = r.a;
    j["admissible"] = r.admissible;
    j["class"] = class_name(r.cls);
    if (r.witness) {
      j["witness_x"] = r.witness->x;
      j["witness_y"] = r.witness->y;
      j["witness_z"] = r.witness->z;
    } else {
      j["witness_x"] = nullptr;
      j["witness_y"] = nullptr;
      j["witness_z"] = nullptr;
    }
    j["s_aK"] = to_decimal(r.s_aK, 12);
    j["s_aK_exact"] = to_fraction_string(r.s_aK);
    if (r.gamma) j["gamma"] = *r.gamma;
    else j["gamma"] = nullptr;
    j["gamma_converged"] = r.gamma_converged;
    if (r.in_prime_family) j["in_prime_family"] = *r.in_prime_family;
    else j["in_prime_family"] = nullptr;
    j["search_bound"] = r.search_bound;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json s;
  s["A"] = summary.A;
  s["K"] = summary.K;
  s["eta"] = summary.eta;
  s["rows"] = summary.rows;
  s["not_admissible"] = summary.n_not_admissible;
  s["solvable"] = summary.n_solvable;
  s["failure_candidate"] = summary.n_failure_candidate;
  s["budget_failures"] = summary.n_budget_failures;
  s["admissible_fraction"] = summary.admissible_fraction;
  s["small_value_count"] = summary.small_value_count;
  s["wall_seconds"] = summary.wall_seconds;
  root["summary"] = std::move(s);
  os << root.dump(2) << '\n';
}

std::vector<GrowthRow> summarize_growth(const std::vector<CensusRecord>& records,
                                        const std::vector<int64_t>& checkpoints) {
  std::vector<GrowthRow> rows;
  if (records.empty()) return rows;
  for (int64_t A : checkpoints) {
    GrowthRow row;
    row.A = A;
    bool covered = false;
    for (const auto& r : records) {
      if (std::llabs(r.a) > A) continue;
      covered = true;
      if (r.cls == markoff::SurfaceClass::FailureCandidate) ++row.e_cand;
    }
    if (!covered && !records.empty()) continue;
    if (A >= 2) {
      row.ratio_sqrt = static_cast<double>(row.e_cand) / std::sqrt(static_cast<double>(A));
      double lg = std::log(static_cast<double>(A));
      row.ratio_log = static_cast<double>(row.e_cand) * lg * lg / static_cast<double>(A);
    }
    rows.push_back(row);
  }
  return rows;
}

SmallValueReport correlate_small_values(const std::vector<CensusRecord>& records, uint64_t K,
                                        double eta) {
  SmallValueReport rep;
  Rational bound(eta);
  int64_t maxA = 0;
  for (const auto& r : records) {
    maxA = std::max<int64_t>(maxA, std::llabs(r.a));
    Rational s = r.s_aK < 0 ? Rational(-r.s_aK) : r.s_aK;
    bool in_s = r.admissible && s <= bound;
    int ci = static_cast<int>(r.cls);
    if (in_s) {
      ++rep.in_s_by_class[ci];
      ++rep.s_size;
    } else {
      ++rep.out_s_by_class[ci];
    }
  }
  (void)K;
  if (maxA > 0) rep.s_fraction = static_cast<double>(rep.s_size) / static_cast<double>(maxA);
  if (rep.s_size > 0)
    rep.failure_fraction_in_s =
        static_cast<double>(rep.in_s_by_class[static_cast<int>(
            markoff::SurfaceClass::FailureCandidate)]) /
        static_cast<double>(rep.s_size);
  return rep;
}

}  // namespace mlab::census
