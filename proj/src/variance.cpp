#include "mlab/variance.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <atomic>
#include <thread>
#include <vector>

#include "mlab/expsums.hpp"

namespace mlab::variance {

namespace {

struct Box {
  int64_t zlo, zhi, ylo, yhi, xlo, xhi;
};

Box support_box(const WeightConfig& cfg) {
  Box b;
  b.zlo = static_cast<int64_t>(std::ceil(cfg.Z1()));
  b.zhi = static_cast<int64_t>(std::floor(2 * cfg.Z2()));
  b.ylo = static_cast<int64_t>(std::ceil(cfg.Y1()));
  b.yhi = static_cast<int64_t>(std::floor(2 * cfg.Y2()));
  b.xlo = static_cast<int64_t>(std::ceil(cfg.Xlo()));
  b.xhi = static_cast<int64_t>(std::floor(2 * cfg.Xhi()));
  return b;
}

// s_a(K) as double from cached residue tables.
struct SaEvaluator {
  std::vector<std::vector<int64_t>> tables;  // per m = 1..K
  explicit SaEvaluator(uint64_t K) {
    tables.reserve(K);
    for (uint64_t m = 1; m <= K; ++m) tables.push_back(expsums::t_table(m));
  }
  double operator()(int64_t a) const {
    double s = 0;
    for (uint64_t m = 1; m <= tables.size(); ++m) {
      int64_t b = a % static_cast<int64_t>(m);
      if (b < 0) b += m;
      s += static_cast<double>(tables[m - 1][b]) / (static_cast<double>(m) * m * m);
    }
    return s;
  }
};

}  // namespace

double CountProfile::total_weight() const {
  double t = 0;
  for (auto& [a, w] : r) t += w;
  return t;
}

CountProfile r_profile(const WeightConfig& cfg, int workers) {
  cfg.validate();
  if (workers < 1) throw std::invalid_argument("r_profile: workers >= 1");
  CountProfile prof;
  prof.cfg = cfg;
  Box b = support_box(cfg);
  const uint64_t pair_budget = static_cast<uint64_t>(b.yhi - b.ylo + 1) *
                               static_cast<uint64_t>(b.zhi - b.zlo + 1);
  if (pair_budget > 100'000'000) throw std::runtime_error("r_profile: support too large");

  // one task per z-slice, merged in z order (deterministic)
  int64_t nz = b.zhi - b.zlo + 1;
  if (nz <= 0) return prof;
  std::vector<CountProfile> parts(static_cast<size_t>(nz));
  auto work = [&](int64_t zi) {
    int64_t zz = b.zlo + zi;
    int64_t z = cfg.sign > 0 ? zz : -zz;
    CountProfile& p = parts[static_cast<size_t>(zi)];
    for (int64_t y = b.ylo; y <= b.yhi; ++y)
      for (int64_t x = b.xlo; x <= b.xhi; ++x) {
        ++p.points_visited;
        double w = density::nu_weight(cfg, static_cast<double>(x), static_cast<double>(y),
                                      static_cast<double>(z));
        if (w == 0.0) continue;
        int64_t a = x * x + y * y + z * z - x * y * z;
        p.r[a] += w;
        p.rz[{z, a}] += w;
      }
  };
  if (workers == 1) {
    for (int64_t zi = 0; zi < nz; ++zi) work(zi);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int64_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          int64_t zi = next.fetch_add(1);
          if (zi >= nz) return;
          work(zi);
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& p : parts) {
    prof.points_visited += p.points_visited;
    for (auto& [a, w] : p.r) prof.r[a] += w;
    for (auto& [za, w] : p.rz) prof.rz[za] += w;
  }
  return prof;
}

std::pair<double, double> diagonal_split(const CountProfile& profile) {
  double s1 = 0, s1d = 0;
  for (auto& [a, w] : profile.r) s1 += w * w;
  for (auto& [za, w] : profile.rz) s1d += w * w;
  return {s1d, s1 - s1d};
}

VarianceReport variance(const WeightConfig& cfg, uint64_t K, const SigmaGrid& grid,
                        std::optional<std::pair<int64_t, int64_t>> a_range, int workers) {
  if (K < 1) throw std::invalid_argument("variance: K >= 1 required");
  VarianceReport rep;
  rep.K = K;
  auto prof = r_profile(cfg, workers);
  SaEvaluator sa(K);

  int64_t lo, hi;
  if (a_range) {
    lo = a_range->first;
    hi = a_range->second;
  } else {
    lo = static_cast<int64_t>(std::floor(grid.a_min()));
    hi = static_cast<int64_t>(std::ceil(grid.a_max()));
  }
  rep.a_lo = lo;
  rep.a_hi = hi;

  auto [s1d, s1nd] = diagonal_split(prof);
  rep.sigma1_d = s1d;
  rep.sigma1_nd = s1nd;

  auto rit = prof.r.begin();
  for (int64_t a = lo; a <= hi; ++a) {
    while (rit != prof.r.end() && rit->first < a) ++rit;
    double ra = (rit != prof.r.end() && rit->first == a) ? rit->second : 0.0;
    double pred = sa(a) * grid(static_cast<double>(a));
    double diff = ra - pred;
    rep.var += diff * diff;
    rep.sigma1 += ra * ra;
    rep.sigma2 += ra * pred;
    rep.sigma3 += pred * pred;
  }
  return rep;
}

double sigma2_grouped(const WeightConfig& cfg, uint64_t K, const SigmaGrid& grid) {
  cfg.validate();
  Box b = support_box(cfg);
  double total = 0;
  for (uint64_t n = 1; n <= K; ++n) {
    auto tab = expsums::t_table(n);
    double n3 = static_cast<double>(n) * n * n;
    // sum over residue classes e mod n of T_{M(e)}(n) times the weighted
    // sigma sum over lattice points z = e mod n
    double acc = 0;
    for (int64_t zz = b.zlo; zz <= b.zhi; ++zz) {
      int64_t z = cfg.sign > 0 ? zz : -zz;
      for (int64_t y = b.ylo; y <= b.yhi; ++y)
        for (int64_t x = b.xlo; x <= b.xhi; ++x) {
          double w = density::nu_weight(cfg, static_cast<double>(x), static_cast<double>(y),
                                        static_cast<double>(z));
          if (w == 0.0) continue;
          int64_t a = x * x + y * y + z * z - x * y * z;
          int64_t am = a % static_cast<int64_t>(n);
          if (am < 0) am += n;
          acc += static_cast<double>(tab[am]) * w * grid(static_cast<double>(a));
        }
    }
    total += acc / n3;
  }
  return total;
}

void dump_profile_csv(const std::string& path, const CountProfile& profile, uint64_t K,
                      const SigmaGrid& grid) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "a,r_a,s_aK,sigma,residual\n");
  SaEvaluator sa(K);
  for (auto& [a, ra] : profile.r) {
    double s = sa(a);
    double sig = grid(static_cast<double>(a));
    std::fprintf(f, "%lld,%.12g,%.12g,%.12g,%.12g\n", static_cast<long long>(a), ra, s, sig,
                 ra - s * sig);
  }
  std::fclose(f);
}

}  // namespace mlab::variance
