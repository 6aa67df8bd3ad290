#pragma once

#include <cstdint>
#include <optional>

#include "mlab/quadrature.hpp"

namespace mlab::density {

// Smoothed-count weight configuration: windows Z in [B^{d+e}, B^{d+2e}] for
// |z| and Y in [B^{1-d}, B^{1-d+e}] for y, with X = B^2/(YZ). Requires
// 0 < eta < delta/10 and B >= 1.
struct WeightConfig {
  double B = 100.0;
  double delta = 0.2;
  double eta = 0.01;
  int sign = +1;  // varsigma

  double Z1() const;
  double Z2() const;
  double Y1() const;
  double Y2() const;
  double Xlo() const;  // B^2 / (Y2 Z2)
  double Xhi() const;  // B^2 / (Y1 Z1)

  void validate() const;  // throws invalid_argument on a bad window setup
};

// The base bump: mass 1, supported on [1,2].
double bump(double u);

// nu_{B,sign}(x,y,z): double logarithmic average of the three bumps.
double nu_weight(const WeightConfig& cfg, double x, double y, double z);

enum class Route { SurfaceIntegral, SlabLimit, AIntegral, VolumeIntegral, LatticeSum };

struct DensityValue {
  double value = 0;
  double error = 0;
  Route route = Route::SurfaceIntegral;
  bool converged = true;
};

// sigma_{infty,a,nu}(B,sign) as the surface integral over (x,y) with weight
// 1/|2z - xy| at the z-roots of M(x,y,z) = a.
DensityValue sigma_infty(const WeightConfig& cfg, double a);

// Slab-limit oracle: (2 eps)^{-1} * volume integral of nu over |M - a| <= eps
// (exact z-interval decomposition; independent of the surface route).
DensityValue sigma_infty_slab(const WeightConfig& cfg, double a, double eps);

// Cached evaluations of sigma_infty on an a-grid, monotone-cubic interpolated.
class SigmaGrid {
 public:
  SigmaGrid() = default;
  static SigmaGrid build(const WeightConfig& cfg, int nodes = 257);

  double operator()(double a) const;
  double a_min() const { return amin_; }
  double a_max() const { return amax_; }

 private:
  quad::Pchip interp_;
  double amin_ = 0, amax_ = 0;
};

// Reachable a-interval [lo, hi] for the weight support (conservative cover).
std::pair<double, double> reachable_a_interval(const WeightConfig& cfg);

// sigma^{(x)2}: primary route, the 1D integral of sigma(a)^2 over a.
DensityValue sigma_tensor2(const WeightConfig& cfg, const SigmaGrid& grid);

// Second route: the 3D integral of nu(x) sigma(M(x)) over the support.
DensityValue sigma_tensor2_volume(const WeightConfig& cfg, const SigmaGrid& grid);

// Lattice discretization of the volume route (sum over integer points);
// carries the N=1 Poisson discretization error of the z-window.
DensityValue sigma_tensor2_lattice(const WeightConfig& cfg, const SigmaGrid& grid);

// Pair density sigma^{(x)2}(a1,a2): surface integral over the zero set of
// G_{a1,a2} against nu(w1,w2,a2) nu(v1,v2,a1), computed in the (w1,w2,v1)
// parametrization (the v2-solved Jacobian stays bounded on the support).
DensityValue sigma_tensor2_fixed(const WeightConfig& cfg, int64_t a1, int64_t a2);

// Slab-limit oracle for the pair density, straight from the definition.
DensityValue sigma_tensor2_fixed_slab(const WeightConfig& cfg, int64_t a1, int64_t a2, double eps);

struct ProgressionReport {
  double progression_sum = 0;  // sum over integer a = b mod N of sigma(a)^2
  double expected = 0;         // sigma_tensor2 / N
  double rel_deviation = 0;
};

ProgressionReport poisson_progression_check(const WeightConfig& cfg, int N, int b,
                                            const SigmaGrid& grid);

}  // namespace mlab::density
