#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mlab::markoff {

struct Triple {
  int64_t x = 0, y = 0, z = 0;
  bool operator==(const Triple&) const = default;
};

enum class Axis { X, Y, Z };

// M(x,y,z) = x^2 + y^2 + z^2 - xyz, overflow-checked through 128 bits.
int64_t M(const Triple& t);

// Local solvability at every place: a != 3 mod 4 and a != +/-3 mod 9.
bool is_admissible(int64_t a);

// Replaces the chosen coordinate c by (product of the other two) - c.
// An involution preserving M.
Triple vieta_move(const Triple& t, Axis axis);

// Applies norm-decreasing Vieta moves until none remains, then normalizes:
// coordinates sorted by |.| ascending, at most one negative entry, placed last.
Triple descend(const Triple& t);

enum class SurfaceClass { NotAdmissible, Solvable, FailureCandidate };

struct Classification {
  SurfaceClass cls = SurfaceClass::NotAdmissible;
  std::optional<Triple> witness;
  int64_t searched_bound = 0;
};

// Searches pairs |x| <= |y| <= C (1+|a|)^{1/2} and solves the z-quadratic.
// NotAdmissible short-circuits; a witness certifies solvability exactly; a
// FailureCandidate records the exhausted bound and is a suspect, never a
// proof of Hasse failure.
Classification has_integral_point(int64_t a, double C = 3.0);

// All solutions with |x|,|y| <= H (z solved from the quadratic), stopping
// after `limit` triples. Deterministic order.
std::vector<Triple> brute_force_box(int64_t a, int64_t H, size_t limit = SIZE_MAX);

}  // namespace mlab::markoff
