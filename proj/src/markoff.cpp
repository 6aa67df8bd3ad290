#include "mlab/markoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab::markoff {

namespace {

int64_t checked(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
  return static_cast<int64_t>(v);
}

__int128 M128(int64_t x, int64_t y, int64_t z) {
  return static_cast<__int128>(x) * x + static_cast<__int128>(y) * y +
         static_cast<__int128>(z) * z - static_cast<__int128>(x) * y * z;
}

// Exact integer square root for non-negative 128-bit values.
__int128 isqrt128(__int128 n) {
  if (n < 0) return -1;
  __int128 r = static_cast<__int128>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

int64_t M(const Triple& t) { return checked(M128(t.x, t.y, t.z), "M overflow"); }

bool is_admissible(int64_t a) {
  int64_t m4 = ((a % 4) + 4) % 4;
  int64_t m9 = ((a % 9) + 9) % 9;
  return m4 != 3 && m9 != 3 && m9 != 6;
}

Triple vieta_move(const Triple& t, Axis axis) {
  Triple r = t;
  switch (axis) {
    case Axis::X:
      r.x = checked(static_cast<__int128>(t.y) * t.z - t.x, "vieta overflow");
      break;
    case Axis::Y:
      r.y = checked(static_cast<__int128>(t.x) * t.z - t.y, "vieta overflow");
      break;
    case Axis::Z:
      r.z = checked(static_cast<__int128>(t.x) * t.y - t.z, "vieta overflow");
      break;
  }
  return r;
}

namespace {

__int128 norm2(const Triple& t) {
  return static_cast<__int128>(t.x) * t.x + static_cast<__int128>(t.y) * t.y +
         static_cast<__int128>(t.z) * t.z;
}

Triple normalize(Triple t) {
  int64_t v[3] = {t.x, t.y, t.z};
  std::sort(v, v + 3, [](int64_t a, int64_t b) { return std::llabs(a) < std::llabs(b); });
  int neg = 0;
  bool has_zero = false;
  for (int64_t c : v) {
    if (c < 0) ++neg;
    if (c == 0) has_zero = true;
  }
  int64_t w[3] = {std::llabs(v[0]), std::llabs(v[1]), std::llabs(v[2])};
  if (!has_zero && (neg % 2) == 1) w[2] = -w[2];
  return Triple{w[0], w[1], w[2]};
}

}  // namespace

Triple descend(const Triple& t) {
  Triple cur = t;
  for (;;) {
    __int128 n = norm2(cur);
    Triple best = cur;
    __int128 best_n = n;
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
      Triple cand = vieta_move(cur, ax);
      __int128 cn = norm2(cand);
      if (cn < best_n) {
        best_n = cn;
        best = cand;
      }
    }
    if (best_n == n) break;
    cur = best;
  }
  return normalize(cur);
}

namespace {

// Appends the integer z-solutions of z^2 - xy z + (x^2+y^2-a) = 0.
template <typename Fn>
void for_z_solutions(int64_t a, int64_t x, int64_t y, Fn&& fn) {
  __int128 xy = static_cast<__int128>(x) * y;
  __int128 D = xy * xy - 4 * (static_cast<__int128>(x) * x + static_cast<__int128>(y) * y - a);
  if (D < 0) return;
  __int128 s = isqrt128(D);
  if (s * s != D) return;
  // z = (xy +/- s) / 2, integral iff xy and s share parity
  if (((xy ^ s) & 1) == 0) {
    fn(checked((xy - s) / 2, "z overflow"));
    if (s != 0) fn(checked((xy + s) / 2, "z overflow"));
  }
}

}  // namespace

Classification has_integral_point(int64_t a, double C) {
  if (std::llabs(a) > (int64_t(1) << 40)) throw std::invalid_argument("|a| too large");
  if (!is_admissible(a)) return Classification{SurfaceClass::NotAdmissible, std::nullopt, 0};
  int64_t R = static_cast<int64_t>(std::ceil(C * std::sqrt(1.0 + std::fabs(static_cast<double>(a)))));
  if (std::llabs(a) <= 4) R = std::max<int64_t>(R, 8);  // avoid degenerate small boxes
  for (int64_t y = 0; y <= R; ++y) {
    for (int64_t x = -y; x <= y; ++x) {
      Classification found;
      bool hit = false;
      for_z_solutions(a, x, y, [&](int64_t z) {
        if (!hit) {
          found = Classification{SurfaceClass::Solvable, Triple{x, y, z}, R};
          hit = true;
        }
      });
      if (hit) return found;
    }
  }
  return Classification{SurfaceClass::FailureCandidate, std::nullopt, R};
}

std::vector<Triple> brute_force_box(int64_t a, int64_t H, size_t limit) {
  std::vector<Triple> out;
  for (int64_t x = -H; x <= H && out.size() < limit; ++x)
    for (int64_t y = -H; y <= H && out.size() < limit; ++y)
      for_z_solutions(a, x, y, [&](int64_t z) {
        if (out.size() < limit) out.push_back(Triple{x, y, z});
      });
  return out;
}

}  // namespace mlab::markoff
