#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

// Small numeric helpers shared across the geometry and probability code.
namespace irsho {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

inline double sq(double x) { return x * x; }

// acos with the argument clamped to [-1, 1]; the geometry code produces
// arguments that drift an ulp outside the domain near branch boundaries.
inline double acos_clamped(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

// 1 - e^{-x} without cancellation for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// Compensated (Kahan) accumulator for long probability sums.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// An arc on the unit circle: angles in [start, start+len], len in [0, 2pi].
// Start is kept in [0, 2pi) for reproducible interval arithmetic.
struct Arc {
  double start = 0.0;
  double len = 0.0;
  bool full() const { return len >= two_pi; }
  bool empty() const { return len <= 0.0; }
};

inline double wrap_angle(double a) {
  double w = std::fmod(a, two_pi);
  if (w < 0.0) w += two_pi;
  return w;
}

inline Arc make_arc(double center, double half_width) {
  if (half_width <= 0.0) return {0.0, 0.0};
  if (half_width >= pi) return {0.0, two_pi};
  return {wrap_angle(center - half_width), 2.0 * half_width};
}

// Union of at most two disjoint arcs — all the circle subsets this library
// needs (each membership condition yields one arc; we intersect at most two).
struct ArcSet {
  std::array<Arc, 2> arc{};
  int n = 0;
  double total() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += arc[i].len;
    return t;
  }
  void add(Arc a) {
    if (a.empty()) return;
    arc[static_cast<std::size_t>(n++)] = a;
  }
};

inline ArcSet arcset_of(Arc a) {
  ArcSet s;
  s.add(a);
  return s;
}

inline bool arc_contains(const Arc& a, double angle) {
  if (a.empty()) return false;
  if (a.full()) return true;
  return wrap_angle(angle - a.start) <= a.len;
}

inline bool arcset_contains(const ArcSet& s, double angle) {
  for (int i = 0; i < s.n; ++i) {
    if (arc_contains(s.arc[static_cast<std::size_t>(i)], angle)) return true;
  }
  return false;
}

// Intersection of two single arcs. Unrolls the circle onto the line: images of
// b at offsets {-2pi, 0, +2pi} can each overlap a once, and because both arcs
// are shorter than the full circle at most two images contribute.
inline ArcSet arc_intersect(Arc a, Arc b) {
  if (a.full()) return arcset_of(b);
  if (b.full()) return arcset_of(a);
  ArcSet out;
  if (a.empty() || b.empty()) return out;
  const double a_lo = a.start, a_hi = a.start + a.len;
  for (double shift : {-two_pi, 0.0, two_pi}) {
    const double lo = std::max(a_lo, b.start + shift);
    const double hi = std::min(a_hi, b.start + b.len + shift);
    if (hi > lo) out.add({wrap_angle(lo), hi - lo});
  }
  return out;
}

}  // namespace irsho
