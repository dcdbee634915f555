#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "irsho/mathx.hpp"
#include "irsho/rng.hpp"
#include "irsho/scenario.hpp"

// Shared between the production walker and the independently coded reference
// walker: the per-trial surface sampling must be identical so that the two
// walkers see the same point sets and their event sequences are comparable
// trial for trial. Nothing else is shared.
namespace irsho::mc_internal {

// Points sorted by (x, y); cell: 1 = original side, 2 = target side,
// 0 = owned by a third BS (full-topology mode only).
struct SurfaceField {
  std::vector<double> px, py;
  std::vector<signed char> cell;

  int size_i() const { return static_cast<int>(px.size()); }
};

inline void append_sorted(SurfaceField& f, std::vector<Vec2>& pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  f.px.reserve(pts.size());
  f.py.reserve(pts.size());
  for (const Vec2& p : pts) {
    f.px.push_back(p.x);
    f.py.push_back(p.y);
  }
}

// Band half-width: serving radius plus a tail margin. The scatterer law puts
// the nearest surface beyond the serving radius within D + m except with
// probability <= exp(-pi lambda m^2) = exp(-36) per evaluation.
inline double band_width(double d_serv, double lambda_r) {
  return d_serv + 6.0 / std::sqrt(pi * lambda_r);
}

// One trial's surface process in a band covering every walk position out to
// the band width; cell flags are the bisector half-plane sides.
inline SurfaceField matched_field(Philox& g, const ScenarioGeometry& geo,
                                  double lambda_r, double d_serv) {
  SurfaceField f;
  if (lambda_r <= 0.0) return f;
  const double w = band_width(d_serv, lambda_r);
  std::vector<Vec2> pts =
      ppp_rect(g, lambda_r, -geo.dx - w, geo.span + w, -w, w);
  append_sorted(f, pts);
  f.cell.reserve(f.px.size());
  for (std::size_t k = 0; k < f.px.size(); ++k) {
    const Vec2 p{f.px[k], f.py[k]};
    f.cell.push_back(geo.side_offset(Side::original, p) > 0.0 ? 1 : 2);
  }
  return f;
}

}  // namespace irsho::mc_internal
