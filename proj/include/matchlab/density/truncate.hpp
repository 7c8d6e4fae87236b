#pragma once

#include <memory>

#include "matchlab/density/radial_law.hpp"
#include "matchlab/geometry/shells.hpp"

namespace matchlab {

struct Truncation {
  std::shared_ptr<const TruncatedDensity> law;
  ShellSchedule schedule;
};

/// rho_n: rho on B_{R'_n} with the outside mass compressed into R'_n <= |x| <= R_n.
inline Truncation truncate(std::shared_ptr<const RadialDensity> base, double eps, double p, double n) {
  Truncation t;
  t.schedule = build_radii(base->potential(), eps, n, p);
  t.law = std::make_shared<TruncatedDensity>(base, t.schedule.r_prime(), t.schedule.r_outer());
  return t;
}

}  // namespace matchlab
