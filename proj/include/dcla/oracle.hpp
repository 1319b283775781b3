#pragma once

// Brute-force reference minimizers used to check the closed-form and
// bisection prox routines. These only evaluate objectives; they never call
// the routines they check.

#include "dcla/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dcla::oracle {

using Objective1D = std::function<double(double)>;
using Objective2D = std::function<double(double, double)>;

/// argmin of f over the uniform grid lo, lo + step, ..., hi.
double grid_argmin_1d(const Objective1D& f, double lo, double hi, double step);

/// Global argmin over [lo0, hi0] x [lo1, hi1]: exhaustive coarse grid, then
/// the `keep` best coarse points are refined by successive local grids
/// (re-centred until the centre is the window's best) until the spacing
/// drops below `final_step`.
Point grid_argmin_2d(const Objective2D& f, double lo0, double hi0, double lo1, double hi1,
                     double coarse_step, double final_step, int keep = 8);

/// Same refinement scheme in 1D, for fine tolerances where a full grid
/// would be too large.
double zoom_argmin_1d(const Objective1D& f, double lo, double hi, double coarse_step,
                      double final_step, int keep = 8);

struct CheckResult {
  std::string name;
  int trials = 0;
  double max_deviation = 0.0;
};

/// Random (x, t) trials for every closed-form / bisection prox against the
/// grid oracles. Used by the `prox-check` CLI verb and the acceptance suite.
std::vector<CheckResult> run_prox_checks(int trials, std::uint64_t seed);

}  // namespace dcla::oracle
