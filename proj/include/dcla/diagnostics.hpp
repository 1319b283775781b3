#pragma once

// Evaluation layer for 2D targets: normalizing constants, binned target
// masses, sample histograms and the binned KL divergence between them.

#include "dcla/core.hpp"
#include "dcla/potentials.hpp"

#include <iosfwd>
#include <vector>

namespace dcla {

struct Box2D {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double y_lo = -1.0;
  double y_hi = 1.0;
};

struct Histogram2D {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  Matrix mass;  ///< (nx, ny); mass(i, j) covers [x_i, x_{i+1}) x [y_j, y_{j+1})
  double total = 0.0;

  int nx() const { return static_cast<int>(x_edges.size()) - 1; }
  int ny() const { return static_cast<int>(y_edges.size()) - 1; }
  /// Divides by the total. Throws if the total is not positive.
  void normalize();
};

/// n equal bins spanning [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, int n);

/// n bins of width (hi - lo)/n, shifted by less than one bin so that 0 is an
/// edge whenever 0 lies in (lo, hi). Keeps the kinks of |x|_1 on bin
/// boundaries.
std::vector<double> aligned_edges(double lo, double hi, int n);

/// Z = integral of exp(-V) over the box by nested adaptive Gauss-Kronrod,
/// split along the coordinate axes. Throws ConvergenceError if the
/// estimated absolute error exceeds tol.
double normalize_density(const DCPotential& V, const Box2D& box, double tol);

/// Square of half-width `half` centred at c.
Box2D square_box(const Point& c, double half);

/// Default evaluation box for a quadratic-f target: the smallest square
/// around the mean holding `coverage` of the mass found in the square of
/// half-width 6/sqrt(mu_f) (bisection to 0.1% of that width). Sharp
/// regularizers concentrate the target well inside the quadratic's own
/// spread, so this keeps bins fine enough to see the structure.
Box2D default_box(const DCPotential& V, double coverage = 0.999, double tol = 1e-8);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Per-bin mass of exp(-V)/Z by an order x order tensor Gauss rule, then
/// renormalized to total 1 over the grid.
Histogram2D target_hist(const DCPotential& V, double Z, const std::vector<double>& x_edges,
                        const std::vector<double>& y_edges, int order = 8);

struct SampleHistogram {
  Histogram2D hist;  ///< normalized by n_inside
  long n_inside = 0;
  long n_outside = 0;
};

/// Bins the rows of an (n, 2) sample matrix. Points outside the grid are
/// counted in n_outside; rows with NaN are ignored. Throws InvalidArgument
/// on an empty sample set or when no sample falls inside the grid.
SampleHistogram histogram2d(const Matrix& samples, const std::vector<double>& x_edges,
                            const std::vector<double>& y_edges);

/// sum_i p_i log(p_i / max(q_i, 1e-12)) over bins with p_i > 0.
/// Throws InvalidArgument if the edges differ.
double binned_kl(const Histogram2D& p, const Histogram2D& q);

struct Moments {
  Point mean;
  Matrix cov;  ///< unbiased (n - 1 divisor)
};

/// Mean and covariance of the rows. Needs at least two rows.
Moments sample_moments(const Matrix& samples);

/// CSV with header x_lo,x_hi,y_lo,y_hi,mass; 17 significant digits.
void write_histogram_csv(std::ostream& os, const Histogram2D& h);

}  // namespace dcla
