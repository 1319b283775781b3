#include "dcla/diagnostics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace dcla {

void Histogram2D::normalize() {
  const double s = mass.sum();
  if (!(s > 0.0)) throw InvalidArgument("Histogram2D::normalize: total mass is not positive");
  mass /= s;
  total = 1.0;
}

std::vector<double> uniform_edges(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("uniform_edges: need at least one bin");
  if (!(hi > lo)) throw InvalidArgument("uniform_edges: need lo < hi");
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  const double w = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) e[static_cast<std::size_t>(i)] = lo + w * i;
  e.back() = hi;
  return e;
}

std::vector<double> aligned_edges(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("aligned_edges: need at least one bin");
  if (!(hi > lo)) throw InvalidArgument("aligned_edges: need lo < hi");
  if (!(lo < 0.0 && hi > 0.0)) return uniform_edges(lo, hi, n);
  const double w = (hi - lo) / n;
  // Number of whole bins left of zero; round so the shift is at most w/2.
  const long left = std::lround(-lo / w);
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) e[static_cast<std::size_t>(i)] = w * static_cast<double>(i - left);
  e[static_cast<std::size_t>(left)] = 0.0;
  return e;
}

namespace {

// [lo, hi] split at 0 when 0 is interior.
std::vector<std::pair<double, double>> axis_pieces(double lo, double hi) {
  if (lo < 0.0 && hi > 0.0) return {{lo, 0.0}, {0.0, hi}};
  return {{lo, hi}};
}

constexpr unsigned kMaxDepth = 18;

}  // namespace

double normalize_density(const DCPotential& V, const Box2D& box, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (V.d != 2) throw InvalidArgument("normalize_density: potential must be two-dimensional");
  if (!(tol > 0.0)) throw InvalidArgument("normalize_density: tol must be > 0");
  if (!(box.x_hi > box.x_lo) || !(box.y_hi > box.y_lo)) {
    throw InvalidArgument("normalize_density: empty box");
  }

  // Relative targets derived from the absolute tolerance; the final check
  // below is what guarantees tol.
  const double inner_rel = std::max(1e-13, tol * 1e-2);
  const double outer_rel = std::max(1e-13, tol * 1e-1);
  // (x, inner error estimate) at every outer node, integrated afterwards.
  std::vector<std::pair<double, double>> inner_errors;
  Point p(2);

  auto inner = [&](double x) {
    double sum = 0.0;
    double err_sum = 0.0;
    for (auto [a, b] : axis_pieces(box.y_lo, box.y_hi)) {
      double err = 0.0;
      sum += gauss_kronrod<double, 15>::integrate(
          [&](double y) {
            p[0] = x;
            p[1] = y;
            return std::exp(-potential_eval(V, p));
          },
          a, b, kMaxDepth, inner_rel, &err);
      err_sum += err;
    }
    inner_errors.emplace_back(x, err_sum);
    return sum;
  };

  double Z = 0.0;
  double outer_err = 0.0;
  for (auto [a, b] : axis_pieces(box.x_lo, box.x_hi)) {
    double err = 0.0;
    Z += gauss_kronrod<double, 15>::integrate(inner, a, b, kMaxDepth, outer_rel, &err);
    outer_err += err;
  }

  // Trapezoid over the visited nodes, held constant out to the box edges.
  std::sort(inner_errors.begin(), inner_errors.end());
  double propagated = 0.0;
  if (!inner_errors.empty()) {
    propagated += inner_errors.front().second * (inner_errors.front().first - box.x_lo);
    propagated += inner_errors.back().second * (box.x_hi - inner_errors.back().first);
    for (std::size_t i = 1; i < inner_errors.size(); ++i) {
      propagated += 0.5 * (inner_errors[i].second + inner_errors[i - 1].second) *
                    (inner_errors[i].first - inner_errors[i - 1].first);
    }
  }
  const double total_err = outer_err + propagated;
  if (!std::isfinite(Z) || total_err > tol) {
    std::ostringstream msg;
    msg << "normalize_density: error estimate " << total_err << " exceeds tolerance " << tol
        << " (Z ~ " << Z << ")";
    throw ConvergenceError(msg.str());
  }
  if (!(Z > 0.0)) throw ConvergenceError("normalize_density: integral is not positive");
  return Z;
}

Box2D square_box(const Point& c, double half) {
  return {c[0] - half, c[0] + half, c[1] - half, c[1] + half};
}

Box2D default_box(const DCPotential& V, double coverage, double tol) {
  const auto* quad = std::get_if<QuadraticF>(&V.f);
  if (!quad) throw InvalidArgument("default_box: needs a quadratic f");
  if (V.d != 2) throw InvalidArgument("default_box: potential must be two-dimensional");
  if (!(coverage > 0.0 && coverage < 1.0)) throw InvalidArgument("default_box: coverage in (0, 1)");
  const Point& m = quad->mean();
  const double outer = 6.0 / std::sqrt(quad->mu_f());
  // Coverage is compared at the 1e-3 level; a looser quadrature suffices.
  const double search_tol = std::max(tol, 1e-7);
  const double target = coverage * normalize_density(V, square_box(m, outer), search_tol);
  double lo = 0.0;
  double hi = outer;
  while (hi - lo > 1e-3 * outer) {
    const double mid = 0.5 * (lo + hi);
    if (normalize_density(V, square_box(m, mid), search_tol) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return square_box(m, hi);
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

namespace {

void check_edges(const std::vector<double>& e, const char* axis) {
  if (e.size() < 2) throw InvalidArgument(std::string("edges ") + axis + ": need at least one bin");
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] > e[i - 1])) {
      throw InvalidArgument(std::string("edges ") + axis + ": not strictly increasing");
    }
  }
}

}  // namespace

Histogram2D target_hist(const DCPotential& V, double Z, const std::vector<double>& x_edges,
                        const std::vector<double>& y_edges, int order) {
  if (V.d != 2) throw InvalidArgument("target_hist: potential must be two-dimensional");
  if (!(Z > 0.0)) throw InvalidArgument("target_hist: Z must be > 0");
  check_edges(x_edges, "x");
  check_edges(y_edges, "y");
  const GaussRule rule = gauss_legendre(order);

  Histogram2D h{x_edges, y_edges, Matrix::Zero(static_cast<Eigen::Index>(x_edges.size()) - 1,
                                               static_cast<Eigen::Index>(y_edges.size()) - 1),
                0.0};
  Point p(2);
  for (int i = 0; i < h.nx(); ++i) {
    const double xc = 0.5 * (x_edges[i] + x_edges[i + 1]);
    const double xh = 0.5 * (x_edges[i + 1] - x_edges[i]);
    for (int j = 0; j < h.ny(); ++j) {
      const double yc = 0.5 * (y_edges[j] + y_edges[j + 1]);
      const double yh = 0.5 * (y_edges[j + 1] - y_edges[j]);
      double s = 0.0;
      for (int a = 0; a < order; ++a) {
        p[0] = xc + xh * rule.nodes[a];
        double row = 0.0;
        for (int b = 0; b < order; ++b) {
          p[1] = yc + yh * rule.nodes[b];
          row += rule.weights[b] * std::exp(-potential_eval(V, p));
        }
        s += rule.weights[a] * row;
      }
      h.mass(i, j) = s * xh * yh / Z;
    }
  }
  h.normalize();
  return h;
}

SampleHistogram histogram2d(const Matrix& samples, const std::vector<double>& x_edges,
                            const std::vector<double>& y_edges) {
  if (samples.cols() != 2) throw InvalidArgument("histogram2d: samples must have two columns");
  if (samples.rows() == 0) throw InvalidArgument("histogram2d: empty sample set");
  check_edges(x_edges, "x");
  check_edges(y_edges, "y");

  SampleHistogram out;
  out.hist = {x_edges, y_edges,
              Matrix::Zero(static_cast<Eigen::Index>(x_edges.size()) - 1,
                           static_cast<Eigen::Index>(y_edges.size()) - 1),
              0.0};
  auto locate = [](const std::vector<double>& e, double v) -> long {
    if (v < e.front() || v > e.back()) return -1;
    if (v == e.back()) return static_cast<long>(e.size()) - 2;
    return static_cast<long>(std::upper_bound(e.begin(), e.end(), v) - e.begin()) - 1;
  };
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    const double x = samples(r, 0);
    const double y = samples(r, 1);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    const long i = locate(x_edges, x);
    const long j = locate(y_edges, y);
    if (i < 0 || j < 0) {
      ++out.n_outside;
      continue;
    }
    out.hist.mass(i, j) += 1.0;
    ++out.n_inside;
  }
  if (out.n_inside == 0) throw InvalidArgument("histogram2d: no finite sample inside the grid");
  out.hist.normalize();
  return out;
}

double binned_kl(const Histogram2D& p, const Histogram2D& q) {
  if (p.x_edges != q.x_edges || p.y_edges != q.y_edges) {
    throw InvalidArgument("binned_kl: histograms use different edges");
  }
  constexpr double floor = 1e-12;
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.mass.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.mass.cols(); ++j) {
      const double pi = p.mass(i, j);
      if (pi > 0.0) kl += pi * std::log(pi / std::max(q.mass(i, j), floor));
    }
  }
  return kl;
}

Moments sample_moments(const Matrix& samples) {
  if (samples.rows() < 2) throw InvalidArgument("sample_moments: need at least two samples");
  Moments m;
  m.mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * centered / static_cast<double>(samples.rows() - 1);
  return m;
}

void write_histogram_csv(std::ostream& os, const Histogram2D& h) {
  os << "x_lo,x_hi,y_lo,y_hi,mass\n";
  os << std::setprecision(17);
  for (int i = 0; i < h.nx(); ++i) {
    for (int j = 0; j < h.ny(); ++j) {
      os << h.x_edges[i] << ',' << h.x_edges[i + 1] << ',' << h.y_edges[j] << ','
         << h.y_edges[j + 1] << ',' << h.mass(i, j) << '\n';
    }
  }
}

}  // namespace dcla
