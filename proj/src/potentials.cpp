#include "dcla/potentials.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace dcla {

QuadraticF::QuadraticF(Point mean, Matrix precision)
    : mean_(std::move(mean)), precision_(std::move(precision)) {
  require_valid_point(mean_, "QuadraticF mean");
  const auto d = mean_.size();
  if (precision_.rows() != d || precision_.cols() != d) {
    throw InvalidArgument("QuadraticF: precision must be " + std::to_string(d) + "x" +
                          std::to_string(d));
  }
  if (!precision_.allFinite()) throw InvalidArgument("QuadraticF: non-finite precision");
  if ((precision_ - precision_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("QuadraticF: precision is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(precision_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw InvalidArgument("QuadraticF: eigensolver failed");
  mu_f_ = eig.eigenvalues().minCoeff();
  L_f_ = eig.eigenvalues().maxCoeff();
  if (!(mu_f_ > 0.0)) throw InvalidArgument("QuadraticF: precision is not positive definite");
}

ValueGrad f_eval_grad(const QuadraticF& f, const Point& x) {
  if (x.size() != f.mean().size()) {
    throw InvalidArgument("f_eval_grad: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(f.mean().size()) + ")");
  }
  const Point diff = x - f.mean();
  Point grad = f.precision() * diff;
  return {0.5 * diff.dot(grad), std::move(grad)};
}

DCPotential::DCPotential(QuadraticF quad, DCRegularizer r)
    : f(std::move(quad)), reg(std::move(r)) {
  d = std::get<QuadraticF>(f).dim();
  reg.validate();
}

DCPotential::DCPotential(SmoothF smooth, int dim, DCRegularizer r)
    : f(std::move(smooth)), reg(std::move(r)), d(dim) {
  if (d < 1) throw InvalidArgument("DCPotential: d must be >= 1");
  const auto& s = std::get<SmoothF>(f);
  if (!s.value || !s.grad) throw InvalidArgument("SmoothF: value and grad callbacks required");
  if (!(s.L_f > 0.0)) throw InvalidArgument("SmoothF: L_f must be > 0");
  reg.validate();
}

double DCPotential::f_value(const Point& x) const {
  if (const auto* q = std::get_if<QuadraticF>(&f)) return f_eval_grad(*q, x).value;
  return std::get<SmoothF>(f).value(x);
}

Point DCPotential::f_grad(const Point& x) const {
  if (const auto* q = std::get_if<QuadraticF>(&f)) {
    if (x.size() != q->dim()) throw InvalidArgument("f_grad: dimension mismatch");
    return q->precision() * (x - q->mean());
  }
  return std::get<SmoothF>(f).grad(x);
}

double DCPotential::L_f() const {
  if (const auto* q = std::get_if<QuadraticF>(&f)) return q->L_f();
  return std::get<SmoothF>(f).L_f;
}

double potential_eval(const DCPotential& V, const Point& x) {
  const DCValue r = dc_eval(V.reg, x);
  return V.f_value(x) + (r.r1 - r.r2);
}

double smoothed_potential_eval(const DCPotential& V, double lam, const Point& x) {
  if (V.reg.is_zero()) return V.f_value(x);
  return V.f_value(x) + moreau_value(component(V.reg, Component::R1), lam, x) -
         moreau_value(component(V.reg, Component::R2), lam, x);
}

DissipativityConstants dissipativity_constants(const DCPotential& V, int d) {
  double mu_f = 0.0;
  double R_f = 0.0;
  if (const auto* q = std::get_if<QuadraticF>(&V.f)) {
    mu_f = q->mu_f();
  } else {
    const auto& s = std::get<SmoothF>(V.f);
    if (!s.mu_f) throw InvalidArgument("dissipativity_constants: SmoothF must declare mu_f");
    mu_f = *s.mu_f;
    R_f = s.R_f;
  }
  if (!(mu_f > 0.0)) throw InvalidArgument("dissipativity_constants: f is not dissipative (mu_f <= 0)");
  if (R_f < 0.0) throw InvalidArgument("dissipativity_constants: R_f must be >= 0");

  const RegularizerInfo info = lipschitz_info(V.reg, d);
  if (const auto* lip = std::get_if<LipschitzR2>(&info.r2_regularity)) {
    if (lip->G2 == 0.0) return {mu_f, R_f};
    return {mu_f / 2.0, std::max(R_f, 4.0 * lip->G2 / mu_f)};
  }
  const auto& h = std::get<HolderR2>(info.r2_regularity);
  return {mu_f / 2.0, std::max(R_f, std::pow(2.0 * h.M / mu_f, 1.0 / (1.0 - h.kappa)))};
}

double max_stepsize(int q, double mu, double lam, double L_f, const StepsizeScheme& scheme) {
  if (q < 1) throw InvalidArgument("max_stepsize: q must be >= 1");
  if (!(mu > 0.0) || !(lam > 0.0) || !(L_f > 0.0)) {
    throw InvalidArgument("max_stepsize: mu, lam and L_f must be > 0");
  }
  double c = 0.0;
  if (const auto* s = std::get_if<DclasBound>(&scheme)) {
    if (!(s->L_r2 > 0.0)) throw InvalidArgument("max_stepsize: L_r2 must be > 0");
    c = 1.0 + lam * L_f + lam * s->L_r2;
  } else {
    c = 2.0 + lam * L_f;
  }
  const double lam2 = lam * lam;
  if (q == 1) return mu * lam2 / (2.0 * c * c);
  const double qd = static_cast<double>(q);
  const double moment_bound = mu * lam2 / (c * c * std::pow(2.0, 2.0 * qd + 3.0) * (2.0 * qd - 1.0));
  return std::min(moment_bound, lam / (4.0 * c));
}

}  // namespace dcla
