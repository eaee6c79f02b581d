#include "cclf/head.hpp"

#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cclf/error.hpp"
#include "cclf/textio.hpp"

namespace cclf {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Dense problem view: X is n x d, y in {0,1}, parameters are [w; b].
class Problem {
 public:
  Problem(std::span<const EmbeddingVector> embeddings, std::span<const int> labels, double l2)
      : l2_(l2) {
    const auto n = static_cast<Eigen::Index>(embeddings.size());
    const auto d = embeddings.front().size();
    x_.resize(n, d);
    y_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (embeddings[static_cast<std::size_t>(i)].size() != d) {
        fail(ErrorCode::kDimensionMismatch, "embeddings have differing dimensions");
      }
      x_.row(i) = embeddings[static_cast<std::size_t>(i)].transpose();
      y_(i) = labels[static_cast<std::size_t>(i)];
    }
  }

  Eigen::Index dim() const { return x_.cols(); }
  Eigen::Index size() const { return x_.rows(); }
  const Eigen::MatrixXd& x() const { return x_; }
  double l2() const { return l2_; }

  Eigen::VectorXd margins(const Eigen::VectorXd& p) const {
    return (x_ * p.head(dim())).array() + p(dim());
  }

  double value_from_margins(const Eigen::VectorXd& z, const Eigen::VectorXd& p) const {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i) loss += softplus(z(i)) - y_(i) * z(i);
    return loss / static_cast<double>(size()) + 0.5 * l2_ * p.head(dim()).squaredNorm();
  }

  double value(const Eigen::VectorXd& p) const { return value_from_margins(margins(p), p); }

  ObjectiveEval eval(const Eigen::VectorXd& p) const {
    const Eigen::VectorXd z = margins(p);
    Eigen::VectorXd r(size());
    for (Eigen::Index i = 0; i < size(); ++i) r(i) = sigmoid(z(i)) - y_(i);
    ObjectiveEval out;
    out.value = value_from_margins(z, p);
    out.gradient.resize(dim() + 1);
    const double inv_n = 1.0 / static_cast<double>(size());
    out.gradient.head(dim()) = x_.transpose() * r * inv_n + l2_ * p.head(dim());
    out.gradient(dim()) = r.sum() * inv_n;
    return out;
  }

  // Per-sample curvature s(1-s) at p.
  Eigen::VectorXd curvature(const Eigen::VectorXd& p) const {
    const Eigen::VectorXd z = margins(p);
    Eigen::VectorXd h(size());
    for (Eigen::Index i = 0; i < size(); ++i) {
      const double s = sigmoid(z(i));
      h(i) = s * (1.0 - s);
    }
    return h;
  }

  Eigen::VectorXd hessian_times(const Eigen::VectorXd& curv, const Eigen::VectorXd& v) const {
    const Eigen::VectorXd xv = (x_ * v.head(dim())).array() + v(dim());
    const Eigen::VectorXd weighted = curv.cwiseProduct(xv) / static_cast<double>(size());
    Eigen::VectorXd out(dim() + 1);
    out.head(dim()) = x_.transpose() * weighted + l2_ * v.head(dim());
    out(dim()) = weighted.sum();
    return out;
  }

  const Eigen::VectorXd& labels() const { return y_; }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  double l2_;
};

void check_finite(const ObjectiveEval& e) {
  if (!std::isfinite(e.value) || !e.gradient.allFinite()) {
    fail(ErrorCode::kNonFiniteObjective, "logistic objective is not finite");
  }
}

// Backtracking Armijo search along `dir`. Returns the accepted step or 0.
double armijo(const Problem& prob, const Eigen::VectorXd& p, const ObjectiveEval& at,
              const Eigen::VectorXd& dir, double step) {
  const double slope = at.gradient.dot(dir);
  if (!(slope < 0.0)) return 0.0;
  for (int k = 0; k < 60; ++k) {
    if (prob.value(p + step * dir) <= at.value + 1e-4 * step * slope) return step;
    step *= 0.5;
  }
  return 0.0;
}

struct FitResult {
  Eigen::VectorXd params;
  bool converged = false;
  int iterations = 0;
};

FitResult fit_lbfgs(const Problem& prob, Eigen::VectorXd p, int max_iter, double tol) {
  constexpr std::size_t kMemory = 10;
  std::deque<Eigen::VectorXd> ss, ys;
  std::deque<double> rhos;
  FitResult res;
  ObjectiveEval cur = prob.eval(p);
  check_finite(cur);
  for (; res.iterations < max_iter; ++res.iterations) {
    if (cur.gradient.norm() <= tol) break;
    // Two-loop recursion.
    Eigen::VectorXd q = cur.gradient;
    std::vector<double> alpha(ss.size());
    for (std::size_t k = ss.size(); k-- > 0;) {
      alpha[k] = rhos[k] * ss[k].dot(q);
      q -= alpha[k] * ys[k];
    }
    if (!ss.empty()) q *= ss.back().dot(ys.back()) / ys.back().squaredNorm();
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const double beta = rhos[k] * ys[k].dot(q);
      q += (alpha[k] - beta) * ss[k];
    }
    Eigen::VectorXd dir = -q;
    double step = armijo(prob, p, cur, dir, 1.0);
    if (step == 0.0) {
      ss.clear(), ys.clear(), rhos.clear();
      dir = -cur.gradient;
      step = armijo(prob, p, cur, dir, 1.0);
      if (step == 0.0) break;
    }
    Eigen::VectorXd next = p + step * dir;
    ObjectiveEval nxt = prob.eval(next);
    check_finite(nxt);
    Eigen::VectorXd s = next - p;
    Eigen::VectorXd y = nxt.gradient - cur.gradient;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (ss.size() == kMemory) ss.pop_front(), ys.pop_front(), rhos.pop_front();
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rhos.push_back(1.0 / sy);
    }
    p = std::move(next);
    cur = std::move(nxt);
  }
  res.converged = cur.gradient.norm() <= tol;
  res.params = std::move(p);
  return res;
}

FitResult fit_newton_cg(const Problem& prob, Eigen::VectorXd p, int max_iter, double tol) {
  FitResult res;
  ObjectiveEval cur = prob.eval(p);
  check_finite(cur);
  const Eigen::Index m = p.size();
  for (; res.iterations < max_iter; ++res.iterations) {
    const double gnorm = cur.gradient.norm();
    if (gnorm <= tol) break;
    // Truncated conjugate gradient on H d = -g.
    const Eigen::VectorXd curv = prob.curvature(p);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd r = -cur.gradient;
    Eigen::VectorXd dir = r;
    double rr = r.squaredNorm();
    const double cg_tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
    for (Eigen::Index k = 0; k < 2 * m && std::sqrt(rr) > cg_tol; ++k) {
      const Eigen::VectorXd hd = prob.hessian_times(curv, dir);
      const double curvature = dir.dot(hd);
      if (curvature <= 1e-14 * dir.squaredNorm()) {
        if (k == 0) d = -cur.gradient;
        break;
      }
      const double a = rr / curvature;
      d += a * dir;
      r -= a * hd;
      const double rr_next = r.squaredNorm();
      dir = r + (rr_next / rr) * dir;
      rr = rr_next;
    }
    double step = armijo(prob, p, cur, d, 1.0);
    if (step == 0.0) {
      d = -cur.gradient;
      step = armijo(prob, p, cur, d, 1.0);
      if (step == 0.0) break;
    }
    p += step * d;
    cur = prob.eval(p);
    check_finite(cur);
  }
  res.converged = cur.gradient.norm() <= tol;
  res.params = std::move(p);
  return res;
}

// Cyclic coordinate descent with a safeguarded one-dimensional Newton step per
// coordinate; one outer iteration is one sweep over all d + 1 coordinates.
FitResult fit_coordinate(const Problem& prob, Eigen::VectorXd p, int max_iter, double tol) {
  FitResult res;
  const Eigen::Index d = prob.dim();
  const auto n = prob.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto& x = prob.x();
  const auto& y = prob.labels();
  Eigen::VectorXd z = prob.margins(p);

  auto column = [&](Eigen::Index j) -> Eigen::VectorXd {
    return j < d ? Eigen::VectorXd(x.col(j)) : Eigen::VectorXd::Ones(n);
  };
  // Objective restricted to coordinate j, as a function of the step t.
  auto line_value = [&](const Eigen::VectorXd& col, Eigen::Index j, double t) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double zi = z(i) + t * col(i);
      loss += softplus(zi) - y(i) * zi;
    }
    double reg = 0.0;
    if (j < d) reg = 0.5 * prob.l2() * (std::pow(p(j) + t, 2) - p(j) * p(j));
    return loss * inv_n + reg;
  };

  auto grad_norm = [&] { return prob.eval(p).gradient.norm(); };
  if (!std::isfinite(prob.value(p))) fail(ErrorCode::kNonFiniteObjective, "logistic objective is not finite");

  for (; res.iterations < max_iter; ++res.iterations) {
    if (grad_norm() <= tol) break;
    for (Eigen::Index j = 0; j <= d; ++j) {
      const Eigen::VectorXd col = column(j);
      double g = 0.0, h = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double s = sigmoid(z(i));
        g += (s - y(i)) * col(i);
        h += s * (1.0 - s) * col(i) * col(i);
      }
      g *= inv_n;
      h *= inv_n;
      if (j < d) {
        g += prob.l2() * p(j);
        h += prob.l2();
      }
      if (g == 0.0) continue;
      h = std::max(h, 1e-12);
      double t = -g / h;
      const double base = line_value(col, j, 0.0);
      bool accepted = false;
      for (int k = 0; k < 40; ++k) {
        if (line_value(col, j, t) <= base + 1e-4 * t * g) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) continue;
      p(j) += t;
      z += t * col;
    }
    if (!p.allFinite()) fail(ErrorCode::kNonFiniteObjective, "coordinate descent diverged");
  }
  res.converged = grad_norm() <= tol;
  res.params = std::move(p);
  return res;
}

}  // namespace

std::string_view to_string(HeadSolver solver) noexcept {
  switch (solver) {
    case HeadSolver::kNewtonCg: return "newton-cg";
    case HeadSolver::kLbfgs: return "lbfgs";
    case HeadSolver::kLiblinear: return "liblinear";
  }
  return "?";
}

std::optional<HeadSolver> parse_solver(std::string_view text) {
  if (text == "newton-cg" || text == "newton_cg") return HeadSolver::kNewtonCg;
  if (text == "lbfgs") return HeadSolver::kLbfgs;
  if (text == "liblinear" || text == "liblin") return HeadSolver::kLiblinear;
  return std::nullopt;
}

ObjectiveEval head_objective(std::span<const EmbeddingVector> embeddings, std::span<const int> labels,
                             double l2_strength, const Eigen::VectorXd& params) {
  if (embeddings.size() != labels.size() || embeddings.empty()) {
    fail(ErrorCode::kLengthMismatch, "embeddings and labels must be non-empty and equal length");
  }
  const Problem prob(embeddings, labels, l2_strength);
  if (params.size() != prob.dim() + 1) {
    fail(ErrorCode::kDimensionMismatch, "parameter vector must have dimension + 1 entries");
  }
  return prob.eval(params);
}

HeadModel train_head(std::span<const EmbeddingVector> embeddings, std::span<const int> labels,
                     const HeadConfig& config) {
  if (embeddings.size() != labels.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(embeddings.size()) + " embeddings vs " +
                                         std::to_string(labels.size()) + " labels");
  }
  if (embeddings.size() < 2) fail(ErrorCode::kInvalidArgument, "train_head needs at least 2 samples");
  if (config.max_iterations < 1) fail(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  if (!(config.tolerance > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) fail(ErrorCode::kBadLabel, "labels must be 0 or 1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) fail(ErrorCode::kSingleClassLabels, "both classes must be present");

  const double l2 = config.l2_strength.value_or(1.0 / static_cast<double>(embeddings.size()));
  if (!(l2 > 0.0) || !std::isfinite(l2)) fail(ErrorCode::kInvalidArgument, "l2_strength must be positive");

  const Problem prob(embeddings, labels, l2);
  if (!prob.x().allFinite()) fail(ErrorCode::kNonFiniteObjective, "embeddings contain non-finite values");
  Eigen::VectorXd start = Eigen::VectorXd::Zero(prob.dim() + 1);

  FitResult fit;
  switch (config.solver) {
    case HeadSolver::kLbfgs: fit = fit_lbfgs(prob, start, config.max_iterations, config.tolerance); break;
    case HeadSolver::kNewtonCg: fit = fit_newton_cg(prob, start, config.max_iterations, config.tolerance); break;
    case HeadSolver::kLiblinear: fit = fit_coordinate(prob, start, config.max_iterations, config.tolerance); break;
  }

  HeadModel model;
  model.weights = fit.params.head(prob.dim());
  model.bias = fit.params(prob.dim());
  model.solver = config.solver;
  model.max_iterations = config.max_iterations;
  model.l2_strength = l2;
  model.tolerance = config.tolerance;
  model.converged = fit.converged;
  model.iterations = fit.iterations;
  if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
    fail(ErrorCode::kNonFiniteObjective, "fitted parameters are not finite");
  }
  return model;
}

double predict_proba(const HeadModel& model, const EmbeddingVector& embedding) {
  if (embedding.size() != model.weights.size()) {
    fail(ErrorCode::kDimensionMismatch, "embedding has " + std::to_string(embedding.size()) +
                                            " entries, head expects " +
                                            std::to_string(model.weights.size()));
  }
  return sigmoid(model.weights.dot(embedding) + model.bias);
}

int predict(const HeadModel& model, const EmbeddingVector& embedding, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  return predict_proba(model, embedding) >= threshold ? 1 : 0;
}

void save_head(const HeadModel& model, std::ostream& out) {
  out << "head 1\n";
  out << "dimension " << model.weights.size() << "\n";
  out << "weights";
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) out << ' ' << format_double(model.weights(i));
  out << "\nbias " << format_double(model.bias) << "\n";
  out << "solver " << to_string(model.solver) << "\n";
  out << "max_iterations " << model.max_iterations << "\n";
  out << "l2_strength " << format_double(model.l2_strength) << "\n";
  out << "tolerance " << format_double(model.tolerance) << "\n";
  out << "converged " << (model.converged ? 1 : 0) << "\n";
  out << "iterations " << model.iterations << "\n";
}

HeadModel load_head(std::istream& in) {
  auto expect = [&](std::string_view key) {
    std::string got;
    if (!(in >> got) || got != key) {
      fail(ErrorCode::kBadArtifact, "head file: expected '" + std::string(key) + "'");
    }
  };
  auto number = [&]() {
    std::string token;
    if (!(in >> token)) fail(ErrorCode::kBadArtifact, "head file is truncated");
    return parse_double(token);
  };
  HeadModel m;
  expect("head");
  if (number() != 1.0) fail(ErrorCode::kBadArtifact, "unsupported head format version");
  expect("dimension");
  const auto d = static_cast<Eigen::Index>(number());
  if (d < 1) fail(ErrorCode::kBadArtifact, "head dimension must be positive");
  expect("weights");
  m.weights.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) m.weights(i) = number();
  expect("bias");
  m.bias = number();
  expect("solver");
  std::string solver;
  in >> solver;
  const auto parsed = parse_solver(solver);
  if (!parsed) fail(ErrorCode::kBadArtifact, "head file: unknown solver '" + solver + "'");
  m.solver = *parsed;
  expect("max_iterations");
  m.max_iterations = static_cast<int>(number());
  expect("l2_strength");
  m.l2_strength = number();
  expect("tolerance");
  m.tolerance = number();
  expect("converged");
  m.converged = number() != 0.0;
  expect("iterations");
  m.iterations = static_cast<int>(number());
  return m;
}

}  // namespace cclf
