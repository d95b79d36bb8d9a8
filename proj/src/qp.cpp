#include "noir/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace noir {

namespace {

constexpr double kDependenceTol = 1e-12;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// One pinned constraint: an inequality row held at its bound or an equality
// (sign normalized so additions always step forward).
struct ActiveEntry {
  bool is_eq = false;
  int row = 0;
  double sign = 1.0;  // equalities only
  double mu = 0.0;    // multiplier; >= 0 for inequalities
};

}  // namespace

void QpProblem::validate() const {
  const Eigen::Index n = H.rows();
  if (H.cols() != n || g.size() != n) fail(ErrorCode::DimensionMismatch, "cost dimensions");
  if (G.rows() != h.size() || (G.rows() > 0 && G.cols() != n)) {
    fail(ErrorCode::DimensionMismatch, "inequality dimensions");
  }
  if (E.rows() != f.size() || (E.rows() > 0 && E.cols() != n)) {
    fail(ErrorCode::DimensionMismatch, "equality dimensions");
  }
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    fail(ErrorCode::InvalidState, "cost matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo < 1e-10 * hi) {
    fail(ErrorCode::IllConditioned, "smallest eigenvalue " + std::to_string(lo) +
                                        " against largest " + std::to_string(hi));
  }
}

const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::Optimal: return "Optimal";
    case QpStatus::Infeasible: return "Infeasible";
    case QpStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

double KktResiduals::max() const { return std::max({stationarity, primal, complementarity}); }

KktResiduals check_kkt(const QpProblem& p, const Vector& z, const Vector& lambda,
                       const Vector& nu) {
  if (z.size() != p.H.rows() || lambda.size() != p.G.rows() || nu.size() != p.E.rows()) {
    fail(ErrorCode::DimensionMismatch, "kkt triple does not match the problem");
  }
  KktResiduals res;
  Vector grad = p.H * z + p.g;
  if (p.G.rows() > 0) grad += p.G.transpose() * lambda;
  if (p.E.rows() > 0) grad += p.E.transpose() * nu;
  res.stationarity = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;

  double primal = 0.0;
  if (p.G.rows() > 0) primal = std::max(primal, (p.G * z - p.h).maxCoeff());
  if (p.E.rows() > 0) primal = std::max(primal, (p.E * z - p.f).cwiseAbs().maxCoeff());
  res.primal = std::max(0.0, primal);

  if (p.G.rows() > 0) {
    res.complementarity = (lambda.array() * (p.G * z - p.h).array()).abs().maxCoeff();
  }
  return res;
}

namespace {

class ActiveSetSolver {
 public:
  ActiveSetSolver(const QpProblem& p, const QpOptions& opt)
      : p_(p), opt_(opt), llt_(p.H), z_(-llt_.solve(p.g)) {}

  QpSolution run() {
    const int m = static_cast<int>(p_.G.rows());
    const int meq = static_cast<int>(p_.E.rows());
    const int cap = opt_.max_iter > 0 ? opt_.max_iter : 100 + 10 * (p_.n() + m + meq);
    const double tol = opt_.tol > 0 ? opt_.tol : 1e-7;
    const double feas_tol = tol / 10.0;

    // Equalities are pinned first and never released.
    for (int j = 0; j < meq; ++j) {
      if (!add_constraint(ActiveEntry{true, j, 1.0, 0.0}, feas_tol, cap)) return finish(tol);
    }

    while (iterations_ < cap) {
      const int next = pick_violated(feas_tol);
      if (next < 0) break;  // feasible and stationary: done
      if (!add_constraint(ActiveEntry{false, next, 1.0, 0.0}, feas_tol, cap)) return finish(tol);
    }
    return finish(tol);
  }

 private:
  Vector normal(const ActiveEntry& a) const {
    if (a.is_eq) return a.sign * p_.E.row(a.row).transpose();
    return -p_.G.row(a.row).transpose();
  }

  double target(const ActiveEntry& a) const {
    return a.is_eq ? a.sign * p_.f[a.row] : -p_.h[a.row];
  }

  double slack(const ActiveEntry& a) const { return normal(a).dot(z_) - target(a); }

  // Most violated inequality; warm-start rows win when violated at all, and
  // ties fall to the lowest row index.
  int pick_violated(double feas_tol) const {
    for (int row : opt_.warm_start) {
      if (row < 0 || row >= p_.G.rows() || is_active(row)) continue;
      if (p_.G.row(row).dot(z_) - p_.h[row] > feas_tol) return row;
    }
    int best = -1;
    double worst = feas_tol;
    for (int row = 0; row < p_.G.rows(); ++row) {
      if (is_active(row)) continue;
      const double v = p_.G.row(row).dot(z_) - p_.h[row];
      if (v > worst) {
        worst = v;
        best = row;
      }
    }
    return best;
  }

  bool is_active(int row) const {
    for (const ActiveEntry& a : active_) {
      if (!a.is_eq && a.row == row) return true;
    }
    return false;
  }

  // Adds one constraint, taking dual steps and dropping blockers as needed.
  // Returns false when the constraint proves the problem infeasible.
  bool add_constraint(ActiveEntry entry, double feas_tol, int cap) {
    if (entry.is_eq && slack(entry) > 0.0) entry.sign = -1.0;  // step direction forward

    while (iterations_ < cap) {
      ++iterations_;
      const Vector n_plus = normal(entry);
      const double s = slack(entry);

      const Eigen::Index q = static_cast<Eigen::Index>(active_.size());
      Matrix big_n(p_.n(), q);
      for (Eigen::Index a = 0; a < q; ++a) big_n.col(a) = normal(active_[static_cast<std::size_t>(a)]);

      Vector hn = llt_.solve(n_plus);
      Vector r = Vector::Zero(q);
      Vector pz = hn;
      if (q > 0) {
        Matrix k = llt_.solve(big_n);
        r = (big_n.transpose() * k).ldlt().solve(big_n.transpose() * hn);
        pz -= k * r;
      }
      const double denom = n_plus.dot(pz);
      const double scale = std::max(1.0, std::abs(n_plus.dot(hn)));
      const bool dependent = !(denom > kDependenceTol * scale);

      if (dependent && entry.mu == 0.0 && std::abs(s) <= feas_tol) {
        // redundant row: its normal lies in the span of constraints that are
        // never dropped before it would be (equalities pin first), so the
        // bound stays satisfied without pinning it
        return true;
      }

      // full step drives the new constraint's slack to zero
      const double t1 = dependent ? kInfinity : -s / denom;

      // dual step: first active inequality whose multiplier would cross zero
      double t2 = kInfinity;
      int blocker = -1;
      for (Eigen::Index a = 0; a < q; ++a) {
        const ActiveEntry& b = active_[static_cast<std::size_t>(a)];
        if (b.is_eq || r[a] <= kDependenceTol) continue;
        const double t = b.mu / r[a];
        if (t < t2) {
          t2 = t;
          blocker = static_cast<int>(a);
        }
      }

      if (t1 == kInfinity && t2 == kInfinity) {
        record_certificate(entry);
        return false;  // no primal progress and no dual relief: infeasible
      }

      const double t = std::min(t1, t2);
      z_ += t * pz;
      for (Eigen::Index a = 0; a < q; ++a) active_[static_cast<std::size_t>(a)].mu -= t * r[a];
      entry.mu += t;

      if (t1 <= t2) {
        active_.push_back(entry);
        return true;
      }
      active_.erase(active_.begin() + blocker);
    }
    return true;  // iteration cap: surfaced via finish()
  }

  void record_certificate(const ActiveEntry& entry) {
    infeasible_ = true;
    for (const ActiveEntry& a : active_) {
      (a.is_eq ? certificate_.eq_rows : certificate_.ineq_rows).push_back(a.row);
    }
    (entry.is_eq ? certificate_.eq_rows : certificate_.ineq_rows).push_back(entry.row);
    std::sort(certificate_.ineq_rows.begin(), certificate_.ineq_rows.end());
    std::sort(certificate_.eq_rows.begin(), certificate_.eq_rows.end());
  }

  QpSolution finish(double tol) {
    QpSolution sol;
    sol.iterations = iterations_;
    sol.z = z_;
    sol.lambda = Vector::Zero(p_.G.rows());
    sol.nu = Vector::Zero(p_.E.rows());
    for (const ActiveEntry& a : active_) {
      if (a.is_eq) {
        sol.nu[a.row] = -a.sign * a.mu;
      } else {
        sol.lambda[a.row] = a.mu;
        sol.active_set.push_back(a.row);
      }
    }
    std::sort(sol.active_set.begin(), sol.active_set.end());
    sol.objective = 0.5 * z_.dot(p_.H * z_) + p_.g.dot(z_);
    sol.kkt = check_kkt(p_, sol.z, sol.lambda, sol.nu);

    if (infeasible_) {
      sol.status = QpStatus::Infeasible;
      sol.certificate = certificate_;
    } else if (sol.kkt.max() <= tol) {
      sol.status = QpStatus::Optimal;
    } else {
      sol.status = QpStatus::IterationLimit;
    }
    return sol;
  }

  const QpProblem& p_;
  const QpOptions& opt_;
  Eigen::LLT<Matrix> llt_;
  Vector z_;
  std::vector<ActiveEntry> active_;
  bool infeasible_ = false;
  InfeasibilityCertificate certificate_;
  int iterations_ = 0;
};

}  // namespace

QpSolution solve(const QpProblem& p, const QpOptions& options) {
  p.validate();
  ActiveSetSolver solver(p, options);
  return solver.run();
}

}  // namespace noir
