#include "voxcell/solver.hpp"

#include <cmath>

#include "voxcell/error.hpp"

namespace voxcell {

const char* to_string(Preconditioner p) noexcept {
  return p == Preconditioner::kJacobi ? "jacobi" : "none";
}

Preconditioner parse_preconditioner(const std::string& s) {
  if (s == "jacobi") return Preconditioner::kJacobi;
  if (s == "none") return Preconditioner::kNone;
  throw Error("unknown preconditioner '" + s + "' (expected none|jacobi)");
}

void SolverConfig::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0)) {
    throw Error("solver rel_tolerance must lie in (0, 1)");
  }
  if (max_iterations < 1) throw Error("solver max_iterations must be at least 1");
}

SolveResult solve_cg(const LinearOperator& op, const Eigen::VectorXd& rhs, const SolverConfig& cfg,
                     const Eigen::VectorXd* initial_guess) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(op.size());
  if (rhs.size() != n) throw Error("right-hand side does not match the operator size");
  if (!rhs.allFinite()) throw Error("right-hand side contains non-finite values");

  SolveResult out;
  out.report.preconditioner = cfg.preconditioner;
  Eigen::VectorXd& x = out.solution;
  x = initial_guess ? *initial_guess : Eigen::VectorXd::Zero(n);
  if (x.size() != n) throw Error("initial guess does not match the operator size");

  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    x.setZero();
    out.report.converged = true;
    return out;
  }

  Eigen::VectorXd inv_diag;
  if (cfg.preconditioner == Preconditioner::kJacobi) {
    inv_diag = op.diagonal();
    for (Eigen::Index i = 0; i < n; ++i) {
      inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;
    }
  }
  auto precondition = [&](const Eigen::VectorXd& r, Eigen::VectorXd& z) {
    if (inv_diag.size() > 0) {
      z = inv_diag.cwiseProduct(r);
    } else {
      z = r;
    }
  };
  auto energy = [&](const Eigen::VectorXd& r) { return -0.5 * rhs.dot(x) - 0.5 * x.dot(r); };

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd q(n);
  if (initial_guess) {
    op.apply({x.data(), static_cast<std::size_t>(n)}, {q.data(), static_cast<std::size_t>(n)});
    r -= q;
  }
  Eigen::VectorXd z(n), d(n);
  precondition(r, z);
  d = z;
  double rz = r.dot(z);
  double rel = r.norm() / bnorm;
  if (cfg.track_energy) out.report.energy.push_back(energy(r));

  std::size_t it = 0;
  while (rel > cfg.rel_tolerance && it < cfg.max_iterations) {
    op.apply({d.data(), static_cast<std::size_t>(n)}, {q.data(), static_cast<std::size_t>(n)});
    const double dq = d.dot(q);
    ++it;
    if (!std::isfinite(dq)) throw DivergenceError(it);
    if (dq <= 0.0) break;  // Operator not positive along d: no further progress possible.
    const double alpha = rz / dq;
    x.noalias() += alpha * d;
    r.noalias() -= alpha * q;
    rel = r.norm() / bnorm;
    if (!std::isfinite(rel)) throw DivergenceError(it);
    if (cfg.track_energy) out.report.energy.push_back(energy(r));
    precondition(r, z);
    const double rz_new = r.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }
  out.report.iterations = it;
  out.report.relative_residual = rel;
  out.report.converged = rel <= cfg.rel_tolerance;
  return out;
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                            bool least_squares) {
  if (A.rows() != A.cols()) throw Error("dense solve requires a square matrix");
  if (rhs.size() != A.rows()) throw Error("right-hand side does not match the matrix size");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  // Relative rank threshold: loose enough to flag exactly singular input,
  // strict enough to accept ill-conditioned but regular matrices.
  qr.setThreshold(1e3 * Eigen::NumTraits<double>::epsilon() * static_cast<double>(A.rows()));
  const auto rank = static_cast<std::size_t>(qr.rank());
  if (rank < static_cast<std::size_t>(A.rows())) {
    if (!least_squares) throw RankError(rank, static_cast<std::size_t>(A.rows()));
    return A.completeOrthogonalDecomposition().solve(rhs);
  }
  return qr.solve(rhs);
}

}  // namespace voxcell
