#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "voxcell/system.hpp"

namespace voxcell {

enum class Preconditioner { kNone, kJacobi };

const char* to_string(Preconditioner p) noexcept;
Preconditioner parse_preconditioner(const std::string& s);

struct SolverConfig {
  double rel_tolerance = 1e-10;
  std::size_t max_iterations = 20000;
  Preconditioner preconditioner = Preconditioner::kJacobi;
  /// Record the quadratic energy 1/2 x^T A x - b^T x after every iteration.
  bool track_energy = false;

  void validate() const;
};

struct SolverReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  Preconditioner preconditioner = Preconditioner::kJacobi;
  std::vector<double> energy;  ///< empty unless tracked
};

struct SolveResult {
  Eigen::VectorXd solution;
  SolverReport report;
};

/// Preconditioned conjugate gradients. Non-convergence is reported, never
/// thrown; a non-finite iterate throws DivergenceError.
SolveResult solve_cg(const LinearOperator& op, const Eigen::VectorXd& rhs, const SolverConfig& cfg,
                     const Eigen::VectorXd* initial_guess = nullptr);

/// Dense direct solve with a rank check. With least_squares the minimum-norm
/// least-squares solution is returned for rank-deficient input instead of
/// throwing RankError.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                            bool least_squares = false);

}  // namespace voxcell
