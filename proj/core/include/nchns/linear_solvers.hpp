#pragma once

// Sparse direct solvers for the Neumann Laplacian family. Each operator is
// factorized once and then applied as an exact linear map (no iteration
// tolerance), so the tangent and adjoint passes see the same matrix inverse
// as the forward pass.

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "nchns/grid.hpp"

namespace nchns {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// -L as a sparse matrix, L the 5-point Neumann Laplacian of laplacian_neumann.
SparseMatrix neg_laplacian_matrix(const Grid2D& g);

/// Solves -L x = b for compatible b (sum b = 0). The constant null space is
/// removed by pinning x[0]; for compatible b this gives an exact solution.
class NeumannPoissonSolver {
 public:
  explicit NeumannPoissonSolver(const Grid2D& g);

  ScalarField solve(const ScalarField& b) const;
  const Grid2D& grid() const { return grid_; }

 private:
  Grid2D grid_;
  SparseMatrix a_;
  Eigen::SimplicialLDLT<SparseMatrix> chol_;
};

/// Solves (diag(d) - dt L) x = b with d > 0. The diagonal may be refreshed
/// (refactorize) without redoing the symbolic analysis.
class ShiftedNeumannSolver {
 public:
  ShiftedNeumannSolver(const Grid2D& g, double dt);

  void factorize(const ScalarField& d);
  ScalarField solve(const ScalarField& b) const;
  /// (diag(d) - dt L) x
  ScalarField apply(const ScalarField& x) const;
  const Grid2D& grid() const { return grid_; }

 private:
  Grid2D grid_;
  double dt_;
  SparseMatrix neg_l_;
  SparseMatrix a_;
  Eigen::SimplicialLLT<SparseMatrix> chol_;
  bool factored_ = false;
};

}  // namespace nchns
