#include "nchns/linear_solvers.hpp"

#include <cmath>
#include <vector>

#include "nchns/error.hpp"

namespace nchns {

namespace {

using Vec = Eigen::Map<const Eigen::VectorXd>;

Vec view(const ScalarField& f) { return Vec(f.values.data(), static_cast<Eigen::Index>(f.values.size())); }

ScalarField to_field(const Grid2D& g, const Eigen::VectorXd& x) {
  ScalarField r(g);
  for (Eigen::Index k = 0; k < x.size(); ++k) r.values[static_cast<std::size_t>(k)] = x[k];
  return r;
}

void check_finite(const Eigen::VectorXd& x, const char* who) {
  if (!x.allFinite()) throw SolverFailure(std::string(who) + ": non-finite solution");
}

}  // namespace

SparseMatrix neg_laplacian_matrix(const Grid2D& g) {
  const double ax = 1.0 / (g.dx() * g.dx());
  const double ay = 1.0 / (g.dy() * g.dy());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(5 * g.ncells());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto r = static_cast<int>(g.cell(i, j));
      double diag = 0.0;
      auto link = [&](int ii, int jj, double a) {
        t.emplace_back(r, static_cast<int>(g.cell(ii, jj)), -a);
        diag += a;
      };
      if (i > 0) link(i - 1, j, ax);
      if (i < g.nx - 1) link(i + 1, j, ax);
      if (j > 0) link(i, j - 1, ay);
      if (j < g.ny - 1) link(i, j + 1, ay);
      t.emplace_back(r, r, diag);
    }
  const auto n = static_cast<Eigen::Index>(g.ncells());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

NeumannPoissonSolver::NeumannPoissonSolver(const Grid2D& g) : grid_(g), a_(neg_laplacian_matrix(g)) {
  // Pin with a weight comparable to the diagonal to keep the factor well scaled.
  a_.coeffRef(0, 0) += 2.0 / (g.dx() * g.dx()) + 2.0 / (g.dy() * g.dy());
  chol_.compute(a_);
  if (chol_.info() != Eigen::Success) throw SolverFailure("pressure factorization failed");
}

ScalarField NeumannPoissonSolver::solve(const ScalarField& b) const {
  require_same_grid(grid_, b.grid, "NeumannPoissonSolver::solve");
  Eigen::VectorXd x = chol_.solve(view(b));
  check_finite(x, "pressure solve");
  return to_field(grid_, x);
}

ShiftedNeumannSolver::ShiftedNeumannSolver(const Grid2D& g, double dt)
    : grid_(g), dt_(dt), neg_l_(neg_laplacian_matrix(g)) {
  if (!(dt > 0.0)) throw Error("ShiftedNeumannSolver: dt must be positive");
  a_ = dt_ * neg_l_;
  for (Eigen::Index k = 0; k < a_.rows(); ++k) a_.coeffRef(k, k) += 1.0;
  chol_.analyzePattern(a_);
}

void ShiftedNeumannSolver::factorize(const ScalarField& d) {
  require_same_grid(grid_, d.grid, "ShiftedNeumannSolver::factorize");
  a_ = dt_ * neg_l_;
  for (Eigen::Index k = 0; k < a_.rows(); ++k) {
    const double dk = d.values[static_cast<std::size_t>(k)];
    if (!(dk > 0.0)) throw HypothesisViolation("shifted Neumann operator: diagonal must be positive");
    a_.coeffRef(k, k) += dk;
  }
  chol_.factorize(a_);
  if (chol_.info() != Eigen::Success) throw SolverFailure("shifted Neumann factorization failed");
  factored_ = true;
}

ScalarField ShiftedNeumannSolver::solve(const ScalarField& b) const {
  require_same_grid(grid_, b.grid, "ShiftedNeumannSolver::solve");
  if (!factored_) throw SolverFailure("shifted Neumann solve before factorization");
  Eigen::VectorXd x = chol_.solve(view(b));
  check_finite(x, "shifted Neumann solve");
  return to_field(grid_, x);
}

ScalarField ShiftedNeumannSolver::apply(const ScalarField& x) const {
  Eigen::VectorXd y = a_ * view(x);
  return to_field(grid_, y);
}

}  // namespace nchns
