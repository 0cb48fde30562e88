#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlab/geometry.hpp"

namespace nlab {

// 5-point Dirichlet Laplacian on the interior cells of a grid. The matrix is
// symmetric positive definite: 4/h^2 on the diagonal, -1/h^2 for each
// interior 4-neighbor; exterior neighbors simply drop out (homogeneous
// Dirichlet data).
struct DirichletOperator {
  Eigen::SparseMatrix<double> matrix;
  std::vector<std::int64_t> cell_of_dof;  // dof -> row-major cell index
  std::vector<std::int64_t> dof_of_cell;  // cell -> dof or -1
  int rows = 0, cols = 0;
  double h = 0;
  Eigen::Index dim() const { return matrix.rows(); }
};

DirichletOperator assemble_dirichlet_laplacian(const DomainGrid& grid);

struct EigenPair {
  double lambda = 0;
  Eigen::VectorXd vector;  // normalized so h^2 * sum v_i^2 = 1
  int index = 0;           // 1-based rank, ascending eigenvalue
};

struct EigOptions {
  // Dense solve below this dimension, shift-invert block Lanczos above.
  int dense_cutoff = 1000;
  // Cap on the Lanczos basis size; 0 = automatic (min(n, 5k/2 + 140)).
  int max_basis = 0;
  std::uint64_t seed = 0x6e6c6162u;  // start-block RNG ("nlab")
  // Consecutive eigenvalues closer than this (relatively) are reported as
  // one degenerate cluster by degenerate_clusters().
  double cluster_rel_gap = 1e-8;
};

// Raised when the iteration cannot certify k pairs at the requested
// tolerance within its basis budget; carries the worst relative residual.
class EigenSolveError : public std::runtime_error {
 public:
  EigenSolveError(const std::string& what, double worst_rel_residual)
      : std::runtime_error(what), worst_rel_residual_(worst_rel_residual) {}
  double worst_rel_residual() const { return worst_rel_residual_; }

 private:
  double worst_rel_residual_ = 0;
};

// k smallest eigenpairs, ascending. Every returned pair satisfies the
// verified residual bound ||A v - lambda v|| <= tol * lambda * ||v||
// (checked explicitly after the solve, for the dense path too). Eigenvector
// sign: the first interior cell (row-major) with magnitude above
// 1e-12 * max|v| is positive.
std::vector<EigenPair> smallest_eigenpairs(const DirichletOperator& op, int k,
                                           double tol = 1e-9,
                                           const EigOptions& opts = {});

// Cluster id (0-based, ascending) per eigenvalue; consecutive values with
// relative gap < rel_gap share a cluster. Pairs whose cluster has size > 1
// are "degenerate" for nodal-count purposes.
std::vector<int> degenerate_clusters(const std::vector<double>& lambdas,
                                     double rel_gap = 1e-8);

// Embeds a dof vector into the full rows*cols grid (zero outside).
std::vector<double> scatter_to_grid(const DirichletOperator& op,
                                    const Eigen::VectorXd& v);

// --- Bessel ------------------------------------------------------------------

// J0 via its power series for x <= 8 and composite 20-point Gauss-Legendre
// panels on (1/pi) * int_0^pi cos(x sin t) dt beyond. Absolute error below
// 1e-12 for 0 <= x <= 50. Negative arguments use J0(-x) = J0(x).
double bessel_j0(double x);

// First positive zero of J0 (bisection to machine precision, |J0| <= 1e-12
// at the result). Computed, never hardcoded.
double j0_first_zero();

// --- Closed-form rectangle spectrum ------------------------------------------

struct RectangleMode {
  int m = 0, n = 0;   // half-wave counts, both >= 1
  double lambda = 0;  // pi^2 (m^2/a^2 + n^2/b^2)
};

// k smallest Dirichlet eigenvalues of (0,a) x (0,b), ties ordered by (m, n).
std::vector<RectangleMode> rectangle_spectrum(double a, double b, int k);

// Weyl ratios r_n = lambda_n * area / (4 pi n), n = 1..size().
std::vector<double> weyl_ratios(const std::vector<double>& lambdas,
                                double area);

}  // namespace nlab
