#pragma once

#include <cstdint>
#include <vector>

#include "nlab/geometry.hpp"
#include "nlab/spectral.hpp"

namespace nlab {

struct NodalDomain {
  int label = 0;  // 1-based, row-major order of first cell
  int sign = 0;   // +1 or -1
  std::int64_t cell_count = 0;
  std::array<int, 4> bbox{};  // {imin, imax, jmin, jmax} in grid coordinates
  DomainMetrics metrics;
};

struct NodalDecomposition {
  std::vector<NodalDomain> domains;
  std::vector<std::int32_t> labels;  // row-major over the grid, 0 = none
  std::int64_t zero_cells = 0;  // interior cells below the zero threshold
  int count() const { return static_cast<int>(domains.size()); }
};

// Sign-partitions the field into 4-connected domains. Cells with
// |f| <= zero_tol * max|f| belong to no domain; neighbors connect only when
// both exceed the threshold with equal sign. Throws std::invalid_argument
// if every interior cell is below threshold.
NodalDecomposition extract_nodal_domains(const DomainGrid& grid,
                                         const std::vector<double>& field,
                                         double zero_tol = 1e-9);

NodalDecomposition extract_nodal_domains(const DomainGrid& grid,
                                         const DirichletOperator& op,
                                         const EigenPair& pair,
                                         double zero_tol = 1e-9);

// One row of a Pleijel sequence: mu(n) = N(u_n) and the ratio N/n.
struct PleijelEntry {
  int n = 0;
  double lambda = 0;
  int count = 0;
  double ratio = 0;
};

struct SkippedMode {  // member of a degenerate cluster: count ill-defined
  int n = 0;
  double lambda = 0;
};

struct PleijelSequence {
  std::vector<PleijelEntry> entries;
  std::vector<SkippedMode> skipped;
};

struct PleijelOptions {
  double zero_tol = 1e-9;
  double solver_tol = 1e-10;
  double cluster_rel_gap = 1e-8;
  EigOptions eig;
};

// Solves the first n_max modes on the grid (with a small buffer so the
// degeneracy cluster containing n_max is complete), extracts nodal counts
// for every mode whose eigenvalue is discretely simple, and skips clustered
// modes. Enforces Courant: 1 <= N <= n, throwing std::logic_error otherwise.
PleijelSequence pleijel_sequence(const DomainGrid& grid, int n_max,
                                 const PleijelOptions& opts = {});

// Closed-form sequence for the rectangle (0,a) x (0,b): mode (m, n) has
// exactly m*n nodal domains. Intended for rectangles with b^2/a^2
// irrational (simple spectrum); ties are still enumerated deterministically
// by (lambda, m, n) and never skipped.
PleijelSequence rectangle_pleijel_sequence(double a, double b, int n_max);

}  // namespace nlab
