#include "nlab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlab/util.hpp"

namespace nlab {

NodalDecomposition extract_nodal_domains(const DomainGrid& grid,
                                         const std::vector<double>& field,
                                         double zero_tol) {
  if (field.size() != grid.mask.size())
    throw std::invalid_argument("extract_nodal_domains: field size mismatch");
  double maxabs = 0;
  for (std::size_t k = 0; k < field.size(); ++k)
    if (grid.mask[k]) maxabs = std::max(maxabs, std::abs(field[k]));
  if (!(maxabs > 0))
    throw std::invalid_argument(
        "extract_nodal_domains: field vanishes on the domain");
  const double thr = zero_tol * maxabs;

  // Signed mask: +1/-1 above the zero threshold, 0 for nodal-set cells.
  std::vector<std::int8_t> sgn(field.size(), 0);
  std::int64_t zero_cells = 0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (!grid.mask[k]) continue;
    if (field[k] > thr)
      sgn[k] = 1;
    else if (field[k] < -thr)
      sgn[k] = -1;
    else
      ++zero_cells;
  }
  if (zero_cells == static_cast<std::int64_t>(grid.interior_count()))
    throw std::invalid_argument(
        "extract_nodal_domains: every interior cell is below zero_tol");

  // One flood fill where neighbors connect only with equal nonzero sign;
  // labels are assigned in row-major order of each domain's first cell.
  NodalDecomposition nd;
  nd.zero_cells = zero_cells;
  nd.labels.assign(field.size(), 0);
  std::vector<std::int64_t> stack;
  const int rows = grid.rows, cols = grid.cols;
  for (std::int64_t start = 0; start < static_cast<std::int64_t>(sgn.size());
       ++start) {
    if (sgn[start] == 0 || nd.labels[static_cast<std::size_t>(start)]) continue;
    NodalDomain dom;
    dom.label = nd.count() + 1;
    dom.sign = sgn[start];
    dom.bbox = {rows, -1, cols, -1};
    stack.assign(1, start);
    nd.labels[static_cast<std::size_t>(start)] = dom.label;
    while (!stack.empty()) {
      const std::int64_t k = stack.back();
      stack.pop_back();
      ++dom.cell_count;
      const int i = static_cast<int>(k / cols), j = static_cast<int>(k % cols);
      dom.bbox[0] = std::min(dom.bbox[0], i);
      dom.bbox[1] = std::max(dom.bbox[1], i);
      dom.bbox[2] = std::min(dom.bbox[2], j);
      dom.bbox[3] = std::max(dom.bbox[3], j);
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int d = 0; d < 4; ++d) {
        if (ni[d] < 0 || ni[d] >= rows || nj[d] < 0 || nj[d] >= cols) continue;
        const std::int64_t nk = static_cast<std::int64_t>(ni[d]) * cols + nj[d];
        if (sgn[static_cast<std::size_t>(nk)] == dom.sign &&
            !nd.labels[static_cast<std::size_t>(nk)]) {
          nd.labels[static_cast<std::size_t>(nk)] = dom.label;
          stack.push_back(nk);
        }
      }
    }
    nd.domains.push_back(dom);
  }

  // Per-domain geometry; slots are pre-sized so the parallel fill is
  // order-independent.
  parallel_for(0, nd.count(), [&](std::int64_t d) {
    NodalDomain& dom = nd.domains[static_cast<std::size_t>(d)];
    dom.metrics = component_metrics(grid, nd.labels, dom.label, dom.bbox);
  });
  return nd;
}

NodalDecomposition extract_nodal_domains(const DomainGrid& grid,
                                         const DirichletOperator& op,
                                         const EigenPair& pair,
                                         double zero_tol) {
  return extract_nodal_domains(grid, scatter_to_grid(op, pair.vector),
                               zero_tol);
}

PleijelSequence pleijel_sequence(const DomainGrid& grid, int n_max,
                                 const PleijelOptions& opts) {
  if (n_max < 1) throw std::invalid_argument("pleijel_sequence: n_max >= 1");
  const DirichletOperator op = assemble_dirichlet_laplacian(grid);
  // Small buffer so the degeneracy cluster containing n_max is complete.
  const int k = static_cast<int>(
      std::min<std::int64_t>(op.dim(), static_cast<std::int64_t>(n_max) + 8));
  const std::vector<EigenPair> pairs =
      smallest_eigenpairs(op, k, opts.solver_tol, opts.eig);
  std::vector<double> lambdas(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) lambdas[i] = pairs[i].lambda;
  const std::vector<int> cluster =
      degenerate_clusters(lambdas, opts.cluster_rel_gap);
  std::vector<int> cluster_size(cluster.empty() ? 0 : cluster.back() + 1, 0);
  for (int c : cluster) ++cluster_size[static_cast<std::size_t>(c)];

  PleijelSequence seq;
  const int n_have = std::min(n_max, k);
  // Pre-sized slots: counts are extracted in parallel, then packed in order.
  std::vector<int> counts(static_cast<std::size_t>(n_have), -1);
  parallel_for(0, n_have, [&](std::int64_t i) {
    if (cluster_size[static_cast<std::size_t>(cluster[static_cast<std::size_t>(
            i)])] > 1)
      return;  // degenerate: nodal count is basis-dependent, skip
    const NodalDecomposition nd = extract_nodal_domains(
        grid, op, pairs[static_cast<std::size_t>(i)], opts.zero_tol);
    counts[static_cast<std::size_t>(i)] = nd.count();
  });
  for (int i = 0; i < n_have; ++i) {
    const int n = i + 1;
    const double lambda = pairs[static_cast<std::size_t>(i)].lambda;
    if (counts[static_cast<std::size_t>(i)] < 0) {
      seq.skipped.push_back({n, lambda});
      continue;
    }
    const int N = counts[static_cast<std::size_t>(i)];
    if (N < 1 || N > n)
      throw std::logic_error("pleijel_sequence: Courant violation at n=" +
                             std::to_string(n) + " (N=" + std::to_string(N) +
                             ")");
    seq.entries.push_back({n, lambda, N, static_cast<double>(N) / n});
  }
  return seq;
}

PleijelSequence rectangle_pleijel_sequence(double a, double b, int n_max) {
  // Fetch a tie-scanning buffer beyond n_max: Courant bounds N by the LAST
  // index of an exact tie group (within a degenerate eigenspace only the max
  // index is guaranteed).
  const std::vector<RectangleMode> modes =
      rectangle_spectrum(a, b, n_max + 32);
  PleijelSequence seq;
  seq.entries.reserve(static_cast<std::size_t>(n_max));
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_max); ++i) {
    const int n = static_cast<int>(i) + 1;
    const int N = modes[i].m * modes[i].n;
    std::size_t tie_end = i;
    while (tie_end + 1 < modes.size() &&
           modes[tie_end + 1].lambda == modes[i].lambda)
      ++tie_end;
    // A tie still open at the buffer's edge cannot be bounded honestly;
    // only then is the assertion skipped.
    if (N < 1 ||
        (tie_end + 1 < modes.size() && N > static_cast<int>(tie_end) + 1))
      throw std::logic_error(
          "rectangle_pleijel_sequence: Courant violation at n=" +
          std::to_string(n));
    seq.entries.push_back({n, modes[i].lambda, N, static_cast<double>(N) / n});
  }
  return seq;
}

}  // namespace nlab
