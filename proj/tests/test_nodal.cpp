// Nodal module: sign-partition of eigenfunctions into 4-connected domains,
// the solved Pleijel sequence with degenerate-mode skipping, and the
// closed-form rectangle sequence.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "nlab/geometry.hpp"
#include "nlab/nodal.hpp"
#include "nlab/spectral.hpp"

using namespace nlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> product_field(const DomainGrid& g, int m, int n) {
  std::vector<double> f(static_cast<std::size_t>(g.rows) * g.cols, 0.0);
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j)
      if (g.inside(i, j))
        f[g.idx(i, j)] = std::sin(m * kPi * g.x(j)) * std::sin(n * kPi * g.y(i));
  return f;
}
}  // namespace

TEST_CASE("product field splits into the m x n checkerboard") {
  // [DERIVED] sin(3 pi x) sin(2 pi y) has exactly 3*2 nodal rectangles;
  // its zero lines x = k/3, y = 1/2 fall on grid nodes at h = 1/48.
  const double h = 1.0 / 48;
  DomainGrid g = rasterize(Shape::parse("square"), h);
  NodalDecomposition nd = extract_nodal_domains(g, product_field(g, 3, 2));

  REQUIRE(nd.count() == 6);
  CHECK(nd.zero_cells > 0);  // the zero lines themselves

  // Labels are row-major by first cell: bottom row of blocks first.
  // sin(3 pi x) sin(2 pi y) is + / - / + on the bottom, mirrored on top.
  std::vector<int> want_sign = {+1, -1, +1, -1, +1, -1};
  for (int d = 0; d < 6; ++d) {
    CHECK(nd.domains[d].label == d + 1);
    CHECK(nd.domains[d].sign == want_sign[d]);
  }

  // Each block is a (1/3) x (1/2) rectangle.
  for (const NodalDomain& dom : nd.domains) {
    CHECK(std::abs(dom.metrics.area - 1.0 / 6) <= 3 * h);
    CHECK(std::abs(dom.metrics.r_i - 1.0 / 6) <= 2 * h);
    CHECK(dom.metrics.gamma == kNoBoundedComplement);
    CHECK(dom.cell_count > 0);
  }

  // Labels buffer is consistent with the domain list.
  std::vector<std::int64_t> tally(7, 0);
  for (std::int32_t l : nd.labels) {
    REQUIRE(l >= 0);
    REQUIRE(l <= 6);
    ++tally[l];
  }
  for (int d = 0; d < 6; ++d) CHECK(tally[d + 1] == nd.domains[d].cell_count);
}

TEST_CASE("degenerate input is rejected") {
  DomainGrid g = rasterize(Shape::parse("square"), 1.0 / 16);
  std::vector<double> zeros(static_cast<std::size_t>(g.rows) * g.cols, 0.0);
  CHECK_THROWS_AS(extract_nodal_domains(g, zeros), std::invalid_argument);
  // zero_tol >= 1 pushes every cell below the threshold.
  CHECK_THROWS_AS(extract_nodal_domains(g, product_field(g, 2, 2), 1.0),
                  std::invalid_argument);
}

TEST_CASE("eigenfunction overload: first and (2,2) square modes") {
  const double h = 1.0 / 24;
  DomainGrid g = rasterize(Shape::parse("square"), h);
  DirichletOperator op = assemble_dirichlet_laplacian(g);
  auto pairs = smallest_eigenpairs(op, 4, 1e-11);

  // [PAPER] the ground state has one nodal domain.
  NodalDecomposition first = extract_nodal_domains(g, op, pairs[0]);
  CHECK(first.count() == 1);
  CHECK(first.domains[0].sign == +1);

  // [DERIVED] rank 4 is the discretely simple (2,2) mode: 4 quadrants,
  // checkerboard signs, row-major labels.
  NodalDecomposition quad = extract_nodal_domains(g, op, pairs[3]);
  REQUIRE(quad.count() == 4);
  CHECK(quad.domains[0].sign == +quad.domains[3].sign);
  CHECK(quad.domains[1].sign == +quad.domains[2].sign);
  CHECK(quad.domains[0].sign == -quad.domains[1].sign);
  for (const NodalDomain& dom : quad.domains)
    CHECK(std::abs(dom.metrics.area - 0.25) <= 3 * h);
}

TEST_CASE("solved Pleijel sequence skips degenerate pairs") {
  const double h = 1.0 / 24;
  DomainGrid g = rasterize(Shape::parse("square"), h);
  PleijelSequence seq = pleijel_sequence(g, 8);

  // [DERIVED] square spectrum multiplicities: n = 1 (simple), 2-3 pair,
  // 4 simple (2,2), 5-6 pair (1,3), 7-8 pair (2,3).
  std::set<int> extracted, skipped;
  for (const auto& e : seq.entries) extracted.insert(e.n);
  for (const auto& s : seq.skipped) skipped.insert(s.n);
  CHECK(extracted == std::set<int>{1, 4});
  CHECK(skipped == std::set<int>{2, 3, 5, 6, 7, 8});

  for (const auto& e : seq.entries) {
    CHECK(e.count >= 1);        // Courant lower
    CHECK(e.count <= e.n);      // Courant upper
    CHECK(e.ratio == doctest::Approx(double(e.count) / e.n));
  }
  // [DERIVED] N(1) = 1 and N(4) = 4 for the square.
  CHECK(seq.entries[0].count == 1);
  CHECK(seq.entries[1].count == 4);
  // Skipped modes carry their eigenvalue (here ~5 pi^2 for n = 2).
  CHECK(seq.skipped[0].lambda ==
        doctest::Approx(5 * kPi * kPi).epsilon(1e-2));
}

namespace {
struct BruteMode {
  double lambda;
  int m, n;
  bool operator<(const BruteMode& o) const {
    if (lambda != o.lambda) return lambda < o.lambda;
    if (m != o.m) return m < o.m;
    return n < o.n;
  }
};

// Independent enumeration of the rectangle spectrum and counts. The lambda
// expression deliberately mirrors the library's factored form
// (pi^2/a^2) m^2 + (pi^2/b^2) n^2: modes that tie analytically (same
// m^2 + 2 n^2 for b = 1/sqrt(2)) are separated only at the last ulp, so the
// position of each mode in the sorted sequence depends on how the rounding
// fell, and an oracle using a different parenthesization would break those
// near-ties in a different order.
std::vector<BruteMode> brute_rectangle(double a, double b, int count) {
  std::vector<BruteMode> all;
  const double lmax_guess = 4 * kPi * count / (a * b) * 2 + 100;  // Weyl + slack
  const int mmax = static_cast<int>(a * std::sqrt(lmax_guess) / kPi) + 2;
  const int nmax = static_cast<int>(b * std::sqrt(lmax_guess) / kPi) + 2;
  const double pa = kPi * kPi / (a * a);
  const double pb = kPi * kPi / (b * b);
  for (int m = 1; m <= mmax; ++m)
    for (int n = 1; n <= nmax; ++n)
      all.push_back({pa * m * m + pb * n * n, m, n});
  std::sort(all.begin(), all.end());
  REQUIRE(all.size() >= static_cast<std::size_t>(count));
  all.resize(count);
  return all;
}
}  // namespace

TEST_CASE("closed-form rectangle Pleijel sequence vs brute enumeration") {
  const double a = 1.0, b = 1.0 / std::sqrt(2.0);
  const int n_max = 2000;
  PleijelSequence seq = rectangle_pleijel_sequence(a, b, n_max);
  REQUIRE(seq.entries.size() == static_cast<std::size_t>(n_max));
  CHECK(seq.skipped.empty());

  // [DERIVED] entry-by-entry agreement with the independent enumeration.
  auto brute = brute_rectangle(a, b, n_max);
  for (int i = 0; i < n_max; ++i) {
    CHECK(seq.entries[i].n == i + 1);
    CHECK(seq.entries[i].lambda ==
          doctest::Approx(brute[i].lambda).epsilon(1e-13));
    CHECK(seq.entries[i].count == brute[i].m * brute[i].n);
    CHECK(seq.entries[i].ratio ==
          double(seq.entries[i].count) / seq.entries[i].n);
  }

  // [DERIVED] first eight counts, from lambda/pi^2 = m^2 + 2 n^2:
  // 3, 6, 9, 11, 12, 17, 18, 19 -> (1,1),(2,1),(1,2),(3,1),(2,2),(3,2),(4,1),(1,3).
  std::vector<int> first8;
  for (int i = 0; i < 8; ++i) first8.push_back(seq.entries[i].count);
  CHECK(first8 == std::vector<int>{1, 2, 2, 3, 4, 6, 4, 3});

  // [DERIVED] frozen landmarks of this sequence (independent enumeration
  // with the same last-ulp tie order as above): max ratio over [1000, 2000]
  // is 31/47 = 682/1034 at n = 1034; the window [500, 560] peaks at 336/503;
  // the last ratio above (2/j)^2 = 0.6916... is at n = 169.
  double tail_max = 0, win_max = 0;
  int last_violation = 0;
  const double two_over_j_sq = 0.6916602761225797;
  for (const auto& e : seq.entries) {
    if (e.n >= 1000) tail_max = std::max(tail_max, e.ratio);
    if (e.n >= 500 && e.n <= 560) win_max = std::max(win_max, e.ratio);
    if (e.ratio > two_over_j_sq) last_violation = e.n;
  }
  CHECK(tail_max == doctest::Approx(31.0 / 47).epsilon(1e-15));
  CHECK(tail_max == doctest::Approx(0.65957446808510634).epsilon(1e-15));
  CHECK(win_max == doctest::Approx(336.0 / 503).epsilon(1e-15));
  CHECK(last_violation == 169);
}

TEST_CASE("rectangle sequence tolerates spectral ties") {
  // The unit square has heavy multiplicities; the closed-form walk must
  // enumerate ties deterministically and keep Courant per tie group.
  PleijelSequence seq = rectangle_pleijel_sequence(1.0, 1.0, 60);
  REQUIRE(seq.entries.size() == 60);
  // (1,2) at position 2 and (2,1) at position 3 both have N = 2.
  CHECK(seq.entries[1].count == 2);
  CHECK(seq.entries[2].count == 2);
  // The 50 pi^2 tie {(1,7),(5,5),(7,1)} contributes an N = 25 entry.
  bool saw_25 = false;
  for (const auto& e : seq.entries)
    if (e.count == 25) saw_25 = true;
  CHECK(saw_25);
}
