// Acceptance suite. Each numbered criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failures. Criteria 5 and 8 share
// one large eigensolve on the unit square.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "nlab/geometry.hpp"
#include "nlab/nodal.hpp"
#include "nlab/packing.hpp"
#include "nlab/pleijel.hpp"
#include "nlab/spectral.hpp"

using namespace nlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// Discrete 5-point eigenvalue of the unit square, h = 1/M.
double discrete_square_lambda(int m, int n, double h) {
  auto s = [&](int k) {
    double v = std::sin(k * kPi * h / 2);
    return v * v;
  };
  return 4.0 / (h * h) * (s(m) + s(n));
}

// --- criterion 1: the optimizer reproduces the improved constant ----------

GainOptimum criterion_1(double j) {
  const double p = kBlindRatio;
  auto t0 = std::chrono::steady_clock::now();
  GainOptimum opt{};
  try {
    opt = optimize_gain(p, j, 1e-12);
  } catch (const std::exception& e) {
    report(1, false, fmt("optimize_gain threw: %s", e.what()));
    return opt;
  }
  double elapsed = seconds_since(t0);

  // Independent 1e-5 grid scan of the gain function.
  double scan_best = 0, scan_arg = 0;
  for (double d = 1e-5; d < 0.0477; d += 1e-5) {
    double g = gain_function(d, p, j);
    if (g > scan_best) {
      scan_best = g;
      scan_arg = d;
    }
  }

  bool exponent_ok = opt.gain_star * 1e9 >= 3.0 && opt.gain_star * 1e9 < 4.0;
  bool delta_ok = opt.delta_star > 0.03 && opt.delta_star < 0.04;
  bool scan_ok = opt.gain_star >= scan_best - 1e-20 &&
                 std::abs(opt.delta_star - scan_arg) <= 1e-4;
  bool constraint_ok = check_constraint_35(opt.delta_star, p);
  bool time_ok = elapsed < 1.0;
  report(1,
         exponent_ok && delta_ok && scan_ok && constraint_ok && time_ok,
         fmt("optimizer: gain* = %.6e at delta* = %.8f (scan oracle %.8f), "
             "constraint(35) %s, %.3f s",
             opt.gain_star, opt.delta_star, scan_arg,
             constraint_ok ? "ok" : "VIOLATED", elapsed));
  return opt;
}

// --- criterion 2: classical constant fundamentals -------------------------

void criterion_2(double j) {
  const double classical = (2.0 / j) * (2.0 / j);
  bool digits_ok = std::floor(classical * 1000.0) == 691.0;
  bool zero_ok = std::abs(bessel_j0(j)) <= 1e-12;
  bool j_ok = std::floor(j * 10000.0) == 24048.0;
  report(2, digits_ok && zero_ok && j_ok,
         fmt("classical constant (2/j)^2 = %.17g, j = %.17g, |J0(j)| = %.2e",
             classical, j, std::abs(bessel_j0(j))));
}

// --- criterion 3: Faber-Krahn saturation and lower bound ------------------

void criterion_3(double j) {
  bool all_ok = true;
  std::string detail;

  // Disc at h = 1/200: lambda_1 -> j^2 within 1e-2 relative.
  {
    DomainGrid g = rasterize(Shape::parse("disc:1"), 1.0 / 200);
    DirichletOperator op = assemble_dirichlet_laplacian(g);
    double l1 = smallest_eigenpairs(op, 1, 1e-9)[0].lambda;
    double rel = std::abs(l1 - j * j) / (j * j);
    all_ok = all_ok && rel <= 1e-2;
    detail += fmt("disc lambda_1 = %.6f vs j^2 = %.6f (rel %.1e); ", l1,
                  j * j, rel);
  }

  // lambda_1 * area >= pi j^2 (1 - 5e-2) across the shape suite.
  const char* shapes[] = {"square", "rectangle:2,1", "rectangle:3,1",
                          "annulus:0.5,1",
                          "disc-with-holes:1;0.3,0.2,0.08;-0.4,-0.1,0.15"};
  const double floor_fk = kPi * j * j * (1 - 5e-2);
  for (const char* s : shapes) {
    DomainGrid g = rasterize(Shape::parse(s), 1.0 / 128);
    DirichletOperator op = assemble_dirichlet_laplacian(g);
    double l1 = smallest_eigenpairs(op, 1, 1e-9)[0].lambda;
    double product = l1 * g.area();
    if (!(product >= floor_fk)) {
      all_ok = false;
      detail += fmt("%s: lambda_1*area = %.4f < %.4f; ", s, product, floor_fk);
    }
  }
  report(3, all_ok,
         detail + fmt("all lambda_1*area >= pi j^2 (1-5e-2) = %.4f",
                      floor_fk));
}

// --- criterion 4: Lemma 2.1 on three domains -------------------------------

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  const double h = 1.0 / 128;
  Lemma21Report disc = verify_lemma21(rasterize(Shape::parse("disc:1"), h), 1e-2);
  Lemma21Report ann =
      verify_lemma21(rasterize(Shape::parse("annulus:0.5,1"), h), 1e-2);
  Lemma21Report rect =
      verify_lemma21(rasterize(Shape::parse("rectangle:2,0.5"), h), 1e-2);
  double elapsed = seconds_since(t0);

  bool ok = disc.pass && disc.margin >= -1e-2 && ann.margin > 1e-2 &&
            rect.margin > 1e-2 && elapsed < 120.0;
  report(4, ok,
         fmt("Lemma 2.1 margins: disc %+.4f, annulus %+.4f, "
             "rectangle(2,0.5) %+.4f, %.1f s",
             disc.margin, ann.margin, rect.margin, elapsed));
}

// --- criteria 5 and 8: one solve of the square at h = 1/256 ----------------

struct SquareSolve {
  DomainGrid grid;
  DirichletOperator op;
  std::vector<EigenPair> pairs;
  std::vector<int> clusters;
};

SquareSolve solve_square(int k) {
  SquareSolve s{rasterize(Shape::parse("square"), 1.0 / 256), {}, {}, {}};
  s.op = assemble_dirichlet_laplacian(s.grid);
  s.pairs = smallest_eigenpairs(s.op, k, 1e-10);
  std::vector<double> lam;
  for (const auto& p : s.pairs) lam.push_back(p.lambda);
  s.clusters = degenerate_clusters(lam, 1e-8);
  return s;
}

bool is_simple(const SquareSolve& s, int rank0) {
  int c = s.clusters[rank0];
  int size = 0;
  for (int v : s.clusters) size += (v == c);
  return size == 1;
}

void criterion_5(const SquareSolve& s) {
  const double h = 1.0 / 256;
  const double zero_tol = 1e-6;
  int checked = 0, mismatches = 0;
  std::string bad;
  for (int m = 1; m <= 10; ++m)
    for (int n = 1; n <= 10; ++n) {
      const double lam = discrete_square_lambda(m, n, h);
      int rank0 = -1;
      for (std::size_t r = 0; r < s.pairs.size(); ++r)
        if (std::abs(s.pairs[r].lambda - lam) <= 1e-9 * lam) {
          rank0 = static_cast<int>(r);
          break;
        }
      if (rank0 < 0 || !is_simple(s, rank0)) continue;  // degenerate mode
      ++checked;
      NodalDecomposition nd =
          extract_nodal_domains(s.grid, s.op, s.pairs[rank0], zero_tol);
      if (nd.count() != m * n) {
        ++mismatches;
        bad += fmt("(%d,%d): N = %d != %d; ", m, n, nd.count(), m * n);
      }
    }
  // Off-diagonal discrete modes are exactly degenerate, so the
  // non-degenerate set is the diagonal: all ten must be found and exact.
  bool ok = checked == 10 && mismatches == 0;
  report(5, ok,
         fmt("nodal counts on the square (h = 1/256): %d non-degenerate "
             "modes with m,n <= 10 checked, %d mismatches%s%s",
             checked, mismatches, bad.empty() ? "" : ": ", bad.c_str()));
}

void criterion_8(const SquareSolve& s, double delta_star, double j) {
  const double p = kBlindRatio;
  const double zero_tol = 1e-6;
  const double slack = 5e-2;
  int solved = 0, iv_violations = 0, bound_violations = 0, contract_slivers = 0;
  double worst_ratio = 2.0;  // min over modes of lhs / rhs_refined
  std::string bad;
  for (int n = 1; n <= 200 && n <= static_cast<int>(s.pairs.size()); ++n) {
    if (!is_simple(s, n - 1)) continue;
    ++solved;
    const EigenPair& pair = s.pairs[n - 1];
    NodalDecomposition nd = extract_nodal_domains(s.grid, s.op, pair, zero_tol);
    PleijelParams params = make_params(delta_star, pair.lambda, p, j);
    std::vector<ClassifiedDomain> doms;
    for (const NodalDomain& d : nd.domains)
      doms.push_back({d.metrics, classify(d.metrics, params)});

    VacuityReport vac = class_iv_vacuity_check(doms, pair.lambda, j, slack);
    contract_slivers += static_cast<int>(vac.contract_violations.size());
    if (!vac.ok) {
      ++iv_violations;
      bad += fmt("n=%d: genuine class-IV domain %d; ", n, vac.violating_domain);
    }

    BoundReport rep =
        aggregate_bound(doms, pair.lambda, s.grid.area(), delta_star, p, j, n);
    worst_ratio = std::min(worst_ratio, rep.lhs / rep.rhs_refined);
    if (!(rep.lhs >= rep.rhs_refined * (1 - slack)) || !rep.constraint_35_ok) {
      ++bound_violations;
      bad += fmt("n=%d: lhs %.3f < rhs %.3f (1-slack); ", n, rep.lhs,
                 rep.rhs_refined);
    }
  }
  bool ok = solved > 0 && iv_violations == 0 && bound_violations == 0;
  report(8, ok,
         fmt("class partition across %d simple square modes, n <= 200: "
             "%d genuine class-IV, %d Eq.(31) violations at 5e-2 slack "
             "(min lhs/rhs = %.4f, %d sub-floor slivers reported)%s%s",
             solved, iv_violations, bound_violations, worst_ratio,
             contract_slivers, bad.empty() ? "" : ": ", bad.c_str()));
}

// --- criterion 6: rectangle Pleijel ratios to n = 1e5 ----------------------

void criterion_6(double j) {
  const double two_over_pi = 2.0 / kPi;
  const double classical = (2.0 / j) * (2.0 / j);
  PleijelSequence seq;
  try {
    seq = rectangle_pleijel_sequence(1.0, 1.0 / std::sqrt(2.0), 100000);
  } catch (const std::exception& e) {
    report(6, false, fmt("sequence construction threw: %s", e.what()));
    return;
  }

  double tail_max = 0;
  int tail_arg = 0, courant_violations = 0;
  bool exceeded_classical = false;
  for (const auto& e : seq.entries) {
    if (e.count > e.n) ++courant_violations;
    if (e.n >= 1000) {
      if (e.ratio > tail_max) {
        tail_max = e.ratio;
        tail_arg = e.n;
      }
      if (e.ratio > classical) exceeded_classical = true;
    }
  }
  // The tail ceiling sits ~0.023 above 2/pi (the limsup along the
  // maximizing subsequence), inside a 0.03 absolute band around it.
  bool band_ok = std::abs(tail_max - two_over_pi) <= 0.03;
  bool ok = seq.entries.size() == 100000 && band_ok && !exceeded_classical &&
            courant_violations == 0;
  report(6, ok,
         fmt("rectangle (1, 1/sqrt 2) to n = 1e5: tail max N/n = %.17g at "
             "n = %d (2/pi = %.4f, |diff| = %.4f), %s (2/j)^2, "
             "%d Courant violations",
             tail_max, tail_arg, two_over_pi, std::abs(tail_max - two_over_pi),
             exceeded_classical ? "EXCEEDS" : "never exceeds",
             courant_violations));
}

// --- criterion 7: Weyl ratio at n = 2000 -----------------------------------

void criterion_7() {
  const double a = 1.0, b = 1.0 / std::sqrt(2.0);
  auto modes = rectangle_spectrum(a, b, 2000);
  std::vector<double> lam;
  for (const auto& m : modes) lam.push_back(m.lambda);
  double r2000 = weyl_ratios(lam, a * b)[1999];
  bool ok = r2000 >= 0.94 && r2000 <= 1.06;
  report(7, ok,
         fmt("Weyl ratio lambda_n |Omega| / (4 pi n) at n = 2000: %.6f",
             r2000));
}

// --- criterion 9: packing density bounds -----------------------------------

void criterion_9() {
  const double hex_target = kPi / std::sqrt(12.0);

  DiscPacking hex = hexagonal_lattice(6, 5, 0.37);
  double hex_density = packing_density(hex);
  bool hex_ok = std::abs(hex_density - hex_target) <= 1e-12;

  int bound_failures = 0, hypothesis_failures = 0;
  double max_density = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    DiscPacking pk =
        greedy_pack(Torus{20, 20}, RadiiLaw{0.75, 1.0}, 20000, seed);
    BlindReport rep = blind_bound_check(pk);
    if (!rep.hypothesis_met) ++hypothesis_failures;
    if (!rep.bound_respected) ++bound_failures;
    max_density = std::max(max_density, rep.density);
  }
  bool ok = hex_ok && bound_failures == 0 && hypothesis_failures == 0;
  report(9, ok,
         fmt("hex lattice density %.17g (target %.17g, |diff| %.1e); "
             "100 greedy packings ratio >= 0.75: max density %.5f, "
             "%d above pi/sqrt(12)+1e-9",
             hex_density, hex_target, std::abs(hex_density - hex_target),
             bound_failures));
}

}  // namespace

// Runs one criterion; an escaped exception becomes its FAIL line so the
// remaining criteria still execute.
template <class F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, fmt("unhandled exception: %s", e.what()));
  }
}

int main() {
  std::printf("acceptance: quantitative nodal-domain laboratory\n");
  auto t0 = std::chrono::steady_clock::now();

  const double j = j0_first_zero();
  GainOptimum opt{};
  guarded(1, [&] { opt = criterion_1(j); });
  if (!(opt.delta_star > 0 && opt.delta_star < 1))
    opt.delta_star = 0.036;  // keep criterion 8 runnable after a failure
  guarded(2, [&] { criterion_2(j); });
  guarded(3, [&] { criterion_3(j); });
  guarded(4, [&] { criterion_4(); });

  bool solved = false;
  SquareSolve shared;
  try {
    shared = solve_square(212);
    solved = true;
  } catch (const std::exception& e) {
    report(5, false, fmt("shared square solve failed: %s", e.what()));
  }
  if (solved) guarded(5, [&] { criterion_5(shared); });
  guarded(6, [&] { criterion_6(j); });
  guarded(7, [&] { criterion_7(); });
  if (solved)
    guarded(8, [&] { criterion_8(shared, opt.delta_star, j); });
  else
    report(8, false, "shared square solve failed (see criterion 5)");
  guarded(9, [&] { criterion_9(); });

  std::printf("%d of 9 criteria passed (%.1f s total)\n", 9 - g_failures,
              seconds_since(t0));
  return g_failures;
}
