#include "nlab/pleijel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlab/spectral.hpp"

namespace nlab {

namespace {

constexpr double kPi = std::numbers::pi;

double min_deficiency(const DomainMetrics& m) {
  // min(1 - r_i/r_0, 2 sqrt(gamma)/r_0); gamma = +inf makes the first
  // argument win (the sentinel is a genuine infinity, never a large float).
  const double first = 1.0 - m.r_i / m.r_0;
  if (m.gamma == kNoBoundedComplement) return first;
  return std::min(first, 2.0 * std::sqrt(m.gamma) / m.r_0);
}

}  // namespace

double fk_lower_bound(const DomainMetrics& metrics, double j) {
  if (!(metrics.r_0 > 0))
    throw std::invalid_argument("fk_lower_bound: r_0 must be positive");
  const double d = min_deficiency(metrics);
  const double base = j * j / (metrics.r_0 * metrics.r_0);
  return base * (1.0 + d * d * d / 250.0);
}

Lemma21Report verify_lemma21(const DomainGrid& grid, double tol) {
  const DirichletOperator op = assemble_dirichlet_laplacian(grid);
  // 1e-8 on the eigensolve leaves six orders of headroom below any O(h)
  // margin this check can resolve, and stays certifiable on fine grids
  // where the attainable residual floor grows with cond(A) ~ 1/(h^2 lambda_1).
  const std::vector<EigenPair> pairs = smallest_eigenpairs(op, 1, 1e-8);
  Lemma21Report rep;
  rep.lambda1 = pairs[0].lambda;
  rep.bound = fk_lower_bound(domain_metrics(grid), j0_first_zero());
  rep.margin = rep.lambda1 / rep.bound - 1.0;
  rep.pass = rep.margin >= -tol;
  return rep;
}

PleijelParams make_params(double delta, double lambda_n, double p, double j) {
  if (!(delta > 0) || !(delta < 1))
    throw std::invalid_argument("make_params: delta must lie in (0, 1)");
  if (!(lambda_n > 0))
    throw std::invalid_argument("make_params: lambda_n must be positive");
  if (!(p > 0) || !(p < 1))
    throw std::invalid_argument("make_params: p must lie in (0, 1)");
  PleijelParams params;
  params.delta = delta;
  params.p = p;
  params.j = j;
  params.rho_minus = j * (1.0 - delta) / std::sqrt(lambda_n);
  params.rho_plus = params.rho_minus / p;
  return params;
}

DomainClass classify(const DomainMetrics& m, const PleijelParams& params) {
  if (m.r_0 > params.rho_plus) return DomainClass::II;
  if (m.r_i <= (1.0 - params.delta) * m.r_0) return DomainClass::I;
  if (params.rho_minus <= m.r_i && m.r_i <= params.rho_plus)
    return DomainClass::III;
  return DomainClass::IV;
}

const char* class_name(DomainClass c) {
  switch (c) {
    case DomainClass::I: return "I";
    case DomainClass::II: return "II";
    case DomainClass::III: return "III";
    case DomainClass::IV: return "IV";
  }
  return "?";
}

VacuityReport class_iv_vacuity_check(const std::vector<ClassifiedDomain>& domains,
                                     double lambda_n, double j, double slack) {
  VacuityReport rep;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i].cls != DomainClass::IV) continue;
    const double r0 = domains[i].metrics.r_0;
    if (lambda_n * r0 * r0 >= j * j * (1.0 - slack)) {
      // Genuine nodal domain (Faber-Krahn floor met) in class IV: the
      // paper's Eq. (25) argument is violated.
      if (rep.ok) {
        rep.ok = false;
        rep.violating_domain = static_cast<int>(i);
      }
    } else {
      // Below the floor: the input was not a genuine nodal domain.
      rep.contract_violations.push_back(static_cast<int>(i));
    }
  }
  return rep;
}

BoundReport aggregate_bound(const std::vector<ClassifiedDomain>& domains,
                            double lambda_n, double omega_area, double delta,
                            double p, double j, int n) {
  BoundReport rep;
  rep.n = n;
  rep.lambda_n = lambda_n;
  for (const ClassifiedDomain& d : domains) {
    switch (d.cls) {
      case DomainClass::I: ++rep.N_I; break;
      case DomainClass::II: ++rep.N_II; break;
      case DomainClass::III: ++rep.N_III; break;
      case DomainClass::IV: ++rep.N_IV; break;
    }
  }
  rep.N = rep.N_I + rep.N_II + rep.N_III + rep.N_IV;
  rep.lhs = lambda_n * omega_area;
  const double jj_pi = j * j * kPi;
  rep.rhs_classical = jj_pi * rep.N;
  const double d3 = delta * delta * delta;
  const double q = (1.0 - delta) / p;
  rep.rhs_refined =
      jj_pi * (rep.N + d3 / 250.0 * rep.N_I + (q * q - 1.0) * rep.N_II);
  rep.rhs_merged = jj_pi * (rep.N + d3 / 250.0 * (rep.N_I + rep.N_II));
  rep.constraint_35_ok = check_constraint_35(delta, p);
  return rep;
}

bool check_constraint_35(double delta, double p) {
  const double lhs = delta * delta * delta / 250.0;
  const double q = (1.0 - delta) / p;
  return lhs <= q * q - 1.0;
}

double gain_function(double delta, double /*p*/, double j) {
  if (!(delta >= 0) || !(delta < 1))
    throw std::invalid_argument("gain_function: delta must lie in [0, 1)");
  const double d3 = delta * delta * delta;
  const double front = (2.0 / j) * (2.0 / j) * d3 / (250.0 + d3);
  const double hex = kPi / std::sqrt(12.0);
  const double q = 1.0 - delta;
  return front * (1.0 - hex / (q * q));
}

GainOptimum optimize_gain(double p, double j, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("optimize_gain: tol > 0");
  const double dmax = 1.0 - std::sqrt(kPi / std::sqrt(12.0));
  // Coarse grid at step 1e-4.
  double best_d = 0, best_g = 0;
  const double step = 1e-4;
  for (double d = step; d < dmax; d += step) {
    const double g = gain_function(d, p, j);
    if (g > best_g) {
      best_g = g;
      best_d = d;
    }
  }
  // Golden-section refinement of the bracket around the best grid point.
  double lo = std::max(0.0, best_d - step);
  double hi = std::min(dmax, best_d + step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = gain_function(x1, p, j), f2 = gain_function(x2, p, j);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = gain_function(x2, p, j);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = gain_function(x1, p, j);
    }
  }
  GainOptimum opt;
  opt.delta_star = 0.5 * (lo + hi);
  opt.gain_star = gain_function(opt.delta_star, p, j);
  if (opt.gain_star < best_g) {  // never worse than the scan grid
    opt.delta_star = best_d;
    opt.gain_star = best_g;
  }
  if (!check_constraint_35(opt.delta_star, p))
    throw std::logic_error(
        "optimize_gain: constraint (35) fails at the optimum, which "
        "contradicts its automatic fulfillment for this p");
  return opt;
}

std::vector<std::pair<double, double>> scan_gain(double p, double j,
                                                 double step) {
  if (!(step > 0)) throw std::invalid_argument("scan_gain: step > 0");
  const double dmax = 1.0 - std::sqrt(kPi / std::sqrt(12.0));
  std::vector<std::pair<double, double>> out;
  for (double d = step; d < dmax; d += step)
    out.emplace_back(d, gain_function(d, p, j));
  return out;
}

}  // namespace nlab
