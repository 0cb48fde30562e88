#pragma once

#include <vector>

#include "nlab/geometry.hpp"

namespace nlab {

// Thresholds of the class partition: rho_minus = j(1-delta)/sqrt(lambda_n),
// rho_plus = rho_minus / p.
struct PleijelParams {
  double delta = 0;
  double p = 0;
  double j = 0;
  double rho_minus = 0;
  double rho_plus = 0;
};

enum class DomainClass { I, II, III, IV };

struct ClassifiedDomain {
  DomainMetrics metrics;
  DomainClass cls = DomainClass::III;
};

struct BoundReport {
  int n = 0;
  double lambda_n = 0;
  int N = 0, N_I = 0, N_II = 0, N_III = 0, N_IV = 0;
  double lhs = 0;            // lambda_n * |Omega|
  double rhs_classical = 0;  // j^2 pi N
  double rhs_refined = 0;    // j^2 pi {N + delta^3 N_I/250 + (((1-delta)/p)^2 - 1) N_II}
  double rhs_merged = 0;     // j^2 pi {N + (delta^3/250)(N_I + N_II)}; valid iff constraint holds
  bool constraint_35_ok = false;
};

// Quantitative Faber-Krahn lower bound:
//   (j^2/r_0^2) * [1 + (1/250) * min(1 - r_i/r_0, 2 sqrt(gamma)/r_0)^3].
// gamma = +inf (simply connected) makes the first argument win. The disc
// eigenvalue of equal area is the closed form j^2/r_0^2, never a nested
// solve.
double fk_lower_bound(const DomainMetrics& metrics, double j);

struct Lemma21Report {
  double lambda1 = 0;
  double bound = 0;
  double margin = 0;  // lambda1/bound - 1
  bool pass = false;  // margin >= -tol
};

// Solves lambda_1 on the grid, evaluates fk_lower_bound on the grid's
// metrics, and reports the relative margin; tol absorbs discretization only.
Lemma21Report verify_lemma21(const DomainGrid& grid, double tol);

// Throws std::invalid_argument unless 0 < delta < 1 and lambda_n > 0.
PleijelParams make_params(double delta, double lambda_n, double p, double j);

// Exactly one class, evaluated in the fixed order:
//   II iff r_0 > rho_plus; else I iff r_i <= (1-delta) r_0;
//   else III iff rho_minus <= r_i <= rho_plus (boundaries inclusive);
//   else IV.
DomainClass classify(const DomainMetrics& metrics, const PleijelParams& params);

const char* class_name(DomainClass c);

struct VacuityReport {
  bool ok = true;               // no genuine domain landed in class IV
  int violating_domain = -1;    // index of the first genuine class-IV domain
  // Class-IV domains below the Faber-Krahn floor lambda_n r_0^2 >= j^2(1-slack):
  // these violate the input contract (not genuine nodal domains), and are
  // reported rather than counted as failures.
  std::vector<int> contract_violations;
};

VacuityReport class_iv_vacuity_check(const std::vector<ClassifiedDomain>& domains,
                                     double lambda_n, double j,
                                     double slack = 5e-2);

// Both sides of Eq. (31) plus the merged Eq. (36) form. `n` is carried
// through for reporting and does not affect the arithmetic.
BoundReport aggregate_bound(const std::vector<ClassifiedDomain>& domains,
                            double lambda_n, double omega_area, double delta,
                            double p, double j, int n = 0);

// delta^3/250 <= ((1-delta)/p)^2 - 1, evaluated literally.
bool check_constraint_35(double delta, double p);

// (2/j)^2 * delta^3/(250 + delta^3) * (1 - (pi/sqrt(12)) / (1-delta)^2).
// Requires 0 <= delta < 1.
double gain_function(double delta, double p, double j);

struct GainOptimum {
  double delta_star = 0;
  double gain_star = 0;
};

// Grid scan over (0, 1 - sqrt(pi/sqrt(12))) at step 1e-4, then golden-section
// refinement to width tol. Throws std::logic_error if constraint (35) fails
// at the optimum (the paper notes it is automatically fulfilled).
GainOptimum optimize_gain(double p, double j, double tol);

// (delta, gain) samples at the given step, for the CSV scan dump.
std::vector<std::pair<double, double>> scan_gain(double p, double j,
                                                 double step = 1e-4);

}  // namespace nlab
