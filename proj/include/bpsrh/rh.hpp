#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpsrh/bps.hpp"
#include "bpsrh/torus.hpp"

namespace bpsrh {

// Riemann-Hilbert data of a finite, integral, uncoupled structure: the
// structure together with a constant term that evaluates to 1 on every
// active class. Build through make_rh_solution; the evaluation routines
// rely on the flags it certifies.
struct RhSolution {
  BpsStructure structure;
  std::vector<Complex> xi_coords;  // untwisted coordinates, see TorusPoint
  ClassificationFlags flags;

  TorusPoint xi() const { return TorusPoint{&structure, xi_coords}; }
};

// Checks the classification (finite, integral, uncoupled), refuses supports
// above 10^4 classes, and verifies eval(xi, gamma) == 1 exactly on every
// active class. Without explicit coordinates a quadratic refinement with
// value 1 on the active classes is computed by solving a GF(2) system for
// +-1 coordinates; for uncoupled structures that system is always solvable.
RhSolution make_rh_solution(
    const BpsStructure& s,
    const std::optional<std::vector<Complex>>& xi_coords = std::nullopt);

// Half-plane conventions, decided by exact sign tests on the stored doubles:
// t lies in H_r when Re(t / r) > 0, and Z lies in i H_r when Z is strictly
// anticlockwise of r by less than a half turn. A central charge on the ray
// r itself makes the ray active (ActiveRay); one on the opposite boundary
// ray -r is excluded from the products with a warning (set BPSRH_LOG).

// sum of Omega(gamma) <beta,gamma> log Lambda(Z(gamma) / (2 pi i t)) over
// the active classes with Z(gamma) in i H_r: the branch of log Psi that
// tends to 0 as t -> 0 in H_r. For such classes the Lambda argument never
// meets the closed negative reals.
Complex log_psi(const RhSolution& sol, Complex r, const Charge& beta,
                Complex t);

// Psi_{r,beta}(t) = exp(log_psi). Identically 1 when beta pairs to zero
// with every active class.
Complex solve_psi(const RhSolution& sol, Complex r, const Charge& beta,
                  Complex t);

// Phi_{r,beta}(t) = exp(-Z(beta)/t) * Psi_{r,beta}(t) * eval(xi, beta).
Complex solve_phi(const RhSolution& sol, Complex r, const Charge& beta,
                  Complex t);

// Relative discrepancy of the wall-crossing relation across the active ray
// l: Phi at the anticlockwise perturbation r- is compared against Phi at
// the clockwise perturbation r+ times prod (1 - Phi_gamma)^{Omega <beta,gamma>}
// over the active classes on l. The perturbation angle is min(0.1, half the
// angular gap to the neighbouring active rays). Requires t in both perturbed
// half-planes and |Phi_gamma(t)| < 1 for every class on l. Membership on l
// is exact; when the wall direction is not representable as a Complex (the
// central charge of a composite class usually rounds), pass the Ray instead,
// whose integer key carries the exact direction.
double verify_jump(const RhSolution& sol, Complex l, const Charge& beta,
                   Complex t);
double verify_jump(const RhSolution& sol, const Ray& wall, const Charge& beta,
                   Complex t);

struct LimitReport {
  std::vector<double> limit_gaps;  // |exp(Z(beta)/t) Phi(t) - xi(beta)|
  bool gaps_monotone = false;      // non-increasing along t_to_zero
  std::vector<double> growth_abs;  // |Psi(t)| along t_to_infinity
  double growth_exponent = 0.0;    // slope of log|Psi| against log|t|
};

// Checks the constant-term limit along t_to_zero and fits the polynomial
// growth exponent along t_to_infinity by least squares. The gaps are
// computed as |xi(beta)| |Psi(t) - 1|, which equals the reported quantity
// but stays finite when exp(Z(beta)/t) overflows. Both sequences must stay
// inside H_r.
LimitReport verify_limits(const RhSolution& sol, Complex r, const Charge& beta,
                          const std::vector<Complex>& t_to_zero,
                          const std::vector<Complex>& t_to_infinity);

// Tau function of a family of structures sharing the lattice, the form and
// the invariants while the central charge varies. The base structure fixes
// the reference central charge; evaluations take explicit values for the
// basis classes and inherit everything else.
struct TauEvaluator {
  BpsStructure base;
  Complex ray;
  ClassificationFlags flags;
};

// Same admission checks as make_rh_solution.
TauEvaluator make_tau_evaluator(const BpsStructure& base, Complex ray);

// log tau = sum of Omega(gamma) log Upsilon(Z(gamma) / (2 pi i t)) over the
// active classes with Z(gamma) in i H_r, at the structure with central
// charge z_params. Invariant under rescaling z_params and t simultaneously.
Complex log_tau(const TauEvaluator& te, const std::vector<Complex>& z_params,
                Complex t);
Complex tau_eval(const TauEvaluator& te, const std::vector<Complex>& z_params,
                 Complex t);

// Max over basis directions gamma_i of
//   |(1/2 pi i) d/dt log Psi_{gamma_i} - sum_j <gamma_j, gamma_i> d/dz_j log tau|
// with central differences of relative step h. Directions pairing to zero
// with the whole basis are vacuous and skipped; when every direction is
// vacuous the form is degenerate and the residual is undefined.
double tau_pde_residual(const TauEvaluator& te,
                        const std::vector<Complex>& z_params, Complex t,
                        double h);

// Coefficient of (2 pi i t)^{2g-2} in the small-t expansion of log tau at
// the base central charge: sum over all stored classes of
// Omega(gamma) B_{2g} / (4g (2g-2)) Z(gamma)^{2-2g}. 2 <= g <= 25.
Complex tau_asymptotic_coeff(const TauEvaluator& te, int g);

// Coefficient of the log term in the same expansion: (1/24) sum of Omega
// over all stored classes, exact.
Rational tau_log_coefficient(const TauEvaluator& te);

// One curve class of a degenerate Gromov-Witten input: position parameter v
// with Im v > 0 and its genus-zero count.
struct GvEntry {
  Complex v;
  std::int64_t gv0 = 0;
};

// Coefficients of lambda^{2g-2} for g = 2..g_max in the degenerate series:
//   chi (-1)^{g-1} B_{2g} B_{2g-2} / (4g (2g-2) (2g-2)!)
//   + sum_beta gv0(beta) (-1)^{g-1} B_{2g} / (2g (2g-2)!) Li_{3-2g}(e^{2 pi i v_beta}).
// 2 <= g_max <= 12.
std::vector<Complex> gw_degenerate_series(std::int64_t chi,
                                          const std::vector<GvEntry>& gv,
                                          int g_max);

// The constant-map part of the g-th coefficient alone, exact.
Rational gw_constant_map_coeff(std::int64_t chi, int g);

// sum_{|k| <= k_max} (z - k)^{2-2g} plus the midpoint tail corrections
// (k_max + 1/2 -+ z)^{3-2g} / (2g-3), leaving an error of order
// k_max^{1-2g}. Requires Im z > 0 and 2 <= g <= 25.
Complex lattice_sum_partial(int g, Complex z, std::int64_t k_max);

}  // namespace bpsrh
