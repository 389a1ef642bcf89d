#include "bpsrh/rh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bpsrh/errors.hpp"
#include "bpsrh/special.hpp"

namespace bpsrh {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kMaxSupport = 10000;

void warn(const std::string& msg) {
  const char* flag = std::getenv("BPSRH_LOG");
  if (flag != nullptr && *flag != '\0' && std::string(flag) != "0")
    std::fprintf(stderr, "bpsrh: %s\n", msg.c_str());
}

Complex ipow(Complex base, std::int64_t e) {
  if (e < 0) {
    base = Complex(1.0) / base;
    e = -e;
  }
  Complex acc(1.0);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::int64_t integer_value(const Rational& v) {
  return v.get_num().get_si();
}

void check_certified(const ClassificationFlags& f) {
  if (!f.finite) fail(Errc::domain_violation, "structure not certified finite");
  if (!f.integral)
    fail(Errc::not_integral, "structure not certified integral");
  if (!f.uncoupled)
    fail(Errc::not_uncoupled, "structure not certified uncoupled");
}

// Size guard first: classify is quadratic in the support, so oversized
// supports are rejected before it runs.
ClassificationFlags admit(const BpsStructure& s) {
  if (s.omega.size() > kMaxSupport)
    fail(Errc::out_of_range,
         "support of size " + std::to_string(s.omega.size()) +
             " exceeds " + std::to_string(kMaxSupport) + " classes");
  ClassificationFlags f = classify(s);
  if (!f.finite) fail(Errc::domain_violation, "support must be finite");
  if (!f.integral)
    fail(Errc::not_integral, "invariants must be integers");
  if (!f.uncoupled)
    fail(Errc::not_uncoupled,
         "active classes must pair to zero with each other");
  return f;
}

ExactComplex ray_direction(Complex r) {
  ExactComplex rd = ExactComplex::from(r);
  if (rd.is_zero()) fail(Errc::domain_violation, "ray direction is zero");
  return rd;
}

void check_half_plane(const ExactComplex& rd, Complex t) {
  if (dot_sign(rd, ExactComplex::from(t)) <= 0)
    fail(Errc::outside_half_plane, "t is not in the half-plane of the ray");
}

// Membership of Z in i H_r: +1 strictly inside, -1 strictly outside, with
// the boundary cases resolved here once and for all. Z on r itself makes
// the ray active; Z on -r sits on the closed boundary and is dropped from
// the products.
int upper_membership(const BpsStructure& s, const ExactComplex& rd,
                     const Charge& g) {
  ExactComplex z = s.z_exact(g);
  int cs = cross_sign(rd, z);
  if (cs != 0) return cs;
  if (dot_sign(rd, z) > 0)
    fail(Errc::active_ray, "active central charge lies on the ray");
  warn("central charge on the boundary of i H_r; factor excluded");
  return -1;
}

Complex log_psi_raw(const BpsStructure& s, Complex r, const Charge& beta,
                    Complex t) {
  if (static_cast<int>(beta.size()) != s.rank)
    fail(Errc::domain_violation, "class size != rank");
  ExactComplex rd = ray_direction(r);
  check_half_plane(rd, t);
  const Complex denom = Complex(0.0, 2.0 * kPi) * t;
  Complex acc(0.0);
  for (const auto& [g, om] : s.omega) {
    if (upper_membership(s, rd, g) < 0) continue;
    std::int64_t pairing = s.pair(beta, g);
    if (pairing == 0) continue;
    double expo = to_double(om) * static_cast<double>(pairing);
    acc += expo * log_lambda(s.zc(g) / denom);
  }
  return acc;
}

Complex log_tau_raw(const BpsStructure& s, Complex r, Complex t) {
  ExactComplex rd = ray_direction(r);
  check_half_plane(rd, t);
  const Complex denom = Complex(0.0, 2.0 * kPi) * t;
  Complex acc(0.0);
  for (const auto& [g, om] : s.omega) {
    if (upper_membership(s, rd, g) < 0) continue;
    acc += to_double(om) * log_upsilon(s.zc(g) / denom);
  }
  return acc;
}

// Coordinates of a quadratic refinement that is 1 on every active class:
// flipping the i-th coordinate to -1 multiplies eval on gamma by
// (-1)^{gamma_i}, so the requirement is a linear system over GF(2) with one
// equation per active class whose canonical refinement sign is -1.
std::vector<Complex> default_xi(const BpsStructure& s) {
  const int n = s.rank;
  TorusPoint base = quadratic_refinement(s);
  std::vector<std::vector<int>> rows;
  for (const auto& [g, om] : s.omega) {
    std::vector<int> row(n + 1, 0);
    for (int i = 0; i < n; ++i) row[i] = static_cast<int>(g[i] & 1);
    row[n] = eval_twisted(base, g).real() < 0.0 ? 1 : 0;
    rows.push_back(std::move(row));
  }

  std::vector<int> pivot_of_row;
  std::size_t filled = 0;
  for (int col = 0; col < n && filled < rows.size(); ++col) {
    std::size_t sel = filled;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[filled], rows[sel]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == filled || rows[k][col] == 0) continue;
      for (int j = col; j <= n; ++j) rows[k][j] ^= rows[filled][j];
    }
    pivot_of_row.push_back(col);
    ++filled;
  }
  for (std::size_t k = filled; k < rows.size(); ++k)
    if (rows[k][n] != 0)
      fail(Errc::domain_violation,
           "no constant term equal to 1 on all active classes");

  std::vector<Complex> coords(n, Complex(1.0));
  for (std::size_t k = 0; k < filled; ++k)
    if (rows[k][n] != 0) coords[pivot_of_row[k]] = Complex(-1.0);
  return coords;
}

BpsStructure structure_at(const TauEvaluator& te,
                          const std::vector<Complex>& z_params) {
  if (static_cast<int>(z_params.size()) != te.base.rank)
    fail(Errc::domain_violation, "central charge count != rank");
  BpsStructure s = te.base;
  s.central_charge = z_params;
  for (const auto& [g, om] : s.omega)
    if (s.z_exact(g).is_zero())
      fail(Errc::zero_central_charge,
           "active class has zero central charge at this parameter");
  return s;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

Rational factorial_rational(int n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

}  // namespace

RhSolution make_rh_solution(
    const BpsStructure& s,
    const std::optional<std::vector<Complex>>& xi_coords) {
  ClassificationFlags flags = admit(s);
  RhSolution sol{s, {}, flags};
  if (xi_coords) {
    sol.xi_coords = *xi_coords;
    TorusPoint p = make_torus_point(sol.structure, sol.xi_coords);
    for (const auto& [g, om] : sol.structure.omega)
      if (eval_twisted(p, g) != Complex(1.0))
        fail(Errc::domain_violation,
             "constant term is not 1 on an active class");
  } else {
    sol.xi_coords = default_xi(sol.structure);
  }
  return sol;
}

Complex log_psi(const RhSolution& sol, Complex r, const Charge& beta,
                Complex t) {
  check_certified(sol.flags);
  return log_psi_raw(sol.structure, r, beta, t);
}

Complex solve_psi(const RhSolution& sol, Complex r, const Charge& beta,
                  Complex t) {
  return std::exp(log_psi(sol, r, beta, t));
}

Complex solve_phi(const RhSolution& sol, Complex r, const Charge& beta,
                  Complex t) {
  Complex psi = solve_psi(sol, r, beta, t);
  return std::exp(-sol.structure.zc(beta) / t) * psi *
         eval_twisted(sol.xi(), beta);
}

namespace {

double verify_jump_core(const RhSolution& sol, const ExactComplex& ld,
                        Complex l, const Charge& beta, Complex t) {
  check_certified(sol.flags);
  const BpsStructure& s = sol.structure;

  std::vector<Charge> on_ray;
  double gap = 2.0 * kPi;
  for (const auto& [g, om] : s.omega) {
    ExactComplex z = s.z_exact(g);
    if (cross_sign(ld, z) == 0 && dot_sign(ld, z) > 0) {
      on_ray.push_back(g);
      continue;
    }
    double a = std::abs(std::arg(s.zc(g) / l));
    gap = std::min(gap, a);
  }
  if (on_ray.empty())
    fail(Errc::domain_violation, "no active classes on the ray");
  const double eps = std::min(0.1, gap / 2.0);
  const Complex r_plus = l * std::exp(Complex(0.0, -eps));
  const Complex r_minus = l * std::exp(Complex(0.0, eps));
  if (dot_sign(ExactComplex::from(r_plus), ExactComplex::from(t)) <= 0 ||
      dot_sign(ExactComplex::from(r_minus), ExactComplex::from(t)) <= 0)
    fail(Errc::domain_violation, "t is not in both perturbed half-planes");

  Complex factor(1.0);
  for (const Charge& g : on_ray) {
    Complex phi_g = solve_phi(sol, r_plus, g, t);
    if (!(std::abs(phi_g) < 1.0))
      fail(Errc::domain_violation, "|Phi_gamma(t)| >= 1 on the ray");
    std::int64_t expo = integer_value(s.omega.at(g)) * s.pair(beta, g);
    factor *= ipow(Complex(1.0) - phi_g, expo);
  }
  Complex minus = solve_phi(sol, r_minus, beta, t);
  Complex plus = solve_phi(sol, r_plus, beta, t);
  return std::abs(minus - plus * factor) / std::abs(minus);
}

}  // namespace

double verify_jump(const RhSolution& sol, Complex l, const Charge& beta,
                   Complex t) {
  return verify_jump_core(sol, ray_direction(l), l, beta, t);
}

double verify_jump(const RhSolution& sol, const Ray& wall, const Charge& beta,
                   Complex t) {
  ExactComplex ld(Rational(wall.dir_key.first), Rational(wall.dir_key.second));
  if (ld.is_zero()) fail(Errc::domain_violation, "ray direction is zero");
  return verify_jump_core(sol, ld, wall.direction, beta, t);
}

LimitReport verify_limits(const RhSolution& sol, Complex r, const Charge& beta,
                          const std::vector<Complex>& t_to_zero,
                          const std::vector<Complex>& t_to_infinity) {
  check_certified(sol.flags);
  LimitReport report;
  const double xi_abs = std::abs(eval_twisted(sol.xi(), beta));
  report.gaps_monotone = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < t_to_zero.size(); ++i) {
    Complex psi = std::exp(log_psi(sol, r, beta, t_to_zero[i]));
    double gap = xi_abs * std::abs(psi - Complex(1.0));
    if (i > 0 && gap > prev) report.gaps_monotone = false;
    report.limit_gaps.push_back(gap);
    prev = gap;
  }
  std::vector<double> xs, ys;
  for (Complex t : t_to_infinity) {
    Complex lp = log_psi(sol, r, beta, t);
    report.growth_abs.push_back(std::exp(lp.real()));
    xs.push_back(std::log(std::abs(t)));
    ys.push_back(lp.real());
  }
  report.growth_exponent = lsq_slope(xs, ys);
  return report;
}

TauEvaluator make_tau_evaluator(const BpsStructure& base, Complex ray) {
  ray_direction(ray);
  ClassificationFlags flags = admit(base);
  return TauEvaluator{base, ray, flags};
}

Complex log_tau(const TauEvaluator& te, const std::vector<Complex>& z_params,
                Complex t) {
  check_certified(te.flags);
  return log_tau_raw(structure_at(te, z_params), te.ray, t);
}

Complex tau_eval(const TauEvaluator& te, const std::vector<Complex>& z_params,
                 Complex t) {
  return std::exp(log_tau(te, z_params, t));
}

double tau_pde_residual(const TauEvaluator& te,
                        const std::vector<Complex>& z_params, Complex t,
                        double h) {
  check_certified(te.flags);
  if (!(h > 0.0)) fail(Errc::domain_violation, "step must be positive");
  BpsStructure s0 = structure_at(te, z_params);
  const int n = s0.rank;

  std::vector<char> row_coupled(n, 0), col_needed(n, 0);
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (s0.skew[j][i] != 0) {
        row_coupled[i] = 1;
        col_needed[j] = 1;
        any = true;
      }
  if (!any)
    fail(Errc::degenerate_form, "every basis direction pairs to zero");

  std::vector<Complex> dtau(n, Complex(0.0));
  for (int j = 0; j < n; ++j) {
    if (!col_needed[j]) continue;
    double hj = h * std::max(std::abs(z_params[j]), 1.0);
    std::vector<Complex> zp = z_params, zm = z_params;
    zp[j] += hj;
    zm[j] -= hj;
    dtau[j] = (log_tau_raw(structure_at(te, zp), te.ray, t) -
               log_tau_raw(structure_at(te, zm), te.ray, t)) /
              (2.0 * hj);
  }

  const double ht = h * std::abs(t);
  const Complex two_pi_i(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!row_coupled[i]) continue;
    Charge ei(n, 0);
    ei[i] = 1;
    Complex lhs = (log_psi_raw(s0, te.ray, ei, t + ht) -
                   log_psi_raw(s0, te.ray, ei, t - ht)) /
                  (2.0 * ht) / two_pi_i;
    Complex rhs(0.0);
    for (int j = 0; j < n; ++j)
      if (s0.skew[j][i] != 0)
        rhs += static_cast<double>(s0.skew[j][i]) * dtau[j];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

Complex tau_asymptotic_coeff(const TauEvaluator& te, int g) {
  if (g < 2 || g > 25)
    fail(Errc::out_of_range, "order must be between 2 and 25");
  const double factor =
      to_double(bernoulli(2 * g)) / (4.0 * g * (2.0 * g - 2.0));
  Complex acc(0.0);
  for (const auto& [gamma, om] : te.base.omega)
    acc += to_double(om) * ipow(te.base.zc(gamma), 2 - 2 * g);
  return factor * acc;
}

Rational tau_log_coefficient(const TauEvaluator& te) {
  Rational acc(0);
  for (const auto& [gamma, om] : te.base.omega) acc += om;
  return acc / Rational(24);
}

std::vector<Complex> gw_degenerate_series(std::int64_t chi,
                                          const std::vector<GvEntry>& gv,
                                          int g_max) {
  if (g_max < 2 || g_max > 12)
    fail(Errc::out_of_range, "genus bound must be between 2 and 12");
  std::vector<Complex> weights;
  for (const GvEntry& e : gv) {
    if (!(e.v.imag() > 0.0))
      fail(Errc::nonconvergent_input,
           "curve parameter needs positive imaginary part");
    weights.push_back(std::exp(Complex(0.0, 2.0 * kPi) * e.v));
  }
  std::vector<Complex> out;
  for (int g = 2; g <= g_max; ++g) {
    Complex coeff(to_double(gw_constant_map_coeff(chi, g)));
    Rational curve = bernoulli(2 * g) /
                     (Rational(2 * g) * factorial_rational(2 * g - 2));
    if (g % 2 == 0) curve = -curve;
    for (std::size_t b = 0; b < gv.size(); ++b)
      coeff += static_cast<double>(gv[b].gv0) * to_double(curve) *
               polylog_neg(3 - 2 * g, weights[b]);
    out.push_back(coeff);
  }
  return out;
}

Rational gw_constant_map_coeff(std::int64_t chi, int g) {
  if (g < 2 || g > 25)
    fail(Errc::out_of_range, "genus must be between 2 and 25");
  Rational value = Rational(chi) * bernoulli(2 * g) * bernoulli(2 * g - 2) /
                   (Rational(4 * g) * Rational(2 * g - 2) *
                    factorial_rational(2 * g - 2));
  if (g % 2 == 0) value = -value;
  return value;
}

Complex lattice_sum_partial(int g, Complex z, std::int64_t k_max) {
  if (g < 2 || g > 25)
    fail(Errc::out_of_range, "order must be between 2 and 25");
  if (k_max < 1) fail(Errc::out_of_range, "cutoff must be positive");
  if (!(z.imag() > 0.0))
    fail(Errc::nonconvergent_input, "z needs positive imaginary part");
  const int e = 2 - 2 * g;
  Complex acc(0.0);
  for (std::int64_t k = k_max; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    acc += ipow(z - kd, e) + ipow(z + kd, e);
  }
  acc += ipow(z, e);
  const Complex half(static_cast<double>(k_max) + 0.5, 0.0);
  acc += (ipow(half - z, 3 - 2 * g) + ipow(half + z, 3 - 2 * g)) /
         static_cast<double>(2 * g - 3);
  return acc;
}

}  // namespace bpsrh
