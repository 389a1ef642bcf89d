#include "bpsrh/bps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bpsrh {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::asymmetric_form: return "AsymmetricForm";
    case Errc::symmetry_violation: return "SymmetryViolation";
    case Errc::zero_central_charge: return "ZeroCentralCharge";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::pole_at: return "PoleAt";
    case Errc::branch_cut: return "BranchCut";
    case Errc::pole_at_one: return "PoleAtOne";
    case Errc::nonconvergent_input: return "NonconvergentInput";
    case Errc::pole_on_divisor: return "PoleOnDivisor";
    case Errc::not_generic: return "NotGeneric";
    case Errc::not_integral: return "NotIntegral";
    case Errc::flow_diverged: return "FlowDiverged";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::class_outside_cone: return "ClassOutsideCone";
    case Errc::cone_mismatch: return "ConeMismatch";
    case Errc::boundary_active: return "BoundaryActive";
    case Errc::not_factorizable: return "NotFactorizable";
    case Errc::active_ray: return "ActiveRay";
    case Errc::outside_half_plane: return "OutsideHalfPlane";
    case Errc::not_uncoupled: return "NotUncoupled";
    case Errc::degenerate_form: return "DegenerateForm";
    case Errc::parse_error: return "ParseError";
    case Errc::schema_error: return "SchemaError";
  }
  return "Error";
}

Rational parse_rational(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' '; }),
          t.end());
  if (t.empty()) fail(Errc::parse_error, "empty rational literal");
  auto ok_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = t.find('/');
  Rational q;
  if (slash == std::string::npos) {
    if (!ok_int(t)) fail(Errc::parse_error, "bad rational literal '" + text + "'");
    q = Rational(t);
  } else {
    std::string num = t.substr(0, slash), den = t.substr(slash + 1);
    if (!ok_int(num) || !ok_int(den))
      fail(Errc::parse_error, "bad rational literal '" + text + "'");
    if (Integer(den) == 0) fail(Errc::parse_error, "zero denominator in '" + text + "'");
    q = Rational(Integer(num), Integer(den));
  }
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

int cross_sign(const ExactComplex& a, const ExactComplex& b) {
  Rational c = a.re * b.im - a.im * b.re;
  return sgn(c);
}

int dot_sign(const ExactComplex& a, const ExactComplex& b) {
  Rational c = a.re * b.re + a.im * b.im;
  return sgn(c);
}

std::pair<Integer, Integer> primitive_direction(const ExactComplex& z) {
  if (z.is_zero()) fail(Errc::zero_central_charge, "direction of zero vector");
  Integer lcm_den;
  mpz_lcm(lcm_den.get_mpz_t(), z.re.get_den().get_mpz_t(),
          z.im.get_den().get_mpz_t());
  Integer p = z.re.get_num() * (lcm_den / z.re.get_den());
  Integer q = z.im.get_num() * (lcm_den / z.im.get_den());
  Integer g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  return {p / g, q / g};
}

int direction_octant(const std::pair<Integer, Integer>& d) {
  int sx = sgn(d.first), sy = sgn(d.second);
  if (sy == 0) return sx > 0 ? 0 : 4;
  if (sx == 0) return sy > 0 ? 2 : 6;
  if (sy > 0) return sx > 0 ? 1 : 3;
  return sx < 0 ? 5 : 7;
}

bool ray_order_less(const std::pair<Integer, Integer>& a,
                    const std::pair<Integer, Integer>& b) {
  int oa = direction_octant(a), ob = direction_octant(b);
  if (oa != ob) return oa < ob;
  // Same open quadrant: anticlockwise order is the sign of the cross product.
  Integer c = a.first * b.second - a.second * b.first;
  return c > 0;
}

std::int64_t BpsStructure::pair(const Charge& a, const Charge& b) const {
  std::int64_t acc = 0;
  for (int i = 0; i < rank; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank; ++j) acc += a[i] * skew[i][j] * b[j];
  }
  return acc;
}

Complex BpsStructure::zc(const Charge& g) const {
  Complex z = 0.0;
  for (int i = 0; i < rank; ++i) z += static_cast<double>(g[i]) * central_charge[i];
  return z;
}

ExactComplex BpsStructure::z_exact(const Charge& g) const {
  ExactComplex z;
  for (int i = 0; i < rank; ++i)
    if (g[i] != 0) z.add_multiple(g[i], ExactComplex::from(central_charge[i]));
  return z;
}

double BpsStructure::norm(const Charge& g) const {
  double m = 0.0;
  for (int i = 0; i < rank; ++i)
    m = std::max(m, effective_weights[i] * std::abs(static_cast<double>(g[i])));
  return m;
}

Rational BpsStructure::omega_of(const Charge& g) const {
  auto it = omega.find(g);
  return it == omega.end() ? Rational(0) : it->second;
}

double BpsStructure::support_k1() const {
  double k = std::numeric_limits<double>::infinity();
  for (const auto& [g, v] : omega) k = std::min(k, std::abs(zc(g)) / norm(g));
  return k;
}

double BpsStructure::support_k2() const {
  double k = 0.0;
  for (const auto& [g, v] : omega) k = std::max(k, std::abs(zc(g)) / norm(g));
  return k;
}

std::int64_t charge_content(const Charge& g) {
  std::int64_t d = 0;
  for (auto m : g) d = std::gcd(d, m < 0 ? -m : m);
  return d;
}

Charge charge_divide(const Charge& g, std::int64_t m) {
  Charge out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] / m;
  return out;
}

Charge charge_negate(const Charge& g) {
  Charge out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = -g[i];
  return out;
}

Charge charge_add(const Charge& a, const Charge& b) {
  Charge out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

namespace {

std::string charge_str(const Charge& g) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
  os << ")";
  return os.str();
}

}  // namespace

BpsStructure make_bps_structure(const StructureConfig& cfg) {
  if (cfg.rank <= 0) fail(Errc::schema_error, "rank must be positive");
  const int n = cfg.rank;
  if (static_cast<int>(cfg.skew.size()) != n)
    fail(Errc::schema_error, "skew matrix must have rank rows");
  for (const auto& row : cfg.skew)
    if (static_cast<int>(row.size()) != n)
      fail(Errc::schema_error, "skew matrix must be square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cfg.skew[i][j] != -cfg.skew[j][i])
        fail(Errc::asymmetric_form,
             "skew[" + std::to_string(i) + "][" + std::to_string(j) +
                 "] != -skew[" + std::to_string(j) + "][" + std::to_string(i) + "]");
  if (static_cast<int>(cfg.central_charge.size()) != n)
    fail(Errc::schema_error, "central_charge must have rank entries");

  BpsStructure s;
  s.rank = n;
  s.skew = cfg.skew;
  s.central_charge = cfg.central_charge;
  s.norm_weights = cfg.norm_weights.value_or(std::vector<double>(n, 1.0));
  if (static_cast<int>(s.norm_weights.size()) != n)
    fail(Errc::schema_error, "norm_weights must have rank entries");
  for (double w : s.norm_weights)
    if (!(w > 0.0)) fail(Errc::schema_error, "norm_weights must be positive");
  // |<b,g>| <= sum_ij |skew_ij| |b_i| |g_j| <= K |b| |g| with K the weighted
  // absolute sum below; scaling the weights by sqrt(max(K,1)) makes the
  // pairing bound hold for the effective norm.
  double k_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k_sum += std::abs(static_cast<double>(cfg.skew[i][j])) /
               (s.norm_weights[i] * s.norm_weights[j]);
  double scale = std::sqrt(std::max(k_sum, 1.0));
  s.effective_weights = s.norm_weights;
  for (double& w : s.effective_weights) w *= scale;

  for (const auto& [g, v] : cfg.omega) {
    if (static_cast<int>(g.size()) != n)
      fail(Errc::schema_error, "omega class " + charge_str(g) + " has wrong length");
    if (charge_content(g) == 0)
      fail(Errc::schema_error, "omega assigned to the zero class");
    Rational value = v;
    value.canonicalize();
    if (value == 0) continue;
    auto it = s.omega.find(g);
    if (it != s.omega.end() && it->second != value)
      fail(Errc::symmetry_violation,
           "conflicting omega values for " + charge_str(g));
    s.omega[g] = value;
  }
  // Omega(-gamma) = Omega(gamma): complete missing mirrors, reject conflicts.
  for (const auto& [g, v] : OmegaTable(s.omega)) {
    Charge m = charge_negate(g);
    auto it = s.omega.find(m);
    if (it == s.omega.end())
      s.omega[m] = v;
    else if (it->second != v)
      fail(Errc::symmetry_violation,
           "omega(" + charge_str(g) + ") != omega(" + charge_str(m) + ")");
  }
  for (const auto& [g, v] : s.omega)
    if (s.z_exact(g).is_zero())
      fail(Errc::zero_central_charge, "active class " + charge_str(g) +
                                          " has vanishing central charge");
  return s;
}

std::vector<Ray> active_rays(const BpsStructure& s, double height_bound) {
  OmegaTable support = s.omega;
  if (s.support_extender) {
    OmegaTable extra = s.support_extender(height_bound);
    for (auto& [g, v] : extra)
      if (v != 0) support.emplace(g, v);
  }

  std::map<std::pair<Integer, Integer>, Ray> rays;
  for (const auto& [g, v] : support) {
    ExactComplex z = s.z_exact(g);
    if (z.is_zero())
      fail(Errc::zero_central_charge, "active class with vanishing central charge");
    auto key = primitive_direction(z);
    auto& ray = rays[key];
    if (ray.active_classes.empty()) {
      ray.dir_key = key;
      Complex zf = z.approx();
      ray.direction = zf / std::abs(zf);
      ray.height = std::abs(zf);
    }
    ray.active_classes.push_back(g);
    ray.height = std::min(ray.height, std::abs(s.zc(g)));
  }

  std::vector<Ray> out;
  for (auto& [key, ray] : rays) {
    if (!(ray.height < height_bound)) continue;
    std::sort(ray.active_classes.begin(), ray.active_classes.end(),
              [&](const Charge& a, const Charge& b) {
                double za = std::abs(s.zc(a)), zb = std::abs(s.zc(b));
                if (za != zb) return za < zb;
                return a < b;
              });
    out.push_back(std::move(ray));
  }
  std::sort(out.begin(), out.end(), [](const Ray& a, const Ray& b) {
    return ray_order_less(b.dir_key, a.dir_key);
  });
  return out;
}

ClassificationFlags classify(const BpsStructure& s) {
  ClassificationFlags f;
  f.finite = !s.support_extender;
  f.ray_finite = s.support_extender ? s.extender_ray_finite : true;
  f.uncoupled = true;
  f.generic = true;
  f.integral = true;

  std::vector<const Charge*> act;
  act.reserve(s.omega.size());
  for (const auto& [g, v] : s.omega) {
    act.push_back(&g);
    if (v.get_den() != 1) f.integral = false;
  }
  for (std::size_t i = 0; i < act.size() && (f.uncoupled || f.generic); ++i) {
    auto di = primitive_direction(s.z_exact(*act[i]));
    for (std::size_t j = i + 1; j < act.size(); ++j) {
      if (s.pair(*act[i], *act[j]) == 0) continue;
      f.uncoupled = false;
      if (di == primitive_direction(s.z_exact(*act[j]))) {
        f.generic = false;
        break;
      }
    }
  }
  return f;
}

Rational dt_from_omega(const BpsStructure& s, const Charge& g) {
  std::int64_t content = charge_content(g);
  if (content == 0) fail(Errc::out_of_range, "DT of the zero class");
  Rational acc(0);
  for (std::int64_t m = 1; m <= content; ++m) {
    if (content % m != 0) continue;
    Rational w = s.omega_of(charge_divide(g, m));
    if (w != 0) acc += w / (m * m);
  }
  return acc;
}

DtTable dt_table(const BpsStructure& s) {
  DtTable out;
  for (const auto& [g, v] : s.omega) {
    std::int64_t content = charge_content(g);
    for (std::int64_t m = 1; m <= content; ++m) {
      if (content % m != 0) continue;
      Charge d = charge_divide(g, m);
      if (!out.count(d)) out[d] = dt_from_omega(s, d);
    }
    if (!out.count(g)) out[g] = dt_from_omega(s, g);
  }
  return out;
}

namespace {

// Mobius function of m via trial division; arguments stay tiny.
int mobius(std::int64_t m) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    mu = -mu;
  }
  if (m > 1) mu = -mu;
  return mu;
}

}  // namespace

Rational omega_from_dt(const DtTable& dt, const Charge& g) {
  std::int64_t content = charge_content(g);
  if (content == 0) fail(Errc::out_of_range, "omega of the zero class");
  Rational acc(0);
  for (std::int64_t m = 1; m <= content; ++m) {
    if (content % m != 0) continue;
    int mu = mobius(m);
    if (mu == 0) continue;
    auto it = dt.find(charge_divide(g, m));
    if (it == dt.end()) continue;
    acc += Rational(mu) / (m * m) * it->second;
  }
  return acc;
}

BpsStructure doubled(const BpsStructure& s,
                     const std::optional<std::vector<Complex>>& z_dual) {
  const int n = s.rank;
  if (z_dual && static_cast<int>(z_dual->size()) != n)
    fail(Errc::schema_error, "dual central charge must have rank entries");

  StructureConfig cfg;
  cfg.rank = 2 * n;
  cfg.skew.assign(2 * n, std::vector<std::int64_t>(2 * n, 0));
  // <(g1,l1),(g2,l2)> = <g1,g2> + l1(g2) - l2(g1) in the basis
  // (e_1..e_n, e_1^vee..e_n^vee).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cfg.skew[i][j] = s.skew[i][j];
    cfg.skew[n + i][i] = 1;
    cfg.skew[i][n + i] = -1;
  }
  cfg.central_charge.assign(2 * n, Complex(0.0));
  for (int i = 0; i < n; ++i) {
    cfg.central_charge[i] = s.central_charge[i];
    if (z_dual) cfg.central_charge[n + i] = (*z_dual)[i];
  }
  for (const auto& [g, v] : s.omega) {
    Charge lifted(2 * n, 0);
    for (int i = 0; i < n; ++i) lifted[i] = g[i];
    cfg.omega.emplace_back(lifted, v);
  }
  cfg.norm_weights = std::vector<double>(2 * n, 1.0);
  for (int i = 0; i < n; ++i) {
    (*cfg.norm_weights)[i] = s.norm_weights[i];
    (*cfg.norm_weights)[n + i] = s.norm_weights[i];
  }

  return make_bps_structure(cfg);
}

}  // namespace bpsrh
