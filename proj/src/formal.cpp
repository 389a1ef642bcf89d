#include "bpsrh/formal.hpp"

#include <algorithm>
#include <set>

#include "bpsrh/errors.hpp"

namespace bpsrh {
namespace {

using Terms = std::map<Expo, Rational>;

int degree(const Expo& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

std::int64_t pair_value(const Cone& c, const Expo& u, const Expo& v) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) s += u[i] * c.pair[i][j] * v[j];
  }
  return s;
}

void add_term(Terms& t, const Expo& e, const Rational& r) {
  if (r == 0) return;
  auto [it, fresh] = t.emplace(e, r);
  if (!fresh) {
    it->second += r;
    if (it->second == 0) t.erase(it);
  }
}

Terms mul_terms(const Cone& c, const Terms& a, const Terms& b, int bound) {
  Terms out;
  Expo w(c.basis.size(), 0);
  for (const auto& [u, cu] : a) {
    const int du = degree(u);
    for (const auto& [v, cv] : b) {
      if (du + degree(v) > bound) continue;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] + v[i];
      Rational r = cu * cv;
      if (pair_value(c, u, v) & 1) r = -r;
      add_term(out, w, r);
    }
  }
  return out;
}

// {a, b} with {x^u, x^v} = <class u, class v> x^u x^v.
Terms bracket_terms(const Cone& c, const Terms& a, const Terms& b, int bound) {
  Terms out;
  Expo w(c.basis.size(), 0);
  for (const auto& [u, cu] : a) {
    const int du = degree(u);
    for (const auto& [v, cv] : b) {
      if (du + degree(v) > bound) continue;
      const std::int64_t p = pair_value(c, u, v);
      if (p == 0) continue;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] + v[i];
      Rational r = cu * cv * Rational(Integer(p));
      if (p & 1) r = -r;
      add_term(out, w, r);
    }
  }
  return out;
}

// Exact solve of sum u_i basis_i = g; empty optional when g is outside the
// rational span.
std::optional<std::vector<Rational>> span_coords(const Cone& c,
                                                 const Charge& g) {
  const std::size_t k = c.basis.size();
  const std::size_t n = c.basis.empty() ? 0 : c.basis[0].size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < k; ++j) m[r][j] = Rational(c.basis[j][r]);
    m[r][k] = Rational(g[r]);
  }
  std::size_t row = 0;
  std::vector<int> pivot_of(k, -1);
  for (std::size_t col = 0; col < k && row < n; ++col) {
    std::size_t p = row;
    while (p < n && m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[row][col];
      for (std::size_t j = col; j <= k; ++j) m[r][j] -= f * m[row][j];
    }
    pivot_of[col] = static_cast<int>(row);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r)
    if (m[r][k] != 0) return std::nullopt;
  std::vector<Rational> u(k, Rational(0));
  for (std::size_t col = 0; col < k; ++col) {
    if (pivot_of[col] < 0) {
      // dependent column: make_cone rejects this
      return std::nullopt;
    }
    u[col] = m[pivot_of[col]][k] / m[pivot_of[col]][col];
  }
  return u;
}

void check_cones(const Cone& a, const Cone& b) {
  if (!(a == b)) fail(Errc::cone_mismatch, "cones differ in basis or bound");
}

// exp of {h, -} with explicit headroom so that stripping the generator
// still leaves every multiplier term of degree <= degree_bound.
TruncatedAutomorphism exp_terms(const Cone& c, const Terms& h) {
  const int bound = c.degree_bound + 1;
  const std::size_t k = c.basis.size();
  TruncatedAutomorphism a;
  a.cone = c;
  a.mult.resize(k);
  Expo unit(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    unit[i] = 1;
    Terms layer;
    layer[unit] = Rational(1);
    Terms acc = layer;
    Integer kfact = 1;
    for (int iter = 1; iter <= 4 * bound && !layer.empty(); ++iter) {
      layer = bracket_terms(c, h, layer, bound);
      kfact *= iter;
      for (const auto& [w, cv] : layer)
        add_term(acc, w, cv / Rational(kfact));
    }
    TruncatedSeries& u = a.mult[i];
    u.cone = c;
    Expo rel(k, 0);
    for (const auto& [w, cv] : acc) {
      for (std::size_t j = 0; j < k; ++j) rel[j] = w[j] - (j == i ? 1 : 0);
      if (degree(rel) > c.degree_bound) continue;
      Rational r = cv;
      if (pair_value(c, unit, rel) & 1) r = -r;
      add_term(u.coeff, rel, r);
    }
    unit[i] = 0;
  }
  return a;
}

struct RayKey {
  std::pair<Integer, Integer> key;
  ExactComplex dir;
};

// The ray of largest argument substitutes innermost, so the composite is
// folded left to right over increasing argument. Total order within an open
// half turn.
TruncatedAutomorphism fold_rays(
    const Cone& c, std::vector<std::pair<ExactComplex, Terms>>& rays) {
  std::sort(rays.begin(), rays.end(), [](const auto& a, const auto& b) {
    return cross_sign(a.first, b.first) > 0;
  });
  TruncatedAutomorphism p = identity_automorphism(c);
  for (const auto& [dir, h] : rays) p = compose(p, exp_terms(c, h));
  return p;
}

}  // namespace

Cone make_cone(const BpsStructure& s, std::vector<Charge> basis, int n) {
  if (n < 1) fail(Errc::out_of_range, "truncation order must be positive");
  if (basis.empty()) fail(Errc::domain_violation, "cone basis is empty");
  for (const Charge& b : basis)
    if (static_cast<int>(b.size()) != s.rank)
      fail(Errc::domain_violation, "cone basis class size != rank");
  Cone c;
  c.basis = std::move(basis);
  c.degree_bound = n;
  const std::size_t k = c.basis.size();
  c.pair.assign(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      c.pair[i][j] = s.pair(c.basis[i], c.basis[j]);
  // span_coords refuses pivot-free columns, so solving for any basis class
  // detects linear dependence
  for (const Charge& b : c.basis)
    if (!span_coords(c, b))
      fail(Errc::domain_violation, "cone basis is linearly dependent");
  return c;
}

Charge class_of(const Cone& c, const Expo& e) {
  const std::size_t n = c.basis[0].size();
  Charge g(n, 0);
  for (std::size_t i = 0; i < c.basis.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) g[j] += e[i] * c.basis[i][j];
  return g;
}

std::optional<Expo> cone_coords(const Cone& c, const Charge& g) {
  auto u = span_coords(c, g);
  if (!u) return std::nullopt;
  Expo e(c.basis.size(), 0);
  for (std::size_t i = 0; i < u->size(); ++i) {
    Rational& r = (*u)[i];
    r.canonicalize();
    if (r.get_den() != 1 || r < 0) return std::nullopt;
    e[i] = static_cast<int>(r.get_num().get_si());
  }
  return e;
}

TruncatedSeries make_series(const Cone& c,
                            std::vector<std::pair<Expo, Rational>> terms) {
  TruncatedSeries f;
  f.cone = c;
  for (auto& [e, r] : terms) {
    if (e.size() != c.basis.size())
      fail(Errc::domain_violation, "exponent size != cone basis size");
    for (int x : e)
      if (x < 0) fail(Errc::domain_violation, "negative cone exponent");
    if (degree(e) > c.degree_bound)
      fail(Errc::domain_violation, "term degree exceeds the truncation order");
    r.canonicalize();
    add_term(f.coeff, e, r);
  }
  return f;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_cones(a.cone, b.cone);
  TruncatedSeries f = a;
  for (const auto& [e, r] : b.coeff) add_term(f.coeff, e, r);
  return f;
}

TruncatedSeries series_scale(const Rational& r, const TruncatedSeries& a) {
  TruncatedSeries f;
  f.cone = a.cone;
  Rational s = r;
  s.canonicalize();
  if (s == 0) return f;
  f.coeff = a.coeff;
  for (auto& [e, cv] : f.coeff) cv *= s;
  return f;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_cones(a.cone, b.cone);
  TruncatedSeries f;
  f.cone = a.cone;
  f.coeff = mul_terms(a.cone, a.coeff, b.coeff, a.cone.degree_bound);
  return f;
}

TruncatedSeries poisson_bracket(const TruncatedSeries& a,
                                const TruncatedSeries& b) {
  check_cones(a.cone, b.cone);
  TruncatedSeries f;
  f.cone = a.cone;
  f.coeff = bracket_terms(a.cone, a.coeff, b.coeff, a.cone.degree_bound);
  return f;
}

TruncatedAutomorphism identity_automorphism(const Cone& c) {
  TruncatedAutomorphism a;
  a.cone = c;
  TruncatedSeries one;
  one.cone = c;
  one.coeff[Expo(c.basis.size(), 0)] = Rational(1);
  a.mult.assign(c.basis.size(), one);
  return a;
}

TruncatedSeries apply_automorphism(const TruncatedAutomorphism& a,
                                   const TruncatedSeries& f) {
  check_cones(a.cone, f.cone);
  const Cone& c = a.cone;
  const std::size_t k = c.basis.size();
  const int bound = c.degree_bound;
  // powers of the multipliers, grown on demand
  std::vector<std::vector<Terms>> pows(k);
  for (std::size_t j = 0; j < k; ++j)
    pows[j].push_back({{Expo(k, 0), Rational(1)}});
  TruncatedSeries out;
  out.cone = c;
  for (const auto& [w, cw] : f.coeff) {
    Terms acc{{w, cw}};
    for (std::size_t j = 0; j < k && !acc.empty(); ++j) {
      if (w[j] == 0) continue;
      while (static_cast<int>(pows[j].size()) <= w[j])
        pows[j].push_back(mul_terms(c, pows[j].back(),
                                    a.mult[j].coeff, bound));
      acc = mul_terms(c, acc, pows[j][w[j]], bound);
    }
    for (const auto& [e, r] : acc) add_term(out.coeff, e, r);
  }
  return out;
}

TruncatedAutomorphism exp_hamiltonian(const TruncatedSeries& h) {
  if (h.coeff.count(Expo(h.cone.basis.size(), 0)))
    fail(Errc::domain_violation, "hamiltonian has a constant term");
  return exp_terms(h.cone, h.coeff);
}

TruncatedAutomorphism compose(const TruncatedAutomorphism& a,
                              const TruncatedAutomorphism& b) {
  check_cones(a.cone, b.cone);
  TruncatedAutomorphism out;
  out.cone = a.cone;
  out.mult.reserve(a.mult.size());
  for (std::size_t i = 0; i < a.mult.size(); ++i)
    out.mult.push_back(series_mul(a.mult[i], apply_automorphism(a, b.mult[i])));
  return out;
}

TruncatedSeries dt_generating(const BpsStructure& s, const Cone& c,
                              const Ray& l) {
  TruncatedSeries f;
  f.cone = c;
  std::set<Charge> prims;
  for (const Charge& g : l.active_classes) {
    if (!cone_coords(c, g))
      fail(Errc::class_outside_cone, "active ray class outside the cone");
    prims.insert(charge_divide(g, charge_content(g)));
  }
  for (const Charge& prim : prims) {
    auto rc = span_coords(c, prim);
    if (!rc) fail(Errc::class_outside_cone, "ray direction outside the cone");
    Charge g(prim.size(), 0);
    for (std::int64_t m = 1;; ++m) {
      Rational total(0);
      bool integral = true;
      Expo e(c.basis.size(), 0);
      for (std::size_t i = 0; i < rc->size(); ++i) {
        Rational x = Rational(Integer(m)) * (*rc)[i];
        x.canonicalize();
        if (x.get_den() != 1 || x < 0) {
          integral = false;
          break;
        }
        e[i] = static_cast<int>(x.get_num().get_si());
        total += x;
      }
      if (total > c.degree_bound) break;
      if (!integral) continue;
      for (std::size_t j = 0; j < g.size(); ++j) g[j] = m * prim[j];
      add_term(f.coeff, e, dt_from_omega(s, g));
    }
  }
  return f;
}

TruncatedAutomorphism ray_automorphism(const BpsStructure& s, const Cone& c,
                                       const Ray& l) {
  return exp_terms(c, dt_generating(s, c, l).coeff);
}

TruncatedAutomorphism sector_product(const BpsStructure& s, const Cone& c,
                                     const Complex& d1, const Complex& d2) {
  ExactComplex lo = ExactComplex::from(d2), hi = ExactComplex::from(d1);
  if (lo.is_zero() || hi.is_zero())
    fail(Errc::domain_violation, "sector boundary direction is zero");
  int cs = cross_sign(lo, hi);
  if (cs < 0 || (cs == 0 && dot_sign(lo, hi) > 0))
    fail(Errc::domain_violation,
         "sector boundaries must be clockwise, spanning at most a half turn");

  std::map<std::pair<Integer, Integer>,
           std::pair<ExactComplex, std::vector<Charge>>>
      by_ray;
  for (const auto& [g, v] : s.omega) {
    ExactComplex z = s.z_exact(g);
    if ((cross_sign(hi, z) == 0 && dot_sign(hi, z) > 0) ||
        (cross_sign(lo, z) == 0 && dot_sign(lo, z) > 0))
      fail(Errc::boundary_active, "active class on a sector boundary ray");
    if (cross_sign(lo, z) > 0 && cross_sign(z, hi) > 0) {
      auto key = primitive_direction(z);
      auto& slot = by_ray[key];
      slot.first = z;
      slot.second.push_back(g);
    }
  }
  std::vector<std::pair<ExactComplex, Terms>> rays;
  for (auto& [key, slot] : by_ray) {
    Ray l;
    l.direction = slot.first.approx();
    l.dir_key = key;
    l.active_classes = std::move(slot.second);
    rays.emplace_back(slot.first, dt_generating(s, c, l).coeff);
  }
  return fold_rays(c, rays);
}

std::map<Charge, Rational> factorize(const TruncatedAutomorphism& target,
                                     const std::vector<Complex>& z) {
  const Cone& c = target.cone;
  const std::size_t k = c.basis.size();
  const std::size_t n = c.basis[0].size();
  if (z.size() != n)
    fail(Errc::domain_violation, "central charge size != lattice rank");

  std::map<std::pair<Integer, Integer>, std::pair<ExactComplex, Terms>> hams;
  auto rebuild = [&] {
    std::vector<std::pair<ExactComplex, Terms>> rays;
    rays.reserve(hams.size());
    for (const auto& [key, slot] : hams) rays.push_back(slot);
    return fold_rays(c, rays);
  };

  Expo unit(k, 0);
  for (int d = 1; d <= c.degree_bound; ++d) {
    TruncatedAutomorphism p = rebuild();
    // degree-d discrepancies of the multipliers
    std::set<Expo> exps;
    std::vector<Terms> delta(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& [e, r] : target.mult[i].coeff)
        if (degree(e) == d) add_term(delta[i], e, r);
      for (const auto& [e, r] : p.mult[i].coeff)
        if (degree(e) == d) add_term(delta[i], e, -r);
      for (const auto& [e, r] : delta[i]) exps.insert(e);
    }
    for (const Expo& w : exps) {
      Rational h;
      bool have = false;
      for (std::size_t i = 0; i < k; ++i) {
        unit[i] = 1;
        const std::int64_t q = pair_value(c, w, unit);
        unit[i] = 0;
        auto it = delta[i].find(w);
        Rational dv = it == delta[i].end() ? Rational(0) : it->second;
        if (q == 0) {
          if (dv != 0)
            fail(Errc::not_factorizable,
                 "discrepancy on a class with trivial bracket");
          continue;
        }
        // the bracket twist and the generator strip twist cancel, so the
        // degree-d discrepancy of multiplier i at exponent w is h_w <w, b_i>
        Rational cand = dv / Rational(Integer(q));
        if (!have) {
          h = cand;
          have = true;
        } else if (h != cand) {
          fail(Errc::not_factorizable,
               "inconsistent discrepancies across generators");
        }
      }
      if (!have || h == 0) continue;
      Charge g = class_of(c, w);
      ExactComplex zg;
      for (std::size_t j = 0; j < n; ++j)
        zg.add_multiple(g[j], ExactComplex::from(z[j]));
      if (zg.is_zero())
        fail(Errc::not_factorizable, "class with zero central charge");
      auto key = primitive_direction(zg);
      auto& slot = hams[key];
      slot.first = zg;
      add_term(slot.second, w, h);
    }
  }
  if (!(rebuild() == target))
    fail(Errc::not_factorizable, "residual discrepancy after all degrees");

  std::map<Charge, Rational> dt;
  for (const auto& [key, slot] : hams)
    for (const auto& [w, h] : slot.second) dt[class_of(c, w)] = h;
  return dt;
}

OmegaTable kronecker_wallcross(int k, int n) {
  if (k < 1) fail(Errc::out_of_range, "pairing size must be at least 1");
  if (n < 1 || n > 12) fail(Errc::out_of_range, "truncation order outside 1..12");

  StructureConfig cfg;
  cfg.rank = 2;
  cfg.skew = {{0, -k}, {k, 0}};
  // nu = Im(Z(e2)/Z(e1)) > 0: only the basis classes are active
  cfg.central_charge = {Complex(1.0, 1.0), Complex(-1.0, 1.0)};
  cfg.omega = {{{1, 0}, Rational(1)}, {{0, 1}, Rational(1)}};
  BpsStructure plus = make_bps_structure(cfg);

  Cone cone = make_cone(plus, {{1, 0}, {0, 1}}, n);
  TruncatedAutomorphism product =
      sector_product(plus, cone, Complex(-1.0, 0.125), Complex(1.0, 0.125));

  // reorder against a nu < 0 charge: the same automorphism refactorizes
  // into rays ordered by the new slopes
  auto dt = factorize(product, {Complex(-1.0, 1.0), Complex(1.0, 1.0)});

  DtTable table(dt.begin(), dt.end());
  OmegaTable out;
  for (const auto& [g, v] : dt) {
    Rational om = omega_from_dt(table, g);
    if (om != 0) out[g] = om;
  }
  return out;
}

}  // namespace bpsrh
