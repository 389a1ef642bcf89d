#include "bpsrh/torus.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "bpsrh/errors.hpp"

namespace bpsrh {
namespace {

// (-1)^{sum_{i<j} m_i m_j <g_i,g_j>} computed mod 2, immune to overflow.
int refinement_sign(const BpsStructure& s, const Charge& g) {
  int parity = 0;
  for (int i = 0; i < s.rank; ++i) {
    if ((g[i] & 1) == 0) continue;
    for (int j = i + 1; j < s.rank; ++j)
      parity ^= static_cast<int>(g[j] & 1 & s.skew[i][j]);
  }
  return parity ? -1 : 1;
}

// Integer power by repeated squaring; exact when the base is a power of two.
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

void check_point(const TorusPoint& p) {
  if (!p.structure) fail(Errc::domain_violation, "torus point has no structure");
  if (static_cast<int>(p.coords.size()) != p.structure->rank)
    fail(Errc::domain_violation, "torus point coordinate count != rank");
}

std::int64_t integer_omega(const Rational& v) {
  Rational c = v;
  c.canonicalize();
  return c.get_num().get_si();
}

// The ray classes carrying DT values are the positive multiples of the
// primitive directions of the stored active classes on the ray.
std::vector<Charge> ray_primitives(const Ray& l) {
  std::set<Charge> prims;
  for (const Charge& g : l.active_classes)
    prims.insert(charge_divide(g, charge_content(g)));
  return {prims.begin(), prims.end()};
}

}  // namespace

SectorDomain::SectorDomain(const Complex& d1, const Complex& d2, double r)
    : first(ExactComplex::from(d1)), second(ExactComplex::from(d2)), radius(r) {
  if (first.is_zero() || second.is_zero())
    fail(Errc::domain_violation, "sector boundary direction is zero");
  if (!(r > 0.0)) fail(Errc::domain_violation, "sector radius must be positive");
  // first strictly anticlockwise of second, less than a half turn apart
  if (cross_sign(second, first) <= 0)
    fail(Errc::domain_violation,
         "sector boundaries must be clockwise ordered with angle below pi");
}

bool SectorDomain::contains(const ExactComplex& z) const {
  if (z.is_zero()) return false;
  return cross_sign(second, z) >= 0 && cross_sign(z, first) >= 0;
}

TorusPoint make_torus_point(const BpsStructure& s, std::vector<Complex> coords) {
  if (static_cast<int>(coords.size()) != s.rank)
    fail(Errc::domain_violation, "coordinate count != rank");
  for (const Complex& c : coords)
    if (c == Complex(0.0)) fail(Errc::domain_violation, "zero coordinate");
  return TorusPoint{&s, std::move(coords)};
}

TorusPoint quadratic_refinement(const BpsStructure& s) {
  return TorusPoint{&s, std::vector<Complex>(s.rank, Complex(1.0))};
}

Complex eval_twisted(const TorusPoint& p, const Charge& g) {
  check_point(p);
  const BpsStructure& s = *p.structure;
  if (static_cast<int>(g.size()) != s.rank)
    fail(Errc::domain_violation, "class size != rank");
  Complex value(static_cast<double>(refinement_sign(s, g)));
  for (int i = 0; i < s.rank; ++i)
    if (g[i] != 0) value *= ipow(p.coords[i], g[i]);
  return value;
}

TorusPoint involution_sigma(const TorusPoint& p) {
  check_point(p);
  TorusPoint q{p.structure, p.coords};
  for (Complex& c : q.coords) c = Complex(1.0) / c;
  return q;
}

bool in_domain(const SectorDomain& d, const TorusPoint& p) {
  check_point(p);
  const BpsStructure& s = *p.structure;
  for (const auto& [g, v] : s.omega) {
    if (!d.contains(s.z_exact(g))) continue;
    if (!(std::abs(eval_twisted(p, g)) < std::exp(-d.radius * s.norm(g))))
      return false;
  }
  return true;
}

TorusPoint birational_wall_auto(const BpsStructure& s, const Ray& l,
                                const TorusPoint& p) {
  check_point(p);
  ClassificationFlags flags = classify(s);
  if (!flags.generic) fail(Errc::not_generic, "structure is not generic");
  if (!flags.integral) fail(Errc::not_integral, "invariants are not integral");

  TorusPoint q{p.structure, p.coords};
  for (const Charge& g : l.active_classes) {
    Complex x = eval_twisted(p, g);
    if (x == Complex(1.0))
      fail(Errc::pole_on_divisor, "x_gamma = 1 on an active ray class");
    Complex base = Complex(1.0) - x;
    std::int64_t om = integer_omega(s.omega_of(g));
    Charge unit(s.rank, 0);
    for (int i = 0; i < s.rank; ++i) {
      unit[i] = 1;
      std::int64_t e = om * s.pair(unit, g);
      unit[i] = 0;
      if (e != 0) q.coords[i] *= ipow(base, e);
    }
  }
  return q;
}

TorusPoint hamiltonian_flow(const BpsStructure& s, const Ray& l,
                            const TorusPoint& p, int steps) {
  check_point(p);
  if (steps < 1) fail(Errc::out_of_range, "step count must be positive");

  const std::vector<Charge> prims = ray_primitives(l);
  const int n = s.rank;

  // <m prim, basis_i> scales linearly in m; store the primitive row.
  std::vector<std::vector<std::int64_t>> pairings(prims.size());
  std::vector<std::vector<double>> dt(prims.size());  // dt[k][m-1] = DT(m prim)
  std::vector<double> omega_sum(prims.size(), 0.0);
  for (std::size_t k = 0; k < prims.size(); ++k) {
    pairings[k].resize(n);
    Charge unit(n, 0);
    for (int i = 0; i < n; ++i) {
      unit[i] = 1;
      pairings[k][i] = s.pair(prims[k], unit);
      unit[i] = 0;
    }
    for (const Charge& g : l.active_classes) {
      Charge pr = charge_divide(g, charge_content(g));
      if (pr != prims[k]) continue;
      omega_sum[k] += std::abs(to_double(s.omega_of(g)));
    }
    Charge m_prim = prims[k];
    for (std::int64_t m = 1; m <= 128; ++m) {
      for (int i = 0; i < n; ++i) m_prim[i] = m * prims[k][i];
      dt[k].push_back(to_double(dt_from_omega(s, m_prim)));
    }
  }

  // F_i(c) = c_i sum_g DT(g) <g, basis_i> x_g(c) over the ray classes.
  auto derivative = [&](const std::vector<Complex>& c) {
    std::vector<Complex> f(n, Complex(0.0));
    double safety = 0.0;
    for (std::size_t k = 0; k < prims.size(); ++k) {
      Complex t(static_cast<double>(refinement_sign(s, prims[k])));
      for (int i = 0; i < n; ++i)
        if (prims[k][i] != 0) t *= ipow(c[i], prims[k][i]);
      const Complex x1 = t;  // x of the primitive, sign included
      const double a1 = std::abs(x1);
      if (a1 >= 1.0)
        fail(Errc::flow_diverged, "|x| reached 1 on the flow ray");
      // x of the m-th multiple is x1^m: the refinement sign of m*prim equals
      // sign(prim)^m, already carried by the power
      Complex xm = x1;
      for (std::int64_t m = 1; m <= 128; ++m) {
        double dtm = dt[k][m - 1];
        safety += std::abs(dtm) * std::abs(xm);
        if (dtm != 0.0)
          for (int i = 0; i < n; ++i)
            if (pairings[k][i] != 0)
              f[i] += dtm * static_cast<double>(m * pairings[k][i]) * xm;
        if (omega_sum[k] * std::abs(xm) * a1 * double(m + 1) <
            1e-18 * (1.0 - a1))
          break;
        xm *= x1;
      }
    }
    if (safety >= 1.0)
      fail(Errc::flow_diverged, "flow left the safety region");
    for (int i = 0; i < n; ++i) f[i] *= c[i];
    return f;
  };

  std::vector<Complex> c = p.coords;
  const double h = 1.0 / steps;
  std::vector<Complex> k1, k2, k3, k4, tmp(n);
  for (int step = 0; step < steps; ++step) {
    k1 = derivative(c);
    for (int i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k1[i];
    k2 = derivative(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k2[i];
    k3 = derivative(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = c[i] + h * k3[i];
    k4 = derivative(tmp);
    for (int i = 0; i < n; ++i)
      c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return TorusPoint{p.structure, std::move(c)};
}

}  // namespace bpsrh
