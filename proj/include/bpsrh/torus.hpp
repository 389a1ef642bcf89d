#pragma once

#include <vector>

#include "bpsrh/bps.hpp"
#include "bpsrh/rational.hpp"

namespace bpsrh {

// Point of the twisted torus, stored as coordinates of the underlying
// untwisted point relative to the canonical quadratic refinement: the sign
// twist is recomputed from the skew matrix on every evaluation, never stored.
// The referenced structure must outlive the point.
struct TorusPoint {
  const BpsStructure* structure = nullptr;
  std::vector<Complex> coords;
};

// Closed sector between two boundary ray directions given in clockwise order
// (first has the larger argument), opening angle strictly below a half turn,
// together with the domain radius R.
struct SectorDomain {
  ExactComplex first, second;
  double radius = 0.0;

  SectorDomain(const Complex& d1, const Complex& d2, double r);

  // Membership in the closed sector; exact sign test.
  bool contains(const ExactComplex& z) const;
};

// Coordinates must be nonzero and match the rank.
TorusPoint make_torus_point(const BpsStructure& s, std::vector<Complex> coords);

// The base point: 1 on basis classes, (-1)^{sum_{i<j} m_i m_j <g_i,g_j>} on
// a general class.
TorusPoint quadratic_refinement(const BpsStructure& s);

// Value of the twisted character x_g at p. Satisfies
// x_a(p) x_b(p) = (-1)^{<a,b>} x_{a+b}(p) with exact sign bookkeeping.
Complex eval_twisted(const TorusPoint& p, const Charge& g);

// The point q with eval(q, g) = eval(p, -g) for every class.
TorusPoint involution_sigma(const TorusPoint& p);

// True iff every stored active class whose central charge lies in the closed
// sector satisfies |x_g(p)| < exp(-R |g|) strictly. A certificate relative to
// the stored support, not an absolute guarantee for enumerator-backed
// structures.
bool in_domain(const SectorDomain& d, const TorusPoint& p);

// Wall-crossing automorphism of the ray, evaluated birationally:
// eval(q, b) = eval(p, b) * prod_{Z(g) on l} (1 - x_g(p))^{Omega(g) <b,g>}.
TorusPoint birational_wall_auto(const BpsStructure& s, const Ray& l,
                                const TorusPoint& p);

// Fourth-order time stepping of dx_b/dt = x_b sum DT(g) <g,b> x_g over the
// ray classes (all multiples of the stored active classes on l, truncated
// once their contribution drops below 1e-18), from t = 0 to t = 1.
TorusPoint hamiltonian_flow(const BpsStructure& s, const Ray& l,
                            const TorusPoint& p, int steps);

}  // namespace bpsrh
