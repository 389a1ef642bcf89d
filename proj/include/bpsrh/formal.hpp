#pragma once

#include <map>
#include <vector>

#include "bpsrh/bps.hpp"
#include "bpsrh/rational.hpp"

namespace bpsrh {

// Exponent vector in cone coordinates; entries nonnegative, total degree
// bounded by the cone's truncation order.
using Expo = std::vector<int>;

// Positive cone spanned by a linearly independent list of lattice classes,
// together with the truncation order and the pairing matrix of the basis.
struct Cone {
  std::vector<Charge> basis;
  int degree_bound = 0;
  std::vector<std::vector<std::int64_t>> pair;  // pair[i][j] = <b_i, b_j>

  bool operator==(const Cone& o) const {
    return basis == o.basis && degree_bound == o.degree_bound;
  }
};

// Validates independence of the basis over the rationals.
Cone make_cone(const BpsStructure& s, std::vector<Charge> basis, int n);

// Lattice class of a cone point.
Charge class_of(const Cone& c, const Expo& e);

// Cone coordinates of a lattice class, if it lies in the cone.
std::optional<Expo> cone_coords(const Cone& c, const Charge& g);

// Element of the truncated twisted algebra: exact rational coefficients on
// cone points of total degree <= degree_bound. Multiplication carries the
// twist sign (-1)^{<class(u), class(v)>}.
struct TruncatedSeries {
  Cone cone;
  std::map<Expo, Rational> coeff;

  bool operator==(const TruncatedSeries& o) const {
    return cone == o.cone && coeff == o.coeff;
  }
};

TruncatedSeries make_series(const Cone& c,
                            std::vector<std::pair<Expo, Rational>> terms);
TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const Rational& r, const TruncatedSeries& a);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

// {x^u, x^v} = <class u, class v> x^u x^v, extended bilinearly.
TruncatedSeries poisson_bracket(const TruncatedSeries& a,
                                const TruncatedSeries& b);

// Algebra automorphism given by its action on the generators:
// x_{b_i} maps to x_{b_i} * mult[i], each multiplier with constant term 1.
struct TruncatedAutomorphism {
  Cone cone;
  std::vector<TruncatedSeries> mult;

  bool operator==(const TruncatedAutomorphism& o) const {
    return cone == o.cone && mult == o.mult;
  }
};

TruncatedAutomorphism identity_automorphism(const Cone& c);

// Image of a series under the automorphism (substitution, truncated).
TruncatedSeries apply_automorphism(const TruncatedAutomorphism& a,
                                   const TruncatedSeries& f);

// exp of the Poisson derivation {h, -}; h must have no constant term.
TruncatedAutomorphism exp_hamiltonian(const TruncatedSeries& h);

// Sum of DT(gamma) x_gamma over the cone classes on the ray, degree <= N.
TruncatedSeries dt_generating(const BpsStructure& s, const Cone& c,
                              const Ray& l);

// exp {dt_generating, -}: the wall-crossing automorphism of the ray.
TruncatedAutomorphism ray_automorphism(const BpsStructure& s, const Cone& c,
                                       const Ray& l);

// compose(a, b): x maps to a(b(x)).
TruncatedAutomorphism compose(const TruncatedAutomorphism& a,
                              const TruncatedAutomorphism& b);

// Clockwise-ordered product of ray automorphisms over the active rays whose
// central charges lie strictly between the boundary directions (d1, d2),
// given in clockwise order spanning at most a half turn. The first ray swept
// (largest argument) acts closest to the argument of the composite map.
TruncatedAutomorphism sector_product(const BpsStructure& s, const Cone& c,
                                     const Complex& d1, const Complex& d2);

// Unique slope-ordered factorization of a sector product under the central
// charge z (one value per lattice basis class): recovers the DT value of
// every cone class of degree <= N. Convert with omega_from_dt.
std::map<Charge, Rational> factorize(const TruncatedAutomorphism& target,
                                     const std::vector<Complex>& z);

// Omega table on the nu < 0 side of the rank-2 Kronecker lattice with
// pairing of size k, computed by reordering the trivial nu > 0 product.
OmegaTable kronecker_wallcross(int k, int n);

}  // namespace bpsrh
