#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "bpsrh/errors.hpp"
#include "bpsrh/rational.hpp"

namespace bpsrh {

// A lattice class in basis coordinates.
using Charge = std::vector<std::int64_t>;

using OmegaTable = std::map<Charge, Rational>;
using DtTable = std::map<Charge, Rational>;

// Input shape for make_bps_structure; mirrors the JSON schema.
struct StructureConfig {
  int rank = 0;
  std::vector<std::vector<std::int64_t>> skew;
  std::vector<Complex> central_charge;
  std::vector<std::pair<Charge, Rational>> omega;
  std::optional<std::vector<double>> norm_weights;
};

// Lattice with integer skew form, central charge and BPS invariants.
// The omega table holds the active classes (nonzero invariants) explicitly;
// structures whose support is too large to store carry an enumerator that
// yields all active classes with |Z| below a requested bound.
struct BpsStructure {
  int rank = 0;
  std::vector<std::vector<std::int64_t>> skew;
  std::vector<Complex> central_charge;
  OmegaTable omega;
  std::vector<double> norm_weights;            // as supplied
  std::vector<double> effective_weights;       // scaled so |<b,g>| <= |b||g|

  std::function<OmegaTable(double)> support_extender;
  bool extender_ray_finite = false;

  std::int64_t pair(const Charge& a, const Charge& b) const;
  Complex zc(const Charge& g) const;
  ExactComplex z_exact(const Charge& g) const;
  // Weighted sup norm max_i w_i |m_i| using the effective weights, which are
  // the supplied weights scaled up just enough that the skew pairing is
  // bounded by the product of norms.
  double norm(const Charge& g) const;
  Rational omega_of(const Charge& g) const;
  bool is_active(const Charge& g) const { return omega.count(g) != 0; }

  // min / max of |Z(gamma)| / norm(gamma) over the stored active classes.
  // The minimum is the support constant; both bounds are reported because
  // growth estimates use the two-sided comparison between |Z| and the norm.
  double support_k1() const;
  double support_k2() const;
};

BpsStructure make_bps_structure(const StructureConfig& cfg);

struct Ray {
  Complex direction;                        // unit modulus
  std::pair<Integer, Integer> dir_key;      // primitive exact direction
  std::vector<Charge> active_classes;       // sorted by |Z|, then lexicographically
  double height = 0.0;                      // min |Z| over the classes
};

// All active rays of height below the bound, sorted clockwise (decreasing
// argument) starting just below the positive real axis... concretely: by
// decreasing anticlockwise order in [0, 2*pi).
std::vector<Ray> active_rays(const BpsStructure& s, double height_bound);

struct ClassificationFlags {
  bool finite = false;
  bool ray_finite = false;
  bool uncoupled = false;
  bool generic = false;
  bool integral = false;
};

// Flags are certified over the stored support; a structure with an
// enumerator is treated as having infinite support (finite = false,
// ray_finite as declared at construction).
ClassificationFlags classify(const BpsStructure& s);

// DT(gamma) = sum over gamma = m * alpha of Omega(alpha) / m^2, exact.
Rational dt_from_omega(const BpsStructure& s, const Charge& g);

// DT on the divisor closure of the stored support (every class whose
// multiple is stored, plus the stored classes themselves).
DtTable dt_table(const BpsStructure& s);

// Mobius inversion: Omega(gamma) = sum over gamma = m * alpha of
// mu(m) / m^2 * DT(alpha). The table must contain every divisor of gamma
// that carries a nonzero DT value.
Rational omega_from_dt(const DtTable& dt, const Charge& g);

// Doubled structure on Gamma + Gamma^vee with the canonical extension of
// the form; Omega is supported on the first factor. The dual central
// charge defaults to zero; passing one gives the twisted double used as a
// miniversal deformation slice.
BpsStructure doubled(const BpsStructure& s,
                     const std::optional<std::vector<Complex>>& z_dual = std::nullopt);

// Primitive part and multiplicity: g = mult * primitive(g), mult > 0.
std::int64_t charge_content(const Charge& g);
Charge charge_divide(const Charge& g, std::int64_t m);
Charge charge_negate(const Charge& g);
Charge charge_add(const Charge& a, const Charge& b);

}  // namespace bpsrh
