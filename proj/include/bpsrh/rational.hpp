#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>

namespace bpsrh {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

// Accepts "p", "-p", "p/q" with optional sign; q > 0 after canonicalization.
Rational parse_rational(const std::string& text);

// Canonical form, lowest terms, "/q" omitted when q == 1.
std::string format_rational(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

// Complex number with exact rational parts. IEEE doubles convert losslessly,
// so ray comparisons derived from JSON input are exact sign tests.
struct ExactComplex {
  Rational re, im;

  ExactComplex() = default;
  ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  static ExactComplex from(const Complex& z) {
    return ExactComplex(Rational(z.real()), Rational(z.imag()));
  }

  bool is_zero() const { return re == 0 && im == 0; }
  Complex approx() const { return Complex(re.get_d(), im.get_d()); }

  ExactComplex& add_multiple(std::int64_t m, const ExactComplex& z) {
    re += m * z.re;
    im += m * z.im;
    return *this;
  }
};

// Sign of the cross product re(a) im(b) - im(a) re(b): positive when b lies
// anticlockwise of a (within a half turn).
int cross_sign(const ExactComplex& a, const ExactComplex& b);
int dot_sign(const ExactComplex& a, const ExactComplex& b);

// Primitive integer vector on the same ray as z; requires z != 0.
std::pair<Integer, Integer> primitive_direction(const ExactComplex& z);

// Total anticlockwise order on ray directions starting just above the
// positive real axis... see ray_order_less for the exact convention.
// Returns 0..7: even values are the axes, odd values the open quadrants.
int direction_octant(const std::pair<Integer, Integer>& d);

// Strict weak order: a before b when arg(a) < arg(b), measuring arguments
// anticlockwise in [0, 2*pi) from the positive real axis.
bool ray_order_less(const std::pair<Integer, Integer>& a,
                    const std::pair<Integer, Integer>& b);

}  // namespace bpsrh
