#include "bpsrh/special.hpp"

#include <cmath>
#include <vector>

namespace bpsrh {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.83787706640934548356;  // log(2 pi)
constexpr double kEulerGamma = 0.57721566490153286061;

// Normalizes a real input so the closed negative axis is approached from
// above: Complex(x, -0.0) and Complex(x, 0.0) evaluate identically.
Complex canonical(Complex w) {
  if (w.imag() == 0.0) return Complex(w.real(), 0.0);
  return w;
}

bool is_nonpositive_integer(Complex w) {
  return w.imag() == 0.0 && w.real() <= 0.0 &&
         w.real() == std::floor(w.real());
}

void require_finite(Complex w, const char* who) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    fail(Errc::out_of_range, std::string(who) + ": nonfinite argument");
}

std::string point_str(Complex w) {
  return "(" + std::to_string(w.real()) + ", " + std::to_string(w.imag()) +
         ")";
}

// B_{2g} / ((2g)(2g-1)), the coefficient of w^(1-2g) in the log Lambda tail.
const double* lambda_coef() {
  static const std::vector<double> c = [] {
    std::vector<double> v(26, 0.0);
    for (int g = 1; g <= 25; ++g) {
      Rational r = bernoulli(2 * g);
      r /= (2 * g) * (2 * g - 1);
      v[g] = r.get_d();
    }
    return v;
  }();
  return c.data();
}

// B_{2g} / ((2g)(2g-2)), the coefficient of w^(2-2g) in the log Upsilon tail.
const double* upsilon_coef() {
  static const std::vector<double> c = [] {
    std::vector<double> v(26, 0.0);
    for (int g = 2; g <= 25; ++g) {
      Rational r = bernoulli(2 * g);
      r /= (2 * g) * (2 * g - 2);
      v[g] = r.get_d();
    }
    return v;
  }();
  return c.data();
}

Complex lambda_tail(Complex w, int terms) {
  const double* c = lambda_coef();
  Complex w2 = w * w;
  Complex p = 1.0 / w;
  Complex acc = 0.0;
  for (int g = 1; g <= terms; ++g) {
    acc += c[g] * p;
    p /= w2;
  }
  return acc;
}

Complex upsilon_tail(Complex w, int terms) {
  const double* c = upsilon_coef();
  Complex w2 = w * w;
  Complex p = 1.0 / w2;
  Complex acc = 0.0;
  for (int g = 2; g <= terms; ++g) {
    acc += c[g] * p;
    p /= w2;
  }
  return acc;
}

// log Gamma by Stirling's expansion, valid for Re w >= 12 where the
// truncation error is below double roundoff for all arguments.
Complex log_gamma_stirling(Complex w) {
  return (w - 0.5) * std::log(w) - w + 0.5 * kLog2Pi + lambda_tail(w, 15);
}

// The asymptotic expansion of log G(w+1); accurate for Re w >= 0 and
// |w| >= 30 (error far below roundoff there).
Complex log_barnes_asymptotic(Complex w) {
  Complex lw = std::log(w);
  Complex w2 = w * w;
  return zeta_prime_minus_one() + 0.5 * w2 * lw - 0.75 * w2 +
         0.5 * kLog2Pi * w - lw / 12.0 + upsilon_tail(w, 16);
}

// Taylor series of log G(1+z) about z = 0, radius of convergence 1; used
// for |z| <= 0.68 where ~120 terms reach double precision.
Complex log_barnes_taylor(Complex z) {
  Complex acc = 0.5 * (kLog2Pi - 1.0) * z - 0.5 * (1.0 + kEulerGamma) * z * z;
  Complex zp = z * z;
  for (int k = 3; k <= 140; ++k) {
    zp *= z;
    double c = zeta_int(k - 1) / k;
    Complex term = (k % 2 ? c : -c) * zp;
    acc += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(acc))) break;
  }
  return acc;
}

}  // namespace

Rational bernoulli(int k) {
  if (k < 0 || k > 60)
    fail(Errc::out_of_range,
         "bernoulli: index " + std::to_string(k) + " outside [0, 60]");
  static const std::vector<Rational> table = [] {
    std::vector<Rational> b(61);
    b[0] = 1;
    for (int m = 1; m <= 60; ++m) {
      Rational s = 0;
      for (int j = 0; j < m; ++j) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
        Rational t = Rational(binom) * b[j];
        s += t;
      }
      Rational bm = -s;
      bm /= m + 1;
      b[m] = bm;
    }
    return b;
  }();
  return table[k];
}

Complex log_gamma(Complex w) {
  require_finite(w, "log_gamma");
  w = canonical(w);
  if (is_nonpositive_integer(w))
    fail(Errc::pole_at, "log_gamma: pole at " + point_str(w));
  if (w.real() < -1e6)
    fail(Errc::out_of_range, "log_gamma: argument too far left " + point_str(w));
  int n = 0;
  if (w.real() < 12.0) n = static_cast<int>(std::ceil(12.0 - w.real()));
  Complex lg = log_gamma_stirling(w + static_cast<double>(n));
  // Downward recurrence with principal logs: both sides are analytic on the
  // plane slit along (-inf, 0] and agree on (0, inf), so this is the
  // principal branch everywhere off the cut (and its limit from above on it).
  for (int k = 0; k < n; ++k) lg -= std::log(w + static_cast<double>(k));
  return lg;
}

Complex log_lambda(Complex w) {
  require_finite(w, "log_lambda");
  if (w.imag() == 0.0 && w.real() <= 0.0)
    fail(Errc::branch_cut, "log_lambda: branch cut at " + point_str(w));
  return log_gamma(w) + w - (w - 0.5) * std::log(w) - 0.5 * kLog2Pi;
}

Complex lambda_fn(Complex w) { return std::exp(log_lambda(w)); }

Complex stirling_series(Complex w, int terms) {
  require_finite(w, "stirling_series");
  if (terms < 1 || terms > 25)
    fail(Errc::out_of_range, "stirling_series: term count " +
                               std::to_string(terms) + " outside [1, 25]");
  if (w == Complex(0.0, 0.0))
    fail(Errc::out_of_range, "stirling_series: zero argument");
  return lambda_tail(w, terms);
}

Complex log_barnes_g(Complex w) {
  require_finite(w, "log_barnes_g");
  w = canonical(w);
  if (w.imag() == 0.0 && w.real() <= -1.0) {
    if (w.real() == std::floor(w.real()))
      fail(Errc::pole_at, "log_barnes_g: G vanishes at " + point_str(w));
    fail(Errc::branch_cut, "log_barnes_g: branch cut at " + point_str(w));
  }
  if (std::abs(w.real()) > 1e5 || std::abs(w.imag()) > 1e5)
    fail(Errc::out_of_range, "log_barnes_g: argument too large " + point_str(w));

  if (w.real() >= 0.0 && std::abs(w) >= 30.0) return log_barnes_asymptotic(w);

  if (std::abs(w.imag()) <= 0.45) {
    // Reduce to |z| <= 0.68 by integer shifts; G(v+1) = Gamma(v) G(v).
    double m = std::round(w.real());
    Complex z = w - m;
    Complex acc = log_barnes_taylor(z);
    long mi = static_cast<long>(m);
    if (mi >= 1) {
      for (long j = 0; j < mi; ++j)
        acc += log_gamma(1.0 + z + static_cast<double>(j));
    } else if (mi <= -1) {
      for (long k = 1; k <= -mi; ++k)
        acc -= log_gamma(1.0 + z - static_cast<double>(k));
    }
    return acc;
  }

  // Shift right until the asymptotic region is reached, then remove the
  // accumulated Gamma factors. Principal branches throughout: both sides
  // are analytic off (-inf, -1] and agree on (-1, inf).
  double im = w.imag();
  double re_target =
      std::abs(im) >= 30.0 ? 2.0
                           : std::max(2.0, std::sqrt(900.0 - im * im));
  int n = 0;
  if (w.real() < re_target)
    n = static_cast<int>(std::ceil(re_target - w.real()));
  Complex v = w + static_cast<double>(n);
  Complex acc = log_barnes_asymptotic(v);
  for (int k = 0; k < n; ++k) acc -= log_gamma(w + 1.0 + static_cast<double>(k));
  return acc;
}

Complex log_upsilon(Complex w) {
  require_finite(w, "log_upsilon");
  w = canonical(w);
  if (w.imag() == 0.0 && w.real() <= 0.0)
    fail(Errc::branch_cut, "log_upsilon: branch cut at " + point_str(w));
  if (w.real() >= 0.0 && std::abs(w) >= 30.0) {
    // The Barnes asymptotic cancels the prefactors exactly; evaluating the
    // surviving tail directly avoids losing digits to that cancellation.
    return -std::log(w) / 12.0 + upsilon_tail(w, 16);
  }
  Complex w2 = w * w;
  return -zeta_prime_minus_one() + 0.75 * w2 + log_barnes_g(w) -
         0.5 * kLog2Pi * w - 0.5 * w2 * std::log(w);
}

Complex upsilon_fn(Complex w) { return std::exp(log_upsilon(w)); }

Complex upsilon_series(Complex w, int terms) {
  require_finite(w, "upsilon_series");
  if (terms < 2 || terms > 25)
    fail(Errc::out_of_range, "upsilon_series: term count " +
                               std::to_string(terms) + " outside [2, 25]");
  w = canonical(w);
  if (w.imag() == 0.0 && w.real() <= 0.0)
    fail(Errc::branch_cut, "upsilon_series: branch cut at " + point_str(w));
  return -std::log(w) / 12.0 + upsilon_tail(w, terms);
}

Complex polylog_neg(int order, Complex x) {
  require_finite(x, "polylog_neg");
  if (order > 1 || order < -25)
    fail(Errc::out_of_range,
         "polylog_neg: order " + std::to_string(order) + " outside [-25, 1]");
  if (x == Complex(1.0, 0.0))
    fail(Errc::pole_at_one, "polylog_neg: pole at x = 1");
  if (order == 1) return -std::log(1.0 - x);

  // Li_{-n}(x) = x A_n(x) / (1-x)^(n+1) with A_n the Eulerian polynomial.
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<Integer>> e(26);
    e[0] = {Integer(1)};
    for (int n = 1; n <= 25; ++n) {
      e[n].assign(n, Integer(0));
      int prev = static_cast<int>(e[n - 1].size());
      for (int k = 0; k < n; ++k) {
        Integer a = 0;
        if (k < prev) a += (k + 1) * e[n - 1][k];
        if (k > 0 && k - 1 < prev) a += (n - k) * e[n - 1][k - 1];
        e[n][k] = a;
      }
    }
    std::vector<std::vector<double>> d(26);
    for (int n = 0; n <= 25; ++n)
      for (const Integer& v : e[n]) d[n].push_back(v.get_d());
    return d;
  }();

  int n = -order;
  const std::vector<double>& row = rows[n];
  Complex p = 0.0;
  for (int k = static_cast<int>(row.size()) - 1; k >= 0; --k)
    p = p * x + row[k];
  Complex denom = 1.0;
  Complex one_minus = 1.0 - x;
  for (int j = 0; j <= n; ++j) denom *= one_minus;
  return x * p / denom;
}

double zeta_prime_minus_one() {
  static const double value = [] {
    const int N = 40, K = 8;
    long double s = 0.0L;
    for (int n = 2; n < N; ++n)
      s += static_cast<long double>(n) * logl(static_cast<long double>(n));
    long double lnN = logl(static_cast<long double>(N));
    long double v = -s +
                    static_cast<long double>(N) * N * (lnN / 2.0L - 0.25L) -
                    N * lnN / 2.0L + (1.0L + lnN) / 12.0L;
    for (int k = 2; k <= K; ++k) {
      long double b = bernoulli(2 * k).get_d();
      long double denom = static_cast<long double>(2 * k) * (2 * k - 1) *
                          (2 * k - 2);
      v -= b * powl(static_cast<long double>(N),
                    static_cast<long double>(2 - 2 * k)) /
           denom;
    }
    return static_cast<double>(v);
  }();
  return value;
}

double zeta_int(int s) {
  if (s < 2) fail(Errc::out_of_range, "zeta_int: argument below 2");
  if (s >= 55)
    return 1.0 + std::pow(2.0, -s) + std::pow(3.0, -s);
  const int N = 16, K = 12;
  long double acc = 0.0L;
  for (int n = 1; n < N; ++n)
    acc += powl(static_cast<long double>(n), static_cast<long double>(-s));
  long double Nl = static_cast<long double>(N);
  acc += powl(Nl, static_cast<long double>(-s)) / 2.0L;
  acc += powl(Nl, static_cast<long double>(1 - s)) / (s - 1);
  long double poch = 1.0L;
  for (int k = 1; k <= K; ++k) {
    // poch = s (s+1) ... (s + 2k - 2)
    if (k == 1) {
      poch = s;
    } else {
      poch *= (s + 2 * k - 3) * static_cast<long double>(s + 2 * k - 2);
    }
    long double b2k = bernoulli(2 * k).get_d();
    long double fact = 1.0L;
    for (int j = 2; j <= 2 * k; ++j) fact *= j;
    acc += b2k / fact * poch * powl(Nl, static_cast<long double>(1 - s - 2 * k));
  }
  return static_cast<double>(acc);
}

}  // namespace bpsrh
