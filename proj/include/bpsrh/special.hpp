#pragma once

#include "bpsrh/errors.hpp"
#include "bpsrh/rational.hpp"

namespace bpsrh {

// Principal branch of log Gamma: the analytic continuation off the closed
// negative real axis that is real on (0, inf). Nonpositive integers raise
// PoleAt; other points of the cut evaluate as the limit from above.
Complex log_gamma(Complex w);

// log of Lambda(w) = e^w Gamma(w) / (sqrt(2 pi) w^(w-1/2)), same branch
// conventions. The closed negative real axis raises BranchCut.
Complex log_lambda(Complex w);
Complex lambda_fn(Complex w);

// Exact Bernoulli number B_k, 0 <= k <= 60 (B_1 = -1/2).
Rational bernoulli(int k);

// sum_{g=1}^{terms} B_{2g} / (2g (2g-1)) w^(1-2g), the asymptotic tail of
// log Lambda. 1 <= terms <= 25.
Complex stirling_series(Complex w, int terms);

// log G(w+1) for the Barnes G function: the analytic continuation off the
// ray w <= -1 fixed by real values on (-1, inf). Real integer w <= -1
// raises PoleAt (zero of G); the rest of that ray raises BranchCut.
Complex log_barnes_g(Complex w);

// log of Upsilon(w) = e^{-zeta'(-1)} e^{3w^2/4} G(w+1) /
// ((2 pi)^{w/2} w^{w^2/2}), continued off the closed negative real axis;
// real w <= 0 raises BranchCut.
Complex log_upsilon(Complex w);
Complex upsilon_fn(Complex w);

// -(1/12) log w + sum_{g=2}^{terms} B_{2g} / (2g (2g-2)) w^(2-2g), the
// asymptotic tail of log Upsilon. 2 <= terms <= 25.
Complex upsilon_series(Complex w, int terms);

// Polylogarithm Li_s(x) for integer s <= 1. Orders <= 0 use the exact
// Eulerian-polynomial closed form x A_n(x) / (1-x)^(n+1); order 1 is
// -log(1-x). x = 1 raises PoleAtOne; orders below -25 raise OutOfRange.
Complex polylog_neg(int order, Complex x);

// zeta'(-1) = -0.1654211437..., computed once by Euler-Maclaurin summation
// and cached.
double zeta_prime_minus_one();

// Riemann zeta at integer s >= 2.
double zeta_int(int s);

}  // namespace bpsrh
