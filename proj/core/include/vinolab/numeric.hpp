#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vinolab {

// All exact quantities are arbitrary-precision: counts and set sizes as
// integers, thresholds and ratios as rationals. Floats appear only in
// logarithmic reports and are formatted with 12 significant digits.
using Int = mpz_class;
using Rat = mpq_class;

Int int_pow(const Int& base, unsigned long e);
Rat rat_pow(const Rat& base, long e);  // negative e allowed, base != 0

Int parse_int(const std::string& decimal);   // throws ConfigError on junk
Rat parse_rat(const std::string& p_over_q);  // "p/q" or "p", q > 0 enforced

std::string to_decimal(const Int& v);
std::string to_decimal(const Rat& v);  // "p/q" reduced, or "p" when q == 1

double log10_int(const Int& v);  // v > 0
double log10_rat(const Rat& v);  // v > 0

// Formats a double with 12 significant digits; the single float format used
// in every serialized report so reruns are byte-identical.
std::string format_float(double v);

// One factor of a product-of-powers bound: base^exponent with base > 0.
struct PowerTerm {
  Rat base;
  Rat exponent;
};

// Exact sign of lhs - prod_i base_i^{e_i} for lhs >= 0 and positive bases.
// Rational exponents are eliminated by raising both sides to the lcm of
// their denominators; a log10 pre-check with a 1e-9 guard band short-circuits
// the easy cases and the exact route decides anything inside the band.
int compare_power_product(const Rat& lhs, const std::vector<PowerTerm>& terms);

// Convenience: sign of lhs - coef * base^exponent.
int compare_power(const Rat& lhs, const Rat& coef, const Rat& base, const Rat& exponent);

// log10 of a product of powers, for report fields.
double log10_power_product(const std::vector<PowerTerm>& terms);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vinolab
