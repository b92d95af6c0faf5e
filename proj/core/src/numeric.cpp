#include "vinolab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vinolab/errors.hpp"

namespace vinolab {

Caps& default_caps() {
  static Caps caps;
  return caps;
}

Int int_pow(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0) throw std::invalid_argument("rat_pow: zero base with nonzero exponent");
  Rat out;
  unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), mag);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), mag);
  out.canonicalize();
  if (e < 0) return Rat(1) / out;
  return out;
}

Int parse_int(const std::string& decimal) {
  if (decimal.empty()) throw ConfigError("empty integer literal");
  Int v;
  if (mpz_set_str(v.get_mpz_t(), decimal.c_str(), 10) != 0)
    throw ConfigError("not a decimal integer: '" + decimal + "'");
  return v;
}

Rat parse_rat(const std::string& p_over_q) {
  auto slash = p_over_q.find('/');
  Int num, den;
  if (slash == std::string::npos) {
    num = parse_int(p_over_q);
    den = 1;
  } else {
    num = parse_int(p_over_q.substr(0, slash));
    den = parse_int(p_over_q.substr(slash + 1));
  }
  if (den <= 0) throw ConfigError("rational denominator must be positive: '" + p_over_q + "'");
  Rat out(num, den);
  out.canonicalize();
  return out;
}

std::string to_decimal(const Int& v) { return v.get_str(); }

std::string to_decimal(const Rat& v) {
  Rat c = v;
  c.canonicalize();  // constructors from num/den pairs skip reduction
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double log10_int(const Int& v) {
  if (v <= 0) throw std::invalid_argument("log10_int: nonpositive argument");
  long exp2 = 0;
  double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log10(d) + static_cast<double>(exp2) * std::log10(2.0);
}

double log10_rat(const Rat& v) {
  if (v <= 0) throw std::invalid_argument("log10_rat: nonpositive argument");
  return log10_int(Int(v.get_num())) - log10_int(Int(v.get_den()));
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double log10_power_product(const std::vector<PowerTerm>& terms) {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.exponent.get_d() * log10_rat(t.base);
  return acc;
}

namespace {

// Raise a positive rational to an exact integer power given as mpz (the
// exponents seen here are tiny after lcm scaling, so get_ui is safe).
Rat rat_pow_mpz(const Rat& base, const Int& e) {
  if (!e.fits_slong_p())
    throw ResourceLimit("power comparison exponent too large");
  return rat_pow(base, e.get_si());
}

}  // namespace

int compare_power_product(const Rat& lhs, const std::vector<PowerTerm>& terms) {
  for (const auto& t : terms)
    if (t.base <= 0) throw std::invalid_argument("compare_power_product: nonpositive base");
  if (lhs < 0) return -1;
  if (lhs == 0) return -1;  // product of positive powers is positive

  double log_lhs = log10_rat(lhs);
  double log_rhs = log10_power_product(terms);
  if (log_lhs - log_rhs > 1e-9) return 1;
  if (log_rhs - log_lhs > 1e-9) return -1;

  // Inside the guard band: decide exactly. Raise both sides to the lcm of
  // the exponent denominators, which turns every power integral.
  Int lcm = 1;
  for (const auto& t : terms) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), t.exponent.get_den_mpz_t());
  Rat left = rat_pow_mpz(lhs, lcm);
  Rat right(1);
  for (const auto& t : terms) {
    Int e = Int(t.exponent.get_num()) * (lcm / Int(t.exponent.get_den()));
    right *= rat_pow_mpz(t.base, e);
  }
  return cmp(left, right);
}

int compare_power(const Rat& lhs, const Rat& coef, const Rat& base, const Rat& exponent) {
  return compare_power_product(lhs, {{coef, Rat(1)}, {base, exponent}});
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching samples, at least two");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]);
    double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace vinolab
