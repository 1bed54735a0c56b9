#include "nilspace/rational.hpp"

#include "nilspace/error.hpp"

namespace nilspace {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Invalid: return "invalid";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::DegreeExceeded: return "degree-exceeded";
    case ErrorKind::NotPolynomial: return "not-polynomial";
    case ErrorKind::NotMorphism: return "not-morphism";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::Unsupported: return "unsupported-instance";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) fail(ErrorKind::Parse, "empty rational");
  if (s.front() == '+') s.erase(s.begin());
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    fail(ErrorKind::Parse, "malformed rational '" + s + "'");
  Integer n(num), d(den);
  if (d == 0) fail(ErrorKind::Parse, "zero denominator in '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer mod_floor(const Rational& q, const Integer& m) {
  if (q.get_den() != 1) fail(ErrorKind::Invalid, "residue of non-integer " + to_string(q));
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), q.get_num_mpz_t(), m.get_mpz_t());
  return r;
}

Rational frac(const Rational& q) { return q - Rational(floor_of(q)); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Rational binomial(const Rational& y, unsigned n) {
  if (is_integer(y)) return Rational(binomial(y.get_num(), n));
  Rational r(1);
  for (unsigned j = 0; j < n; ++j) r *= (y - j);
  r /= Rational(factorial(n));
  return r;
}

Integer binomial(const Integer& x, unsigned n) {
  if (x >= 0) {
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), x.get_mpz_t(), n);
    return r;
  }
  // binom(-a, n) = (-1)^n binom(a+n-1, n)
  Integer a = -x;
  Integer top = a + n - 1;
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), top.get_mpz_t(), n);
  return (n % 2) ? Integer(-r) : r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace nilspace
