#include "maasslift/rational.hpp"

#include <stdexcept>

namespace ml {

Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(i64 num, i64 den) {
  return make_rational(Int(num), Int(den));
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  return r.get_str();
}

double to_double(const Rational& r) {
  return r.get_d();
}

Int binomial(unsigned n, unsigned k) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Int int_pow(const Int& base, unsigned e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Int int_pow(i64 base, unsigned e) {
  return int_pow(Int(base), e);
}

}  // namespace ml
