#include "tropls/rational.hpp"

#include <cctype>

namespace tropls {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw InputError("not an exact rational: \"" + std::string(text) + "\" (use p or p/q)");
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  Rational q(neg ? mpz_class(-n) : n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long to_long(const Rational& q) {
  if (!is_integer(q)) throw std::logic_error("to_long of non-integer " + q.get_str());
  if (!q.get_num().fits_slong_p()) throw std::overflow_error("integer too large: " + q.get_str());
  return q.get_num().get_si();
}

Rational floor_of(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

mpz_class lcm_of(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

ExtRational parse_ext_rational(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return ExtRational::infinity();
  return ExtRational(parse_rational(text));
}

std::string to_string(const ExtRational& q) {
  return q.is_infinite() ? std::string("inf") : q.value().get_str();
}

}  // namespace tropls
