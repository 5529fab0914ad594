#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tropls {

using Rational = mpq_class;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured enumeration or size cap was hit; never a silent truncation.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational make_rational(long num, long den = 1);

// Accepts "p", "-p" or "p/q"; decimal points and exponents are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
// Only valid when is_integer(q).
long to_long(const Rational& q);
Rational floor_of(const Rational& q);
mpz_class lcm_of(const mpz_class& a, const mpz_class& b);

// Rational or +infinity; the tropical zero is +infinity.
class ExtRational {
 public:
  ExtRational() : inf_(true) {}
  ExtRational(const Rational& v) : inf_(false), val_(v) {}
  ExtRational(long v) : inf_(false), val_(v) {}

  static ExtRational infinity() { return ExtRational(); }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  const Rational& value() const {
    if (inf_) throw std::logic_error("value of infinite ExtRational");
    return val_;
  }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return ExtRational();
    return ExtRational(Rational(a.val_ + b.val_));
  }
  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.val_ == b.val_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    int c = cmp(a.val_, b.val_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  bool inf_;
  Rational val_;
};

ExtRational parse_ext_rational(std::string_view text);
std::string to_string(const ExtRational& q);

}  // namespace tropls
