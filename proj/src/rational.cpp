#include "photonic/rational.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "photonic/error.hpp"

namespace photonic {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::UnsupportedSize: return "unsupported-size";
    case ErrorKind::InfeasibleDemand: return "infeasible-demand";
    case ErrorKind::WrongMethod: return "wrong-method";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

namespace {

mpz_class pow10(unsigned long exponent) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
  return out;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  auto bad = [&]() -> Rational {
    fail(ErrorKind::Parse, "malformed decimal number '" + original + "'");
  };

  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long fraction_digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      ++fraction_digits;
    }
  }
  if (digits.empty()) return bad();

  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr == first) return bad();
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  if (pos != text.size()) return bad();

  const long scale = exponent - fraction_digits;
  if (scale > 4096 || scale < -4096) return bad();

  Rational out(mpz_class(digits, 10));
  if (scale > 0) {
    out *= pow10(static_cast<unsigned long>(scale));
  } else if (scale < 0) {
    out /= pow10(static_cast<unsigned long>(-scale));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

Rational from_decimal_double(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::InvalidParameter, "non-finite number");
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) fail(ErrorKind::Internal, "to_chars failed");
  return parse_decimal(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

Rational from_exact_double(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::InvalidParameter, "non-finite number");
  }
  return Rational(value);
}

Rational from_u64(std::uint64_t value) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return Rational(mpz_class(static_cast<unsigned long>(value)));
}

double to_double(const Rational& value) { return value.get_d(); }

Rational round_half_even(const Rational& value, int digits) {
  const mpz_class scale = pow10(static_cast<unsigned long>(digits));
  const mpz_class num = value.get_num() * scale;
  const mpz_class& den = value.get_den();
  mpz_class quotient;
  mpz_class remainder;
  mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int cmp_half = cmp(mpz_class(remainder * 2), den);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(quotient.get_mpz_t()))) {
    quotient += 1;
  }
  Rational out(quotient, scale);
  out.canonicalize();
  return out;
}

std::string format_fixed(const Rational& value, int digits) {
  const Rational rounded = round_half_even(value, digits);
  const mpz_class scaled = rounded.get_num() * pow10(static_cast<unsigned long>(digits)) / rounded.get_den();
  const bool negative = sgn(scaled) < 0;
  std::string body = mpz_class(abs(scaled)).get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + body : body;
}

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace photonic
