#include "kdyn/rational.hpp"

#include "kdyn/errors.hpp"

#include <cmath>

namespace kdyn {

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  if (pos == text.size()) {
    throw ParameterError("malformed rational '" + std::string(whole) + "'");
  }
  Integer value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') {
      throw ParameterError("malformed rational '" + std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const Integer num = parse_integer(text.substr(0, slash), text);
  const Integer den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

bool reconstruct_rational(double x, long long max_den, double tol, Rational& out) {
  if (!std::isfinite(x)) return false;
  // Convergents h/k of the continued fraction of x.
  long long h_prev = 1, h = static_cast<long long>(std::floor(x));
  long long k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int step = 0; step < 64; ++step) {
    if (std::fabs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      out = Rational(Integer(h), Integer(k));
      return true;
    }
    if (frac < 1e-300) break;
    const double inv = 1.0 / frac;
    const double a_real = std::floor(inv);
    if (a_real > 1e15) break;
    const auto a = static_cast<long long>(a_real);
    frac = inv - a_real;
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return false;
}

}  // namespace kdyn
