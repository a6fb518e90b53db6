#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace kdyn {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q" (q > 0 after normalization). Throws ParameterError.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& q);

double to_double(const Rational& q);
bool is_integer(const Rational& q);

/// Best rational approximation with denominator <= max_den via continued
/// fractions; empty result when |x - p/q| > tol for every admissible q.
bool reconstruct_rational(double x, long long max_den, double tol, Rational& out);

}  // namespace kdyn
