#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "fiid/error.hpp"

namespace fiid {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Parses a plain decimal literal ("0.089", "3", "-1.5e-2" is rejected) into
/// an exact rational.
inline Rational parse_decimal(std::string_view text)
{
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty decimal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++pos;
  }
  BigInt numerator = 0;
  BigInt denominator = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seen_point) throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
    seen_digit = true;
    numerator = numerator * 10 + (c - '0');
    if (seen_point) denominator *= 10;
  }
  if (!seen_digit) throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
  Rational value(numerator, denominator);
  return negative ? Rational(-value) : value;
}

/// Exact decimal text when the denominator divides a power of ten within
/// `max_digits` places, otherwise "num/den".
inline std::string to_string_decimal(const Rational& x, int max_digits = 30)
{
  BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  const bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  int digits = 0;
  while (scale % den != 0) {
    if (++digits > max_digits) return x.str();
    scale *= 10;
  }
  const BigInt scaled = num * (scale / den);
  std::string s = scaled.str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(s.size())), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + s : s;
}

/// Largest x with x^k <= value, for value >= 0 and k >= 1.
inline BigInt integer_root_floor(const BigInt& value, unsigned k)
{
  if (value < 0 || k == 0) throw Error(ErrorCode::InvalidArgument, "integer_root_floor domain");
  if (value < 2 || k == 1) return value;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(value)) + 1;
  // 2^ceil(bits/k) is an upper bound for the root; Newton descends monotonically from above.
  BigInt x = BigInt(1) << ((bits + k - 1) / k);
  while (true) {
    BigInt next = ((k - 1) * x + value / boost::multiprecision::pow(x, k - 1)) / k;
    if (next >= x) break;
    x = next;
  }
  while (boost::multiprecision::pow(x, k) > value) --x;
  while (boost::multiprecision::pow(x + 1, k) <= value) ++x;
  return x;
}

/// SplitMix64 finalizer, used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index)
{
  return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

}  // namespace fiid
