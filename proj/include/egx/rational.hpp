#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace egx
{

/// Non-negative rational p/q kept in lowest terms, or +infinity.
class Rational
{
public:
  Rational() = default;
  Rational( std::int64_t num, std::int64_t den );

  static Rational infinity();

  /// Accepts "inf", integers, decimals ("1.05") and fractions ("21/20").
  static Rational parse( std::string_view text );

  bool is_infinite() const { return infinite_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const;

  /// "p/q" (or "inf"); the canonical serialized form.
  std::string to_string() const;

  /// Shortest decimal rendering when exact, otherwise "p/q".
  std::string to_display() const;

  friend bool operator==( const Rational& a, const Rational& b );
  friend bool operator<( const Rational& a, const Rational& b );
  friend bool operator<=( const Rational& a, const Rational& b ) { return !( b < a ); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool infinite_ = false;
};

} // namespace egx
