#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace egx
{

class cost_overflow : public std::overflow_error
{
public:
  using std::overflow_error::overflow_error;
};

/// Exact non-negative integer cost with an absorbing infinity.
///
/// Addition of finite values is checked; a result that would reach the
/// sentinel raises `cost_overflow` instead of wrapping.
class Cost
{
public:
  using value_type = std::uint64_t;

  constexpr Cost() = default;
  constexpr explicit Cost( value_type v ) : value_( v )
  {
    if ( v == kInf )
      throw cost_overflow( "cost value collides with the infinity sentinel" );
  }

  static constexpr Cost infinity()
  {
    Cost c;
    c.value_ = kInf;
    return c;
  }
  static constexpr Cost zero() { return Cost{}; }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr bool is_finite() const { return value_ != kInf; }

  /// Underlying value; only meaningful when finite.
  constexpr value_type value() const { return value_; }

  constexpr Cost& operator+=( Cost other )
  {
    if ( is_infinite() || other.is_infinite() )
    {
      value_ = kInf;
      return *this;
    }
    if ( other.value_ >= kInf - value_ )
      throw cost_overflow( "cost addition overflowed" );
    value_ += other.value_;
    return *this;
  }

  friend constexpr Cost operator+( Cost a, Cost b ) { return a += b; }

  friend constexpr auto operator<=>( Cost, Cost ) = default;

  std::string to_string() const { return is_infinite() ? std::string( "inf" ) : std::to_string( value_ ); }

  friend std::ostream& operator<<( std::ostream& os, Cost c ) { return os << c.to_string(); }

private:
  static constexpr value_type kInf = std::numeric_limits<value_type>::max();
  value_type value_ = 0;
};

inline constexpr Cost max_of( Cost a, Cost b ) { return a < b ? b : a; }

} // namespace egx
