#include <egx/rational.hpp>

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace egx
{

namespace
{

std::int64_t parse_int( std::string_view s, std::string_view whole )
{
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( s.empty() || ec != std::errc() || ptr != s.data() + s.size() )
    throw std::invalid_argument( "not a rational number: '" + std::string( whole ) + "'" );
  return v;
}

} // namespace

Rational::Rational( std::int64_t num, std::int64_t den )
{
  if ( den == 0 )
    throw std::invalid_argument( "rational with zero denominator" );
  if ( num < 0 || den < 0 )
    throw std::invalid_argument( "rational must be non-negative" );
  auto const g = std::gcd( num, den );
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::infinity()
{
  Rational r;
  r.infinite_ = true;
  return r;
}

Rational Rational::parse( std::string_view text )
{
  if ( text == "inf" || text == "infinity" || text == "Inf" )
    return infinity();

  if ( auto slash = text.find( '/' ); slash != std::string_view::npos )
    return Rational( parse_int( text.substr( 0, slash ), text ), parse_int( text.substr( slash + 1 ), text ) );

  auto const dot = text.find( '.' );
  if ( dot == std::string_view::npos )
    return Rational( parse_int( text, text ), 1 );

  auto const int_part = text.substr( 0, dot );
  auto const frac_part = text.substr( dot + 1 );
  if ( frac_part.size() > 15 )
    throw std::invalid_argument( "too many decimal digits: '" + std::string( text ) + "'" );
  std::int64_t den = 1;
  for ( std::size_t i = 0; i < frac_part.size(); ++i )
    den *= 10;
  std::int64_t const whole = int_part.empty() ? 0 : parse_int( int_part, text );
  std::int64_t const frac = frac_part.empty() ? 0 : parse_int( frac_part, text );
  if ( frac < 0 || ( !frac_part.empty() && ( frac_part.front() == '+' || frac_part.front() == '-' ) ) )
    throw std::invalid_argument( "not a rational number: '" + std::string( text ) + "'" );
  return Rational( whole * den + frac, den );
}

double Rational::to_double() const
{
  if ( infinite_ )
    return std::numeric_limits<double>::infinity();
  return static_cast<double>( num_ ) / static_cast<double>( den_ );
}

std::string Rational::to_string() const
{
  if ( infinite_ )
    return "inf";
  return std::to_string( num_ ) + "/" + std::to_string( den_ );
}

std::string Rational::to_display() const
{
  if ( infinite_ )
    return "inf";
  if ( den_ == 1 )
    return std::to_string( num_ );

  // exact decimal only when den = 2^a 5^b
  auto d = den_;
  int twos = 0, fives = 0;
  while ( d % 2 == 0 ) { d /= 2; ++twos; }
  while ( d % 5 == 0 ) { d /= 5; ++fives; }
  if ( d != 1 )
    return to_string();

  int const digits = std::max( twos, fives );
  std::int64_t scale = 1;
  for ( int i = 0; i < digits; ++i )
    scale *= 10;
  auto const scaled = num_ * ( scale / den_ );
  auto frac = std::to_string( scaled % scale );
  frac.insert( 0, static_cast<std::size_t>( digits ) - frac.size(), '0' );
  return std::to_string( scaled / scale ) + "." + frac;
}

bool operator==( const Rational& a, const Rational& b )
{
  if ( a.infinite_ || b.infinite_ )
    return a.infinite_ == b.infinite_;
  return a.num_ == b.num_ && a.den_ == b.den_;
}

bool operator<( const Rational& a, const Rational& b )
{
  if ( a.infinite_ )
    return false;
  if ( b.infinite_ )
    return true;
  return static_cast<__int128>( a.num_ ) * b.den_ < static_cast<__int128>( b.num_ ) * a.den_;
}

} // namespace egx
