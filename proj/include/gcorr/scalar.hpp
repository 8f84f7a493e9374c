#ifndef GCORR_SCALAR_HPP
#define GCORR_SCALAR_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "gcorr/error.hpp"

namespace gcorr {

  using Rational = boost::multiprecision::cpp_rational;
  using Integer  = boost::multiprecision::cpp_int;

  /// A real weight that stays an exact rational for as long as possible.
  ///
  /// Arithmetic between two exact values is exact. As soon as one operand is
  /// inexact (a double, typically produced by `exp`/`log`) the result is an
  /// inexact double. `is_exact()` lets a pipeline report which regime it ran
  /// in.
  class Scalar {
   public:
    Scalar() : value_(Rational(0)) {}
    Scalar(int v) : value_(Rational(v)) {}              // NOLINT
    Scalar(long v) : value_(Rational(v)) {}             // NOLINT
    Scalar(long long v) : value_(Rational(v)) {}        // NOLINT
    Scalar(Rational v) : value_(std::move(v)) {}        // NOLINT

    static Scalar fraction(long long num, long long den) {
      return Scalar(Rational(num, den));
    }

    static Scalar inexact(double v) {
      Scalar s;
      s.value_ = v;
      return s;
    }

    /// Accepts `p`, `p/q`, and decimal notation with an optional exponent
    /// (`0.125`, `-3.5e-2`); all of these are parsed exactly.
    static Scalar parse(std::string_view text);

    bool is_exact() const noexcept {
      return std::holds_alternative<Rational>(value_);
    }

    Rational const& exact() const {
      if (!is_exact()) {
        throw Error(ErrorCode::mismatch, "scalar is not exact");
      }
      return std::get<Rational>(value_);
    }

    double to_double() const {
      if (auto const* r = std::get_if<Rational>(&value_)) {
        return r->convert_to<double>();
      }
      return std::get<double>(value_);
    }

    int sign() const {
      if (auto const* r = std::get_if<Rational>(&value_)) {
        return r->sign();
      }
      double d = std::get<double>(value_);
      return (d > 0) - (d < 0);
    }

    bool is_positive() const {
      return sign() > 0;
    }

    bool is_zero() const {
      return sign() == 0;
    }

    bool is_one() const {
      if (auto const* r = std::get_if<Rational>(&value_)) {
        return *r == 1;
      }
      return std::get<double>(value_) == 1.0;
    }

    std::string to_string() const;

    Scalar operator-() const {
      if (auto const* r = std::get_if<Rational>(&value_)) {
        return Scalar(Rational(-*r));
      }
      return inexact(-std::get<double>(value_));
    }

    Scalar& operator+=(Scalar const& o) {
      return *this = *this + o;
    }
    Scalar& operator-=(Scalar const& o) {
      return *this = *this - o;
    }
    Scalar& operator*=(Scalar const& o) {
      return *this = *this * o;
    }
    Scalar& operator/=(Scalar const& o) {
      return *this = *this / o;
    }

    friend Scalar operator+(Scalar const& a, Scalar const& b) {
      if (a.is_exact() && b.is_exact()) {
        return Scalar(Rational(a.exact() + b.exact()));
      }
      return inexact(a.to_double() + b.to_double());
    }

    friend Scalar operator-(Scalar const& a, Scalar const& b) {
      if (a.is_exact() && b.is_exact()) {
        return Scalar(Rational(a.exact() - b.exact()));
      }
      return inexact(a.to_double() - b.to_double());
    }

    friend Scalar operator*(Scalar const& a, Scalar const& b) {
      if (a.is_exact() && b.is_exact()) {
        return Scalar(Rational(a.exact() * b.exact()));
      }
      return inexact(a.to_double() * b.to_double());
    }

    friend Scalar operator/(Scalar const& a, Scalar const& b) {
      if (b.is_zero()) {
        throw Error(ErrorCode::non_positive, "division by zero weight");
      }
      if (a.is_exact() && b.is_exact()) {
        return Scalar(Rational(a.exact() / b.exact()));
      }
      return inexact(a.to_double() / b.to_double());
    }

    friend bool operator==(Scalar const& a, Scalar const& b) {
      if (a.is_exact() && b.is_exact()) {
        return a.exact() == b.exact();
      }
      return a.to_double() == b.to_double();
    }

    friend std::partial_ordering operator<=>(Scalar const& a, Scalar const& b) {
      if (a.is_exact() && b.is_exact()) {
        auto const& x = a.exact();
        auto const& y = b.exact();
        if (x < y) {
          return std::partial_ordering::less;
        }
        if (x > y) {
          return std::partial_ordering::greater;
        }
        return std::partial_ordering::equivalent;
      }
      return a.to_double() <=> b.to_double();
    }

    friend std::ostream& operator<<(std::ostream& os, Scalar const& s) {
      return os << s.to_string();
    }

   private:
    std::variant<Rational, double> value_;
  };

  inline Scalar abs(Scalar const& s) {
    return s.sign() < 0 ? -s : s;
  }

  /// Absolute difference as a double; exact operands are subtracted exactly
  /// first, so equal rationals give exactly 0.
  inline double deviation(Scalar const& a, Scalar const& b) {
    return std::abs((a - b).to_double());
  }

  /// Acceptance thresholds for comparing two scalars.
  ///
  /// Exact operands must agree exactly. Otherwise the pair passes when
  /// `|a - b| <= absolute + relative * max(|a|, |b|)`.
  struct Tolerance {
    double absolute = 1e-12;
    double relative = 1e-9;

    static constexpr Tolerance absolute_only(double t) {
      return Tolerance{t, 0.0};
    }
    static constexpr Tolerance relative_only(double t) {
      return Tolerance{0.0, t};
    }

    double bound(double a, double b) const {
      return absolute + relative * std::max(std::abs(a), std::abs(b));
    }
  };

  inline bool within(Scalar const& a, Scalar const& b, Tolerance tol) {
    if (a.is_exact() && b.is_exact()) {
      return a.exact() == b.exact();
    }
    double x = a.to_double();
    double y = b.to_double();
    return std::abs(x - y) <= tol.bound(x, y);
  }

  /// Relative deviation |a-b| / max(|a|,|b|), 0 when both vanish.
  inline double relative_deviation(Scalar const& a, Scalar const& b) {
    double d = deviation(a, b);
    if (d == 0) {
      return 0;
    }
    return d / std::max(std::abs(a.to_double()), std::abs(b.to_double()));
  }

  namespace detail {
    // Boost reads a leading 0 as an octal prefix, so strip it first.
    inline Integer decimal_integer(std::string s) {
      bool negative = !s.empty() && s[0] == '-';
      if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        s.erase(0, 1);
      }
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorCode::parse, "not a decimal integer: '" + s + "'");
      }
      s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
      Integer v(s);
      return negative ? Integer(-v) : v;
    }
  }  // namespace detail

  inline Scalar Scalar::parse(std::string_view text) {
    auto fail = [&](std::string const& why) -> Scalar {
      throw Error(ErrorCode::parse,
                  "cannot parse weight '" + std::string(text) + "': " + why);
    };
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }),
            s.end());
    if (s.empty()) {
      return fail("empty");
    }
    try {
      if (auto slash = s.find('/'); slash != std::string::npos) {
        Integer num = detail::decimal_integer(s.substr(0, slash));
        Integer den = detail::decimal_integer(s.substr(slash + 1));
        if (den == 0) {
          return fail("zero denominator");
        }
        return Scalar(Rational(num, den));
      }
      std::string mantissa = s;
      long long   exponent = 0;
      if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        exponent = std::stoll(s.substr(e + 1));
      }
      bool negative = false;
      if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa.erase(0, 1);
      }
      std::string digits;
      if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        exponent -= static_cast<long long>(mantissa.size() - dot - 1);
      } else {
        digits = mantissa;
      }
      if (digits.empty()
          || !std::all_of(digits.begin(), digits.end(), [](char c) {
               return c >= '0' && c <= '9';
             })) {
        return fail("not a number");
      }
      if (std::abs(exponent) > 4000) {
        return fail("exponent out of range");
      }
      Rational value{detail::decimal_integer(digits)};
      Integer  ten_pow = boost::multiprecision::pow(Integer(10),
                                                   static_cast<unsigned>(std::abs(exponent)));
      value = exponent >= 0 ? Rational(value * ten_pow) : Rational(value / ten_pow);
      return Scalar(negative ? Rational(-value) : value);
    } catch (Error const&) {
      throw;
    } catch (std::exception const& e) {
      return fail(e.what());
    }
  }

  inline std::string Scalar::to_string() const {
    if (auto const* r = std::get_if<Rational>(&value_)) {
      auto num = boost::multiprecision::numerator(*r);
      auto den = boost::multiprecision::denominator(*r);
      if (den == 1) {
        return num.str();
      }
      return num.str() + "/" + den.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(value_);
    return os.str();
  }

}  // namespace gcorr

#endif  // GCORR_SCALAR_HPP
