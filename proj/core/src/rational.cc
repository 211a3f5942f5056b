#include "salem/rational.h"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "salem/error.h"

namespace salem {
namespace {

std::int64_t Checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw DomainError("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational Make(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(Checked(num), Checked(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::Parse(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t pos1 = 0, pos2 = 0;
      std::string a = text.substr(0, slash), b = text.substr(slash + 1);
      long long n = std::stoll(a, &pos1);
      long long d = std::stoll(b, &pos2);
      if (pos1 != a.size() || pos2 != b.size()) throw InputError("bad rational: " + text);
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t pos = 0;
      long long n = std::stoll(text, &pos);
      if (pos != text.size()) throw InputError("bad rational: " + text);
      return Rational(n);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    std::size_t pos = 0;
    long long n = std::stoll(digits, &pos);
    if (pos != digits.size()) throw InputError("bad rational: " + text);
    return Rational(n, den);
  } catch (const std::logic_error&) {
    throw InputError("bad rational: " + text);
  }
}

Rational Rational::FromDouble(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  // Continued-fraction convergents.
  __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    __int128 ai = static_cast<__int128>(a);
    __int128 p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= tol * std::max(1.0, std::fabs(x))) {
      return Make(p1, q1);
    }
    double frac = r - a;
    if (frac == 0) break;
    r = 1.0 / frac;
  }
  if (q1 != 0 && std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= tol * std::max(1.0, std::fabs(x))) {
    return Make(p1, q1);
  }
  throw DomainError("no rational approximation within tolerance");
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
  return Make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}
Rational operator-(Rational a, Rational b) {
  return Make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}
Rational operator*(Rational a, Rational b) {
  return Make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}
Rational operator/(Rational a, Rational b) {
  return Make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}
bool operator<(Rational a, Rational b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational Min(Rational a, Rational b) { return b < a ? b : a; }

}  // namespace salem
