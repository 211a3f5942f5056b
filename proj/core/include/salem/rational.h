#ifndef SALEM_RATIONAL_H_
#define SALEM_RATIONAL_H_

#include <cstdint>
#include <string>

namespace salem {

// Exact rational with a normalized sign (den > 0) and reduced terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "3", "-2/5" and finite decimals such as "1.25".
  static Rational Parse(const std::string& text);
  // Best approximation with denominator <= max_den; throws DomainError when
  // no rational within tol exists under that bound.
  static Rational FromDouble(double x, std::int64_t max_den = 1000000,
                             double tol = 1e-12);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double ToDouble() const { return static_cast<double>(num_) / den_; }
  std::string ToString() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(Rational a, Rational b);
  friend bool operator<=(Rational a, Rational b) { return !(b < a); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational Min(Rational a, Rational b);

}  // namespace salem

#endif  // SALEM_RATIONAL_H_
