#ifndef SALEM_ERROR_H_
#define SALEM_ERROR_H_

#include <stdexcept>
#include <string>

namespace salem {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable user input (scenario files, parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Q(M) has no elements, so eps(M) is undefined.
class EmptyWindowError : public Error {
 public:
  EmptyWindowError(double M, const std::string& what)
      : Error(what), M_(M) {}
  double M() const { return M_; }

 private:
  double M_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Requested frequency box exceeds the configured memory cap, or a
// Fourier grid does not cover the box an operation needs.
class BoxError : public Error {
 public:
  using Error::Error;
};

// No scale in the supplied finite Mset satisfies the selection test.
class MsetExhaustedError : public Error {
 public:
  MsetExhaustedError(int level, double best_ratio, double best_M,
                     const std::string& what)
      : Error(what), level_(level), best_ratio_(best_ratio), best_M_(best_M) {}
  int level() const { return level_; }
  // Smallest sup of |deviation| / (delta g) seen over the tried scales.
  double best_ratio() const { return best_ratio_; }
  double best_M() const { return best_M_; }

 private:
  int level_;
  double best_ratio_;
  double best_M_;
};

}  // namespace salem

#endif  // SALEM_ERROR_H_
