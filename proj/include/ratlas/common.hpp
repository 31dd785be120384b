#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ratlas {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Failure categories; the CLI maps each one to a distinct exit code.
enum class ErrorKind {
  Input,      ///< malformed or invalid input data
  Numerical,  ///< lost zero, non-convergence, incommensurable data
  Tolerance,  ///< a cross-check exceeded its tolerance
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& what) { throw Error(ErrorKind::Input, what); }
[[noreturn]] inline void throw_numerical(const std::string& what) {
  throw Error(ErrorKind::Numerical, what);
}
[[noreturn]] inline void throw_tolerance(const std::string& what) {
  throw Error(ErrorKind::Tolerance, what);
}

/// Natural log with the branch used throughout: principal value, and on the
/// negative real axis (either sign of zero imaginary part) Arg = +pi.
inline cplx log_branch(cplx z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return {std::log(-z.real()), kPi};
  return std::log(z);
}

/// Argument in (-pi, pi] with the same tie-breaking as log_branch.
inline double arg_branch(cplx z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return kPi;
  return std::arg(z);
}

}  // namespace ratlas
