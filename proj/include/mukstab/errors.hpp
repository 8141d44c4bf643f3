#ifndef MUKSTAB_ERRORS_HPP
#define MUKSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mukstab {

enum class ErrorKind {
  Unbounded,            // recession cone nontrivial
  Empty,                // infeasible halfspace system
  NotFullDim,           // affine hull is a proper subspace
  Overflow,             // exponent node out of double range
  NotDelzant,           // vertex cone generators are not a lattice basis
  DegenerateDirection,  // Brion perturbation failed to escape poles
  NotReflexive,         // facet offsets are not all 1
  NotConvex,            // piecewise linear data fails the convexity check
  SingularGram,         // moment Gram matrix not invertible
  MaxIters,             // iteration limit reached without convergence
  ParseError,           // malformed input file / JSON
  ValidationError,      // structurally valid input violating a precondition
  ComputeError,         // wrapped failure from a compute module
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::NotFullDim: return "NotFullDim";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotDelzant: return "NotDelzant";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NotReflexive: return "NotReflexive";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::MaxIters: return "MaxIters";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ComputeError: return "ComputeError";
  }
  return "Unknown";
}

}  // namespace mukstab

#endif
