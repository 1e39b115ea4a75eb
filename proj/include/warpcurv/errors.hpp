#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace warpcurv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Expression layer

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at column " + std::to_string(position + 1) + ": " + message),
        position_(position),
        detail_(message) {}
  /// Zero-based offset into the source text.
  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityViolation : public Error {
 public:
  ArityViolation(std::size_t index, std::size_t arity)
      : Error("variable x" + std::to_string(index) + " out of range for arity " +
              std::to_string(arity)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DomainError : public Error {
 public:
  /// `node` is a printable rendering of the offending subexpression.
  DomainError(std::string node, const std::string& what)
      : Error("domain error in '" + node + "': " + what), node_(std::move(node)) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

// ---------------------------------------------------------------------------
// Geometry layer

class DegenerateMetric : public Error {
 public:
  explicit DegenerateMetric(double determinant)
      : Error("degenerate metric (det = " + std::to_string(determinant) + ")"),
        determinant_(determinant) {}
  double determinant() const noexcept { return determinant_; }

 private:
  double determinant_;
};

class NonpositiveWarp : public Error {
 public:
  NonpositiveWarp(char which, double value)
      : Error(std::string("nonpositive warping function ") + which + " = " + std::to_string(value)),
        which_(which),
        value_(value) {}
  char which() const noexcept { return which_; }
  double value() const noexcept { return value_; }

 private:
  char which_;
  double value_;
};

class StencilDomainError : public Error {
 public:
  using Error::Error;
};

class NumericalInstability : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Geodesics

class DomainExit : public Error {
 public:
  DomainExit(double s, std::vector<double> position, const std::string& cause)
      : Error("trajectory left the valid domain at s = " + std::to_string(s) + ": " + cause),
        s_(s),
        position_(std::move(position)) {}
  /// Last parameter value at which the state was valid.
  double s() const noexcept { return s_; }
  const std::vector<double>& position() const noexcept { return position_; }

 private:
  double s_;
  std::vector<double> position_;
};

class StepTooLarge : public Error {
 public:
  StepTooLarge(double s, double drift)
      : Error("norm drift " + std::to_string(drift) + " exceeded the abort threshold at s = " +
              std::to_string(s)),
        s_(s),
        drift_(drift) {}
  double s() const noexcept { return s_; }
  double drift() const noexcept { return drift_; }

 private:
  double s_;
  double drift_;
};

// ---------------------------------------------------------------------------
// Manifest and command line

class ManifestError : public Error {
 public:
  using Error::Error;
};

/// Malformed command-line value.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpcurv
