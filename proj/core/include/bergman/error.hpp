#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

// Point outside the open ball, or too close to the sphere.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad numeric parameter (exponent out of range, mismatched calibre, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integrand produced a non-finite value at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepthError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NoCoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bergman
