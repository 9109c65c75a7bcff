#pragma once

#include <stdexcept>
#include <string>

namespace fpsz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, word text, or law parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidLaw : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Rational backend requested for a law whose parameters are float-only, or a
// real scalar type requested for a family that needs complex arithmetic.
class BackendMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class OrderUnsupported : public Error {
 public:
  OrderUnsupported(std::string law, int order)
      : Error("law '" + law + "' has no moment of order " + std::to_string(order)),
        order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

// The q-th orthogonal polynomial (or the Gram-Schmidt residual of a word) has
// zero norm: the variables satisfy an algebraic relation at that index.
class DegenerateAt : public Error {
 public:
  DegenerateAt(std::string where, int order)
      : Error("degenerate at " + where), where_(std::move(where)), order_(order) {}
  const std::string& where() const noexcept { return where_; }
  int order() const noexcept { return order_; }

 private:
  std::string where_;
  int order_;
};

class DegenerateLaw : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class NotClassG : public Error {
 public:
  using Error::Error;
};

}  // namespace fpsz
