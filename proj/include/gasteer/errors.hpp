#pragma once

#include <stdexcept>
#include <string>

namespace gasteer {

// Base of all library errors. Each subclass names one failure mode so callers
// (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class GradeOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class NearZeroNorm : public Error {
 public:
  using Error::Error;
};

class InvalidRotor : public Error {
 public:
  using Error::Error;
};

class AntipodalVectors : public Error {
 public:
  using Error::Error;
};

class DependentVectors : public Error {
 public:
  using Error::Error;
};

class FlagMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

// A (4,7) action was requested with a rotor that moves e1.
class RotorDomain : public Error {
 public:
  using Error::Error;
};

// Point or parameter set outside a model's domain.
class ModelDomain : public Error {
 public:
  using Error::Error;
};

class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A steering result missed its endpoint acceptance bound.
class AcceptanceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace gasteer
