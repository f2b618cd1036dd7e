#pragma once

#include <stdexcept>
#include <string>

namespace painleve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its admissible range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The configuration does not satisfy the contact condition y = L sin(theta).
class NotOnContact : public Error {
 public:
  using Error::Error;
};

/// theta lies outside the contact chart (0, pi).
class OutOfChart : public Error {
 public:
  using Error::Error;
};

/// The contact-point velocity has a normal component.
class NotTangent : public Error {
 public:
  using Error::Error;
};

/// An impact law was invoked on a velocity that does not impact.
class NotAnImpact : public Error {
 public:
  using Error::Error;
};

/// A constitutive law produced a velocity that is not outgoing.
class LawRejected : public Error {
 public:
  using Error::Error;
};

/// Dynamic Coulomb friction requested with zero slip.
class ZeroSlip : public Error {
 public:
  using Error::Error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// The classical contact problem has no solution or several at this state.
class ParadoxError : public Error {
 public:
  using Error::Error;
};

}  // namespace painleve
