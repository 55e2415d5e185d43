#pragma once

#include <stdexcept>
#include <string>

namespace josephson {

// Every error the library raises derives from Error so front ends can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested Fock dimension exceeds the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Operands live on different bases or have incompatible shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// A Hamiltonian term breaks regional charge conservation.
class ModelInconsistencyError : public Error {
 public:
  using Error::Error;
};

// Two independent computations of the same quantity disagree.
class ImplementationDefectError : public Error {
 public:
  using Error::Error;
};

}  // namespace josephson
