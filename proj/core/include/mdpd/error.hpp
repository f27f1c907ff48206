#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdpd {

/// Broad failure class, used by the CLI to choose an exit status.
enum class ErrorKind { Domain, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Shape parameter too small for the DPD integral at the requested alpha.
class DpdValidityError : public Error {
 public:
  explicit DpdValidityError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_estimate)
      : Error(ErrorKind::Numerical, what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

class OptimizationError : public Error {
 public:
  explicit OptimizationError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class InversionError : public Error {
 public:
  explicit InversionError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class SingularInformationError : public Error {
 public:
  explicit SingularInformationError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class DegenerateSampleError : public Error {
 public:
  explicit DegenerateSampleError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// A leave-one-out fit failed; index is the order-statistic position (0-based).
class TuningError : public Error {
 public:
  TuningError(const std::string& what, std::size_t index) : Error(ErrorKind::Numerical, what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SelectionError : public Error {
 public:
  explicit SelectionError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class BootstrapError : public Error {
 public:
  explicit BootstrapError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Ingestion failure. row is the 1-based line number in the file (0 when not row-specific).
class DataError : public Error {
 public:
  enum class Reason { MissingFile, MissingColumn, NegativeValue, NonNumeric, MissingValue, Malformed };

  DataError(Reason reason, std::size_t row, const std::string& what)
      : Error(ErrorKind::Data, what), reason_(reason), row_(row) {}
  Reason reason() const noexcept { return reason_; }
  std::size_t row() const noexcept { return row_; }

 private:
  Reason reason_;
  std::size_t row_;
};

}  // namespace mdpd
