#pragma once

#include <stdexcept>
#include <string>

namespace gpclass {

// Error categories map to CLI exit codes: usage 1, data 2, numerical 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingFile : DataError {
  explicit MissingFile(const std::string& path)
      : DataError("missing file: " + path) {}
};
struct MalformedRow : DataError {
  MalformedRow(const std::string& path, std::size_t row, const std::string& why)
      : DataError("malformed row " + std::to_string(row) + " in " + path +
                  ": " + why) {}
};
struct SingleClassData : DataError {
  SingleClassData() : DataError("dataset contains only one class label") {}
};
struct DuplicatePoint : DataError {
  DuplicatePoint(std::size_t i, std::size_t j)
      : DataError("duplicate input points at rows " + std::to_string(i) +
                  " and " + std::to_string(j)) {}
};
struct DimensionMismatch : DataError {
  explicit DimensionMismatch(const std::string& what)
      : DataError("dimension mismatch: " + what) {}
};
struct EmptyBounds : UsageError {
  explicit EmptyBounds(std::size_t axis)
      : UsageError("empty bounds on axis " + std::to_string(axis)) {}
};
struct NonPositiveLengthscale : UsageError {
  explicit NonPositiveLengthscale(std::size_t axis)
      : UsageError("non-positive correlation length on axis " +
                   std::to_string(axis)) {}
};
struct NonPositiveScale : UsageError {
  NonPositiveScale() : UsageError("non-positive scale parameter") {}
};
struct NotPositiveDefinite : NumericalError {
  explicit NotPositiveDefinite(const std::string& where)
      : NumericalError("matrix not positive definite in " + where) {}
};
struct EmptyTrace : DataError {
  EmptyTrace() : DataError("trace contains no samples") {}
};
struct NoCrossings : NumericalError {
  NoCrossings()
      : NumericalError("no predictive draw crosses zero exactly once") {}
};

}  // namespace gpclass
