#pragma once

#include <stdexcept>
#include <string>

namespace geosom {

// Error taxonomy shared by the library and the CLI. The CLI maps each class
// to a distinct exit code, so library code should throw the most specific
// type that applies rather than a bare std::runtime_error.

// Bad configuration or arguments: out-of-range parameters, unknown feature
// names, shape mismatches between things the caller assembled.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files: unreadable CSV/JSON, missing columns, negative
// counts, duplicate region ids. Messages carry file/row context.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside an otherwise valid computation: eigensolver
// breakdown, non-finite values appearing mid-pipeline, degenerate geometry
// for an index that has no defined value.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace geosom
