#ifndef RDFIELD_ERRORS_HPP
#define RDFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rdf {

// Bad user input: configs, indices, preconditions. CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime numerical failure: NaN, interaction singularity a^2 = 1,
// broken algebraic invariants. CLI exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rdf

#endif
