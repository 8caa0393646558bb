#pragma once

#include <stdexcept>
#include <string>

namespace pmeq {

// Raised when an adaptive numerical routine cannot reach its tolerance
// (quadrature non-convergence, transform inversion breakdown, truncation
// error above tolerance at the maximum horizon). The CLI maps this to
// exit code 3; argument/domain errors map to exit code 2.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace pmeq
