#pragma once

#include <stdexcept>
#include <string>

namespace deltaq {

/// A numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double error_estimate)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(error_estimate) + ")"),
          error_estimate_(error_estimate) {}

    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

}  // namespace deltaq
