#pragma once

#include <cstddef>
#include <vector>

namespace deltaq {

/// Wynn's epsilon algorithm over a stream of partial sums. Only the most
/// recent `window` terms enter the table.
class WynnEpsilon {
public:
    explicit WynnEpsilon(std::size_t window = 24) : window_(window) {}

    /// Adds the next partial sum and returns the current extrapolation.
    double push(double partial_sum);
    double estimate() const { return estimate_; }
    std::size_t size() const { return sums_.size(); }

private:
    std::size_t window_;
    std::vector<double> sums_;
    double estimate_ = 0.0;
};

}  // namespace deltaq
