#include "deltaq/series_acceleration.hpp"

#include <cmath>

namespace deltaq {

double WynnEpsilon::push(double partial_sum) {
    sums_.push_back(partial_sum);
    if (sums_.size() > window_) sums_.erase(sums_.begin());
    const std::size_t m = sums_.size();
    if (m < 3) {
        estimate_ = partial_sum;
        return estimate_;
    }
    // prev = column k-1, cur = column k; column 0 holds the sums.
    std::vector<double> prev(m + 1, 0.0);
    std::vector<double> cur(sums_.begin(), sums_.end());
    double best = partial_sum;
    for (std::size_t k = 1; k < m; ++k) {
        std::vector<double> next(m - k);
        for (std::size_t j = 0; j + k < m; ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0) {
                // Converged exactly; the even column already holds the limit.
                estimate_ = (k % 2 == 1) ? cur[j + 1] : best;
                return estimate_;
            }
            next[j] = prev[j + 1] + 1.0 / diff;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0 && std::isfinite(cur.back())) best = cur.back();
    }
    estimate_ = best;
    return estimate_;
}

}  // namespace deltaq
