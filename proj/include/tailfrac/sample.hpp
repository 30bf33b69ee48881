#pragma once

#include <cstddef>
#include <vector>

namespace tailfrac {

/// A batch of observations with cached ascending order statistics.
class Sample {
public:
    // Sorts on construction. Requires n >= 3 and all values finite.
    explicit Sample(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }

    // Ascending order statistics X_{1,n} <= ... <= X_{n,n}.
    const std::vector<double>& order_statistics() const noexcept { return values_; }

    // X_{n-i,n}: the (i+1)-th largest observation, i in [0, n).
    double from_top(std::size_t i) const noexcept { return values_[values_.size() - 1 - i]; }

    Sample shifted(double offset) const;
    Sample scaled(double factor) const;

private:
    std::vector<double> values_;
};

}  // namespace tailfrac
