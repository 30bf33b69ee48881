#include <tailfrac/sample.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <tailfrac/errors.hpp>

namespace tailfrac {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3) {
        throw parameter_error("sample needs at least 3 observations, got " +
                              std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw parameter_error("sample value at index " + std::to_string(i) +
                                  " is not finite");
        }
    }
    std::sort(values_.begin(), values_.end());
}

Sample Sample::shifted(double offset) const {
    std::vector<double> moved(values_);
    for (auto& v : moved) v += offset;
    return Sample(std::move(moved));
}

Sample Sample::scaled(double factor) const {
    if (!(factor > 0.0)) throw parameter_error("scale factor must be positive");
    std::vector<double> scaled(values_);
    for (auto& v : scaled) v *= factor;
    return Sample(std::move(scaled));
}

}  // namespace tailfrac
