#pragma once

namespace tailfrac::detail {

// Compensated accumulator; summation order stays fixed so results are
// reproducible across build settings and worker counts.
class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - compensation_;
        const double t = total_ + y;
        compensation_ = (t - total_) - y;
        total_ = t;
    }
    double value() const noexcept { return total_; }

private:
    double total_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace tailfrac::detail
