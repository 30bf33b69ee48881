#include <tailfrac/estimators.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <tailfrac/asymptotics.hpp>
#include <tailfrac/errors.hpp>

namespace tailfrac {

namespace {

// Compensated accumulation keeps desk-scale fixtures reproducible across
// optimization levels.
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

void check_k(const Sample& s, int k) {
    const int n = static_cast<int>(s.size());
    if (k < 1 || k >= n) {
        throw std::out_of_range("k must satisfy 1 <= k < n; got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n));
    }
}

void check_fraction_pair(const Sample& s, FractionPair fp) {
    const int n = static_cast<int>(s.size());
    if (fp.k0 < 1 || fp.k0 >= fp.k || fp.k >= n) {
        throw std::out_of_range("need 1 <= k0 < k < n; got k0=" + std::to_string(fp.k0) +
                                ", k=" + std::to_string(fp.k) + ", n=" + std::to_string(n));
    }
}

// Mean of the j-th powers of the log-spacings over the top k values.
double log_spacing_moment(const Sample& s, int k, int j) {
    const double threshold = s.from_top(static_cast<std::size_t>(k));
    const double log_threshold = std::log(threshold);
    KahanSum sum;
    for (int i = 0; i < k; ++i) {
        const double spacing = std::log(s.from_top(static_cast<std::size_t>(i))) - log_threshold;
        sum.add(j == 1 ? spacing : spacing * spacing);
    }
    return sum.value() / k;
}

}  // namespace

std::string_view method_id(Method m) {
    switch (m) {
        case Method::Hill: return "hill";
        case Method::Moment: return "moment";
        case Method::FragaAlves: return "fraga_alves";
        case Method::NewFamily: return "new_family";
    }
    return "unknown";
}

double hill(const Sample& s, int k) {
    check_k(s, k);
    if (!(s.from_top(static_cast<std::size_t>(k)) > 0.0)) {
        throw std::domain_error("hill needs a positive threshold order statistic");
    }
    return log_spacing_moment(s, k, 1);
}

double moment(const Sample& s, int k) {
    check_k(s, k);
    const double threshold = s.from_top(static_cast<std::size_t>(k));
    if (!(threshold > 0.0)) {
        throw std::domain_error("moment needs a positive threshold order statistic");
    }
    const double m1 = log_spacing_moment(s, k, 1);
    const double m2 = log_spacing_moment(s, k, 2);
    if (!(m2 > 0.0)) {
        throw degenerate_sample_error("all log-spacings are zero");
    }
    // 1 - m1^2/m2 written through the centered second moment so a constant
    // spacing pattern is caught before it divides to infinity.
    const double log_threshold = std::log(threshold);
    KahanSum centered;
    for (int i = 0; i < k; ++i) {
        const double d = std::log(s.from_top(static_cast<std::size_t>(i))) - log_threshold - m1;
        centered.add(d * d);
    }
    const double variance = centered.value() / k;
    // a variance at rounding-noise scale means the spacings are constant
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (!(variance > 64.0 * eps * eps * m2)) {
        throw degenerate_sample_error("log-spacings have zero variance");
    }
    return m1 + 1.0 - 0.5 * m2 / variance;
}

double m_alpha(const Sample& s, FractionPair fp, double alpha) {
    check_fraction_pair(s, fp);
    if (!(alpha > 0.0)) throw std::domain_error("m_alpha requires alpha > 0");
    const double base = s.from_top(static_cast<std::size_t>(fp.k));
    const double denominator = s.from_top(static_cast<std::size_t>(fp.k0)) - base;
    if (!(denominator > 0.0)) {
        throw tie_error("tied order statistics: X_{n-k0,n} must exceed X_{n-k,n}");
    }
    KahanSum sum;
    for (int i = 0; i < fp.k0; ++i) {
        const double excess = s.from_top(static_cast<std::size_t>(i)) - base;
        const double term = std::log(excess / denominator);
        sum.add(alpha == 1.0 ? term : std::pow(term, alpha));
    }
    return sum.value() / fp.k0;
}

double fraga_alves(const Sample& s, FractionPair fp) { return m_alpha(s, fp, 1.0); }

Estimate gamma_hat(const Sample& s, FractionPair fp, double alpha) {
    if (!(alpha >= 1.0)) throw std::domain_error("gamma_hat requires alpha >= 1");
    const double m_high = m_alpha(s, fp, 2.0 * alpha);
    const double m_low = alpha == 1.0 ? 1.0 : m_alpha(s, fp, alpha - 1.0);
    if (!(m_low > 0.0)) {
        throw degenerate_sample_error("M^(alpha-1) vanished; spacings are degenerate");
    }
    const double value =
        gamma_fn(alpha) / m_low * std::sqrt(m_high / gamma_fn(2.0 * alpha + 1.0));
    Estimate est;
    est.value = value;
    est.method = Method::NewFamily;
    est.alpha = alpha;
    est.k0 = fp.k0;
    est.k = fp.k;
    return est;
}

}  // namespace tailfrac
