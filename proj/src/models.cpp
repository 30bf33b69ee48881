#include <tailfrac/models.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <tailfrac/errors.hpp>

namespace tailfrac {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw parameter_error(std::string(name) + " must be a positive finite real");
    }
}

struct QuantileVisitor {
    double p;
    double operator()(const Frechet& m) const { return std::pow(-std::log(p), -m.gamma); }
    double operator()(const Burr& m) const {
        return std::pow(std::pow(1.0 - p, -1.0 / m.b) - 1.0, 1.0 / m.a);
    }
    double operator()(const Pareto& m) const { return std::pow(1.0 - p, -m.gamma); }
};

struct CdfVisitor {
    double x;
    double operator()(const Frechet& m) const {
        if (x <= 0.0) return 0.0;
        return std::exp(-std::pow(x, -1.0 / m.gamma));
    }
    double operator()(const Burr& m) const {
        if (x <= 0.0) return 0.0;
        return 1.0 - std::pow(1.0 + std::pow(x, m.a), -m.b);
    }
    double operator()(const Pareto& m) const {
        if (x <= 1.0) return 0.0;
        return 1.0 - std::pow(x, -1.0 / m.gamma);
    }
};

// U(t) = Q(1 - 1/t). For the Frechet branch -log(1 - 1/t) goes through
// log1p so large t keeps full precision.
struct UpperQuantileVisitor {
    double t;
    double operator()(const Frechet& m) const {
        return std::pow(-std::log1p(-1.0 / t), -m.gamma);
    }
    double operator()(const Burr& m) const {
        return std::pow(std::pow(t, 1.0 / m.b) - 1.0, 1.0 / m.a);
    }
    double operator()(const Pareto& m) const { return std::pow(t, m.gamma); }
};

struct AnalyticParamsVisitor {
    SecondOrderTriple operator()(const Frechet& m) const { return {m.gamma, -1.0, {}}; }
    SecondOrderTriple operator()(const Burr& m) const {
        return {1.0 / (m.a * m.b), -1.0 / m.b, {}};
    }
    SecondOrderTriple operator()(const Pareto& m) const { return {m.gamma, kRhoExactTail, {}}; }
};

double upper_quantile_of(const std::variant<Frechet, Burr, Pareto>& dist, double t) {
    return std::visit(UpperQuantileVisitor{t}, dist);
}

SecondOrderFit fit_second_order(const std::variant<Frechet, Burr, Pareto>& dist, double gamma,
                                double rho_probe, double t, double x1, double x2) {
    const double u_t = upper_quantile_of(dist, t);
    const double y1 = upper_quantile_of(dist, t * x1) - u_t;
    const double y2 = upper_quantile_of(dist, t * x2) - u_t;

    const auto d_gamma = [gamma](double x) { return (std::pow(x, gamma) - 1.0) / gamma; };
    const auto psi = [gamma, rho_probe](double x) {
        const double s = gamma + rho_probe;
        return s != 0.0 ? (std::pow(x, s) - 1.0) / s : std::log(x);
    };

    const double d1 = d_gamma(x1), d2 = d_gamma(x2);
    const double p1 = psi(x1), p2 = psi(x2);
    const double det = d1 * p2 - d2 * p1;
    const double scale = std::fabs(d1 * p2) + std::fabs(d2 * p1);
    if (!(std::fabs(det) > 1e-12 * scale)) {
        throw degenerate_probe_error("second-order probe points are linearly dependent");
    }
    const double a_t = (y1 * p2 - y2 * p1) / det;
    const double w = (d1 * y2 - d2 * y1) / det;  // = a(t) * A(t)
    return {a_t, w / a_t};
}

// The constant of A(t) ~ c t^rho, read off at a t where |A| is large enough
// to resolve in double precision but the higher-order remainder is already
// negligible.
double estimate_c(const std::variant<Frechet, Burr, Pareto>& dist, double gamma, double rho) {
    const double exponent = std::clamp(4.0 / -rho, 2.0, 8.0);
    const double t = std::pow(10.0, exponent);
    const SecondOrderFit fit = fit_second_order(dist, gamma, rho, t, 2.0, 8.0);
    return fit.A_t * std::pow(t, -rho);
}

double parse_value(std::string_view text, std::string_view spec) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(std::string(text), &used);
    } catch (const std::exception&) {
        throw parameter_error("bad numeric value in model spec '" + std::string(spec) + "'");
    }
    if (used != text.size()) {
        throw parameter_error("trailing characters in model spec '" + std::string(spec) + "'");
    }
    return v;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

TailModel::TailModel(std::variant<Frechet, Burr, Pareto> m) : model_(std::move(m)) {
    params_ = std::visit(AnalyticParamsVisitor{}, model_);
    if (!params_.exact_first_order()) {
        params_.c = estimate_c(model_, params_.gamma, params_.rho);
    }
}

TailModel TailModel::frechet(double gamma) {
    require_positive(gamma, "frechet gamma");
    return TailModel(Frechet{gamma});
}

TailModel TailModel::burr(double a, double b) {
    require_positive(a, "burr a");
    require_positive(b, "burr b");
    return TailModel(Burr{a, b});
}

TailModel TailModel::pareto(double gamma) {
    require_positive(gamma, "pareto gamma");
    return TailModel(Pareto{gamma});
}

TailModel TailModel::parse(std::string_view spec) {
    const std::string text = lower(spec);
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw parameter_error("model spec '" + std::string(spec) + "' is missing ':'");
    }
    const std::string family = text.substr(0, colon);

    // key=value pairs separated by commas
    std::vector<std::pair<std::string, double>> kv;
    std::size_t pos = colon + 1;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw parameter_error("model spec '" + std::string(spec) +
                                  "' needs key=value pairs");
        }
        kv.emplace_back(item.substr(0, eq), parse_value(item.substr(eq + 1), spec));
        pos = comma + 1;
        if (comma == text.size()) break;
    }

    const auto get = [&](const char* key) {
        for (const auto& [k, v] : kv) {
            if (k == key) return v;
        }
        throw parameter_error("model spec '" + std::string(spec) + "' is missing key '" +
                              key + "'");
    };

    if (family == "frechet") {
        if (kv.size() != 1) throw parameter_error("frechet takes exactly g=<value>");
        return frechet(get("g"));
    }
    if (family == "burr") {
        if (kv.size() != 2) throw parameter_error("burr takes exactly a=<value>,b=<value>");
        return burr(get("a"), get("b"));
    }
    if (family == "pareto") {
        if (kv.size() != 1) throw parameter_error("pareto takes exactly g=<value>");
        return pareto(get("g"));
    }
    throw parameter_error("unknown model family '" + family + "'");
}

std::string TailModel::id() const {
    char buf[96];
    if (const auto* f = std::get_if<Frechet>(&model_)) {
        std::snprintf(buf, sizeof buf, "frechet:g=%.10g", f->gamma);
    } else if (const auto* b = std::get_if<Burr>(&model_)) {
        std::snprintf(buf, sizeof buf, "burr:a=%.10g,b=%.10g", b->a, b->b);
    } else {
        std::snprintf(buf, sizeof buf, "pareto:g=%.10g", std::get<Pareto>(model_).gamma);
    }
    return buf;
}

double quantile(const TailModel& model, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("quantile requires p in (0, 1)");
    }
    return std::visit(QuantileVisitor{p}, model.dist());
}

double cdf(const TailModel& model, double x) { return std::visit(CdfVisitor{x}, model.dist()); }

double upper_quantile(const TailModel& model, double t) {
    if (!(t > 1.0)) throw std::domain_error("upper_quantile requires t > 1");
    return upper_quantile_of(model.dist(), t);
}

SecondOrderFit a_numeric(const TailModel& model, double t, double x1, double x2) {
    if (!(t > 10.0)) throw std::domain_error("a_numeric requires t > 10");
    if (!(x1 > 1.0 && x2 > 1.0)) throw std::domain_error("a_numeric requires probes > 1");
    if (x1 == x2) throw degenerate_probe_error("a_numeric probes must differ");
    const SecondOrderTriple& so = model.second_order();
    const double rho_probe = so.exact_first_order() ? -1.0 : so.rho;
    return fit_second_order(model.dist(), so.gamma, rho_probe, t, x1, x2);
}

Sample sample(const TailModel& model, std::size_t n, RandomStream& stream) {
    if (n < 3) throw parameter_error("sample size must be at least 3");
    std::vector<double> draws;
    draws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        draws.push_back(std::visit(QuantileVisitor{stream.uniform()}, model.dist()));
    }
    return Sample(std::move(draws));
}

}  // namespace tailfrac
