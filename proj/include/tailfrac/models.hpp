#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include <tailfrac/rng.hpp>
#include <tailfrac/sample.hpp>
#include <tailfrac/second_order.hpp>

namespace tailfrac {

struct Frechet {
    double gamma;
};
struct Burr {
    double a;
    double b;
};
struct Pareto {
    double gamma;
};

/// One of the three heavy-tailed benchmark models, with closed-form quantile
/// function and known (gamma, rho). The second-order constant c has no
/// closed form here; it is estimated numerically once at construction and
/// should be treated as approximate.
class TailModel {
public:
    static TailModel frechet(double gamma);
    static TailModel burr(double a, double b);
    static TailModel pareto(double gamma);

    // Spec-string grammar: "frechet:g=1", "burr:a=2,b=1", "pareto:g=2".
    // Keys are case-insensitive.
    static TailModel parse(std::string_view spec);

    // Canonical spec string (lower case, "%.10g" values).
    std::string id() const;

    const SecondOrderTriple& second_order() const noexcept { return params_; }

    const std::variant<Frechet, Burr, Pareto>& dist() const noexcept { return model_; }

private:
    explicit TailModel(std::variant<Frechet, Burr, Pareto> m);

    std::variant<Frechet, Burr, Pareto> model_;
    SecondOrderTriple params_;
};

// Q(p) = F^{-1}(p) for p in (0,1).
double quantile(const TailModel& model, double p);

// F(x); used by inverse-transform checks.
double cdf(const TailModel& model, double x);

// U(t) = Q(1 - 1/t) for t > 1, evaluated stably for large t.
double upper_quantile(const TailModel& model, double t);

inline const SecondOrderTriple& true_params(const TailModel& model) {
    return model.second_order();
}

struct SecondOrderFit {
    double a_t;
    double A_t;
};

// Fits U(t x) - U(t) = a(t) D_gamma(x) + a(t) A(t) Psi_{gamma,rho}(x) at the
// two probe points x1, x2 using the exact quantile function, and returns the
// fitted a(t) and A(t). An exactly first-order model is probed with rho = -1
// and yields A_t equal to zero up to rounding.
SecondOrderFit a_numeric(const TailModel& model, double t, double x1, double x2);

// n i.i.d. inverse-transform draws; deterministic for a given stream state.
Sample sample(const TailModel& model, std::size_t n, RandomStream& stream);

}  // namespace tailfrac
