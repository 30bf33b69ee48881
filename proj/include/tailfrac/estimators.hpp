#pragma once

#include <optional>
#include <string_view>

#include <tailfrac/inference.hpp>
#include <tailfrac/sample.hpp>

namespace tailfrac {

/// The two intermediate-sequence counts (k0, k). 1 <= k0 < k < n is checked
/// against the sample at call time.
struct FractionPair {
    int k0 = 0;
    int k = 0;
};

enum class Method { Hill, Moment, FragaAlves, NewFamily };

std::string_view method_id(Method m);

struct Estimate {
    double value = 0.0;
    Method method = Method::NewFamily;
    std::optional<double> alpha;
    std::optional<int> k0;
    int k = 0;
    std::optional<ConfidenceInterval> ci;
};

// (1/k) sum_{i=0}^{k-1} [ln X_{n-i,n} - ln X_{n-k,n}]. The sum runs over k
// terms with divisor k (the printed range starting at i = 1 in some sources
// is a typographical variant).
double hill(const Sample& s, int k);

// M1 + 1 - 1/2 (1 - M1^2/M2)^{-1} with the same log-spacings as hill.
double moment(const Sample& s, int k);

// (1/k0) sum_{i=0}^{k0-1} { ln[(X_{n-i,n} - X_{n-k,n}) /
//                            (X_{n-k0,n} - X_{n-k,n})] }^alpha, alpha > 0.
double m_alpha(const Sample& s, FractionPair fp, double alpha);

// m_alpha at alpha = 1: the scale and location invariant Hill-type estimator.
double fraga_alves(const Sample& s, FractionPair fp);

// Gamma(alpha)/M^(alpha-1) * sqrt(M^(2 alpha)/Gamma(2 alpha + 1)) for
// alpha >= 1; M^(0) is identically 1.
Estimate gamma_hat(const Sample& s, FractionPair fp, double alpha);

}  // namespace tailfrac
