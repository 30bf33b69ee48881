#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <tailfrac/estimators.hpp>
#include <tailfrac/models.hpp>
#include <tailfrac/version.hpp>

namespace tailfrac {

struct KRule {
    enum class Kind { FixedFraction, Power, Explicit };
    Kind kind = Kind::FixedFraction;
    double value = 0.5;  // fraction, exponent, or explicit k
};

struct K0Rule {
    enum class Kind { TheoremOpt, Power, Explicit, Sweep };
    Kind kind = Kind::Power;
    double value = 2.0 / 3.0;  // exponent of k, or explicit k0
    double scale = 1.0;        // multiplier for the Power rule: k0 = floor(scale * k^e)
    int lo = 0, hi = 0, step = 1;  // Sweep bounds (inclusive)
    // Coverage runs only: raise the resolved k0 to the smallest value at
    // which the tuned interval is bounded at the configured level (when that
    // stays well below k). Without it a low k0 flags every tuned interval
    // unbounded and the average-length column is empty.
    bool raise_to_bounded = false;
};

// The documented coverage-study default: k0 = floor(2 k^{2g/(2g+1)}) from the
// true gamma. The coverage runner additionally raises k0 until the tuned
// interval is bounded at the configured level.
K0Rule coverage_default_k0_rule(const TailModel& model);

enum class Alpha0Mode { OracleTrueGamma, PilotPlugin };

struct ExperimentConfig {
    TailModel model = TailModel::pareto(1.0);
    std::vector<int> n_values;
    int replications = 1;
    std::uint64_t base_seed = 0;
    KRule k_rule;
    K0Rule k0_rule;
    std::vector<double> alphas;
    double level = 0.95;
    Alpha0Mode alpha0_mode = Alpha0Mode::OracleTrueGamma;
    double debug_shift = 0.0;  // added to every simulated value before estimation
    int workers = 1;

    void validate() const;  // throws parameter_error
};

int resolve_k(const KRule& rule, int n);
int resolve_k0(const K0Rule& rule, int k, int n, const TailModel& model);
std::vector<int> sweep_values(const K0Rule& rule, int k);

struct ReportRow {
    int n = 0;
    std::string model_id;
    std::string method;
    std::optional<double> alpha;
    int k0 = 0;
    int k = 0;
    double mean = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    std::optional<double> coverage;
    std::optional<double> avg_length;
    int failures = 0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    int schema_version = kReportSchemaVersion;
};

// Sample paths of the tuned family: one row per (alpha, k0) with
// mean/bias/MSE aggregated over replications. Requires a single n.
ExperimentReport run_paths(const ExperimentConfig& cfg, const std::vector<int>& k0_sweep);

// Mean and MSE versus k0 for the alpha = 1 baseline, the tuned family at
// alpha = 1 and at alpha0. Requires a single n and a Sweep k0 rule.
ExperimentReport run_grid(const ExperimentConfig& cfg);

// Coverage probability and average bounded length of the two asymptotic
// confidence intervals, sharing (k0, k), one row pair per n.
ExperimentReport run_coverage(const ExperimentConfig& cfg);

using EstimatorFn = std::function<double(const Sample&, FractionPair)>;

// Sweep value minimizing the empirical MSE of `estimator` against the true
// gamma; ties break toward smaller k0.
int empirical_k0_opt(const ExperimentConfig& cfg, const EstimatorFn& estimator,
                     const std::vector<int>& k0_sweep);

// CSV serialization. Header row:
//   n,model,method,alpha,k0,k,mean,bias,mse,coverage,avg_length,failures
// Floats carry 10 significant digits; fields containing commas are quoted.
std::string report_to_csv(const ExperimentReport& report);
ExperimentReport report_from_csv(std::string_view csv);

std::string format_double(double v);  // "%.10g"

}  // namespace tailfrac
