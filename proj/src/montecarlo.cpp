#include <tailfrac/montecarlo.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <tailfrac/asymptotics.hpp>
#include <tailfrac/detail/kahan.hpp>
#include <tailfrac/errors.hpp>

namespace tailfrac {

namespace {

// Stream tag for the data draws of a replication.
constexpr std::uint64_t kSampleStreamTag = 0x53414D50ULL;

constexpr double kMaxFailureShare = 0.01;

double nan_marker() { return std::numeric_limits<double>::quiet_NaN(); }

// Runs body(rep) for every replication. Work distribution is dynamic, but
// each replication writes only its own slots and aggregation happens in
// replication order afterwards, so reports do not depend on the worker
// count or scheduling.
void run_replications(int replications, int workers, const std::function<void(int)>& body) {
    workers = std::clamp(workers, 1, replications);
    if (workers == 1) {
        for (int rep = 0; rep < replications; ++rep) body(rep);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (int rep = next.fetch_add(1); rep < replications;
                     rep = next.fetch_add(1)) {
                    body(rep);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
                next.store(replications);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (!first_error.empty()) throw std::runtime_error(first_error);
}

Sample draw_sample(const ExperimentConfig& cfg, int n, int rep) {
    RandomStream stream =
        RandomStream::for_replication(cfg.base_seed, static_cast<std::uint64_t>(rep),
                                      kSampleStreamTag);
    Sample s = sample(cfg.model, static_cast<std::size_t>(n), stream);
    if (cfg.debug_shift != 0.0) s = s.shifted(cfg.debug_shift);
    return s;
}

struct RowStats {
    double mean = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    int failures = 0;
};

RowStats aggregate(const std::vector<double>& per_rep, double gamma_true) {
    detail::KahanSum sum;
    int good = 0;
    for (double v : per_rep) {
        if (std::isnan(v)) continue;
        sum.add(v);
        ++good;
    }
    RowStats stats;
    stats.failures = static_cast<int>(per_rep.size()) - good;
    if (good == 0) {
        stats.mean = stats.bias = stats.mse = nan_marker();
        return stats;
    }
    stats.mean = sum.value() / good;
    stats.bias = stats.mean - gamma_true;
    detail::KahanSum squares;
    for (double v : per_rep) {
        if (std::isnan(v)) continue;
        const double d = v - gamma_true;
        squares.add(d * d);
    }
    stats.mse = squares.value() / good;
    return stats;
}

double mean_ignoring_nan(const std::vector<double>& values) {
    detail::KahanSum sum;
    int good = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum.add(v);
        ++good;
    }
    return good > 0 ? sum.value() / good : nan_marker();
}

void enforce_failure_budget(const ExperimentReport& report, int replications) {
    for (const auto& row : report.rows) {
        if (row.failures > kMaxFailureShare * replications) {
            throw excess_failure_error("method " + row.method + " at n=" +
                                       std::to_string(row.n) + ", k0=" +
                                       std::to_string(row.k0) + " failed " +
                                       std::to_string(row.failures) + " of " +
                                       std::to_string(replications) + " replications");
        }
    }
}

void sort_rows(ExperimentReport& report) {
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ReportRow& a, const ReportRow& b) {
                         const double aa = a.alpha.value_or(-1.0);
                         const double ba = b.alpha.value_or(-1.0);
                         return std::tie(a.n, a.method, aa, a.k0) <
                                std::tie(b.n, b.method, ba, b.k0);
                     });
}

void require_single_n(const ExperimentConfig& cfg, const char* who) {
    if (cfg.n_values.size() != 1) {
        throw parameter_error(std::string(who) + " needs exactly one sample size n");
    }
}

// Estimator outcomes that count as a failed replication rather than a bug.
template <typename Fn>
double guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const tie_error&) {
    } catch (const degenerate_sample_error&) {
    } catch (const null_bias_error&) {
    } catch (const std::domain_error&) {
    }
    return nan_marker();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_values.empty()) throw parameter_error("config needs at least one n");
    for (int n : n_values) {
        if (n < 50) throw parameter_error("every n must be >= 50");
    }
    if (replications < 1) throw parameter_error("replications must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw parameter_error("level must lie in (0, 1)");
    if (workers < 1) throw parameter_error("workers must be >= 1");
    for (double a : alphas) {
        if (!(a >= 1.0)) throw parameter_error("every alpha must be >= 1");
    }
    switch (k_rule.kind) {
        case KRule::Kind::FixedFraction:
        case KRule::Kind::Power:
            if (!(k_rule.value > 0.0 && k_rule.value < 1.0)) {
                throw parameter_error("k rule fraction/exponent must lie in (0, 1)");
            }
            break;
        case KRule::Kind::Explicit:
            if (!(k_rule.value >= 2.0)) throw parameter_error("explicit k must be >= 2");
            break;
    }
    switch (k0_rule.kind) {
        case K0Rule::Kind::Power:
            if (!(k0_rule.value > 0.0 && k0_rule.value < 1.0)) {
                throw parameter_error("k0 rule exponent must lie in (0, 1)");
            }
            if (!(k0_rule.scale > 0.0)) {
                throw parameter_error("k0 rule scale must be positive");
            }
            break;
        case K0Rule::Kind::Explicit:
            if (!(k0_rule.value >= 1.0)) throw parameter_error("explicit k0 must be >= 1");
            break;
        case K0Rule::Kind::Sweep:
            if (k0_rule.lo < 1 || k0_rule.hi < k0_rule.lo || k0_rule.step < 1) {
                throw parameter_error("k0 sweep needs 1 <= lo <= hi and step >= 1");
            }
            break;
        case K0Rule::Kind::TheoremOpt:
            break;
    }
}

int resolve_k(const KRule& rule, int n) {
    double raw = 0.0;
    switch (rule.kind) {
        case KRule::Kind::FixedFraction:
            raw = std::floor(n * rule.value);
            break;
        case KRule::Kind::Power:
            raw = std::floor(std::pow(n, rule.value));
            break;
        case KRule::Kind::Explicit:
            if (!(rule.value >= 2.0 && rule.value <= n - 1.0)) {
                throw parameter_error("explicit k must satisfy 2 <= k < n");
            }
            return static_cast<int>(rule.value);
    }
    return static_cast<int>(std::clamp(raw, 2.0, n - 1.0));
}

int resolve_k0(const K0Rule& rule, int k, int n, const TailModel& model) {
    switch (rule.kind) {
        case K0Rule::Kind::TheoremOpt: {
            const SecondOrderTriple& so = true_params(model);
            AsymptoticContext ctx{so.gamma, so.rho, so.c, 1.0};
            return round_k0(k0_opt_select(ctx, k, n).value, k);
        }
        case K0Rule::Kind::Power: {
            const double raw = std::floor(rule.scale * std::pow(k, rule.value));
            return static_cast<int>(std::clamp(raw, 1.0, k - 1.0));
        }
        case K0Rule::Kind::Explicit:
            if (!(rule.value >= 1.0 && rule.value <= k - 1.0)) {
                throw parameter_error("explicit k0 must satisfy 1 <= k0 < k");
            }
            return static_cast<int>(rule.value);
        case K0Rule::Kind::Sweep:
            throw parameter_error("a k0 sweep has no single k0; use sweep_values");
    }
    throw parameter_error("unknown k0 rule");
}

std::vector<int> sweep_values(const K0Rule& rule, int k) {
    if (rule.kind != K0Rule::Kind::Sweep) {
        throw parameter_error("k0 rule is not a sweep");
    }
    std::vector<int> values;
    for (int v = rule.lo; v <= rule.hi && v < k; v += rule.step) {
        if (v >= 1) values.push_back(v);
    }
    if (values.empty()) {
        throw parameter_error("k0 sweep is empty after clamping to k");
    }
    return values;
}

ExperimentReport run_paths(const ExperimentConfig& cfg, const std::vector<int>& k0_sweep) {
    cfg.validate();
    require_single_n(cfg, "run_paths");
    if (cfg.alphas.empty()) throw parameter_error("run_paths needs at least one alpha");
    if (k0_sweep.empty()) throw parameter_error("run_paths needs a nonempty k0 sweep");

    const int n = cfg.n_values.front();
    const int k = resolve_k(cfg.k_rule, n);
    for (int k0 : k0_sweep) {
        if (k0 < 1 || k0 >= k) {
            throw parameter_error("sweep k0=" + std::to_string(k0) +
                                  " violates 1 <= k0 < k=" + std::to_string(k));
        }
    }
    const double gamma_true = true_params(cfg.model).gamma;

    const std::size_t n_rows = cfg.alphas.size() * k0_sweep.size();
    std::vector<std::vector<double>> results(n_rows,
                                             std::vector<double>(cfg.replications));

    run_replications(cfg.replications, cfg.workers, [&](int rep) {
        const Sample s = draw_sample(cfg, n, rep);
        std::size_t row = 0;
        for (double alpha : cfg.alphas) {
            for (int k0 : k0_sweep) {
                results[row++][rep] =
                    guarded([&] { return gamma_hat(s, {k0, k}, alpha).value; });
            }
        }
    });

    ExperimentReport report;
    report.seed = cfg.base_seed;
    std::size_t row = 0;
    for (double alpha : cfg.alphas) {
        for (int k0 : k0_sweep) {
            const RowStats stats = aggregate(results[row++], gamma_true);
            report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::NewFamily)),
                                   alpha, k0, k, stats.mean, stats.bias, stats.mse, {}, {},
                                   stats.failures});
        }
    }
    sort_rows(report);
    enforce_failure_budget(report, cfg.replications);
    return report;
}

ExperimentReport run_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    require_single_n(cfg, "run_grid");
    const int n = cfg.n_values.front();
    const int k = resolve_k(cfg.k_rule, n);
    const std::vector<int> sweep = sweep_values(cfg.k0_rule, k);
    const double gamma_true = true_params(cfg.model).gamma;
    const bool oracle = cfg.alpha0_mode == Alpha0Mode::OracleTrueGamma;
    const double alpha_tuned = oracle ? alpha0(gamma_true) : 0.0;

    // methods: 0 = fraga_alves, 1 = new family alpha = 1, 2 = new family at alpha0
    const std::size_t n_k0 = sweep.size();
    std::vector<std::vector<double>> results(3 * n_k0,
                                             std::vector<double>(cfg.replications));
    std::vector<std::vector<double>> used_alpha(n_k0, std::vector<double>(cfg.replications));

    run_replications(cfg.replications, cfg.workers, [&](int rep) {
        const Sample s = draw_sample(cfg, n, rep);
        for (std::size_t j = 0; j < n_k0; ++j) {
            const FractionPair fp{sweep[j], k};
            results[j][rep] = guarded([&] { return fraga_alves(s, fp); });
            results[n_k0 + j][rep] = guarded([&] { return gamma_hat(s, fp, 1.0).value; });
            double alpha_rep = alpha_tuned;
            results[2 * n_k0 + j][rep] = guarded([&] {
                if (!oracle) {
                    const double pilot = gamma_hat(s, fp, 1.0).value;
                    alpha_rep = alpha0(pilot);
                }
                return gamma_hat(s, fp, alpha_rep).value;
            });
            used_alpha[j][rep] =
                std::isnan(results[2 * n_k0 + j][rep]) ? nan_marker() : alpha_rep;
        }
    });

    ExperimentReport report;
    report.seed = cfg.base_seed;
    for (std::size_t j = 0; j < n_k0; ++j) {
        const RowStats fa = aggregate(results[j], gamma_true);
        report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::FragaAlves)),
                               {}, sweep[j], k, fa.mean, fa.bias, fa.mse, {}, {},
                               fa.failures});
        const RowStats one = aggregate(results[n_k0 + j], gamma_true);
        report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::NewFamily)),
                               1.0, sweep[j], k, one.mean, one.bias, one.mse, {}, {},
                               one.failures});
        const RowStats tuned = aggregate(results[2 * n_k0 + j], gamma_true);
        report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::NewFamily)),
                               mean_ignoring_nan(used_alpha[j]), sweep[j], k, tuned.mean,
                               tuned.bias, tuned.mse, {}, {}, tuned.failures});
    }
    sort_rows(report);
    enforce_failure_budget(report, cfg.replications);
    return report;
}

K0Rule coverage_default_k0_rule(const TailModel& model) {
    const double gamma = true_params(model).gamma;
    K0Rule rule;
    rule.kind = K0Rule::Kind::Power;
    rule.value = 2.0 * gamma / (2.0 * gamma + 1.0);
    rule.scale = 2.0;
    rule.raise_to_bounded = true;
    return rule;
}

ExperimentReport run_coverage(const ExperimentConfig& cfg) {
    cfg.validate();
    const double gamma_true = true_params(cfg.model).gamma;
    const bool oracle = cfg.alpha0_mode == Alpha0Mode::OracleTrueGamma;
    const double alpha_tuned = oracle ? alpha0(gamma_true) : 0.0;

    // Smallest k0 at which the tuned interval stays bounded at this level; a
    // rule-derived k0 below it would flag every replication unbounded and
    // leave the average length undefined. Explicit k0 choices are respected.
    int bounded_floor = 0;
    if (oracle && cfg.k0_rule.raise_to_bounded &&
        cfg.k0_rule.kind != K0Rule::Kind::Explicit) {
        const double z = z_quantile((1.0 - cfg.level) / 2.0);
        bounded_floor = static_cast<int>(std::ceil(1.2 * v_alpha(alpha_tuned) * z * z));
    }

    ExperimentReport report;
    report.seed = cfg.base_seed;

    for (int n : cfg.n_values) {
        const int k = resolve_k(cfg.k_rule, n);
        int k0 = resolve_k0(cfg.k0_rule, k, n, cfg.model);
        // only raise k0 where a bounded interval is reachable without
        // pushing k0 against k itself
        if (k0 < bounded_floor && bounded_floor <= 4 * k / 5) k0 = bounded_floor;
        const FractionPair fp{k0, k};

        const int reps = cfg.replications;
        std::vector<double> fa_value(reps), fa_cover(reps), fa_length(reps);
        std::vector<double> nf_value(reps), nf_cover(reps), nf_length(reps);
        std::vector<double> nf_alpha(reps);

        run_replications(reps, cfg.workers, [&](int rep) {
            const Sample s = draw_sample(cfg, n, rep);

            fa_value[rep] = guarded([&] { return fraga_alves(s, fp); });
            fa_cover[rep] = fa_length[rep] = nan_marker();
            if (!std::isnan(fa_value[rep])) {
                const double covered = guarded([&] {
                    const ConfidenceInterval ci = ci_fraga_alves(fa_value[rep], k0, cfg.level);
                    fa_length[rep] = ci.unbounded_above ? nan_marker() : ci.length();
                    return ci.contains(gamma_true) ? 1.0 : 0.0;
                });
                if (std::isnan(covered)) {
                    fa_value[rep] = nan_marker();  // interval construction failed
                } else {
                    fa_cover[rep] = covered;
                }
            }

            nf_cover[rep] = nf_length[rep] = nf_alpha[rep] = nan_marker();
            double alpha_rep = alpha_tuned;
            nf_value[rep] = guarded([&] {
                if (!oracle) {
                    const double pilot = gamma_hat(s, fp, 1.0).value;
                    alpha_rep = alpha0(pilot);
                }
                return gamma_hat(s, fp, alpha_rep).value;
            });
            if (!std::isnan(nf_value[rep])) {
                const double covered = guarded([&] {
                    const ConfidenceInterval ci =
                        ci_new(nf_value[rep], k0, alpha_rep, cfg.level);
                    nf_length[rep] = ci.unbounded_above ? nan_marker() : ci.length();
                    return ci.contains(gamma_true) ? 1.0 : 0.0;
                });
                if (std::isnan(covered)) {
                    nf_value[rep] = nan_marker();
                } else {
                    nf_cover[rep] = covered;
                    nf_alpha[rep] = alpha_rep;
                }
            }
        });

        const RowStats fa = aggregate(fa_value, gamma_true);
        report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::FragaAlves)),
                               {}, k0, k, fa.mean, fa.bias, fa.mse,
                               mean_ignoring_nan(fa_cover), mean_ignoring_nan(fa_length),
                               fa.failures});
        const RowStats nf = aggregate(nf_value, gamma_true);
        report.rows.push_back({n, cfg.model.id(), std::string(method_id(Method::NewFamily)),
                               mean_ignoring_nan(nf_alpha), k0, k, nf.mean, nf.bias, nf.mse,
                               mean_ignoring_nan(nf_cover), mean_ignoring_nan(nf_length),
                               nf.failures});
    }
    sort_rows(report);
    enforce_failure_budget(report, cfg.replications);
    return report;
}

int empirical_k0_opt(const ExperimentConfig& cfg, const EstimatorFn& estimator,
                     const std::vector<int>& k0_sweep) {
    cfg.validate();
    require_single_n(cfg, "empirical_k0_opt");
    if (k0_sweep.empty()) throw parameter_error("empirical_k0_opt needs a nonempty sweep");

    const int n = cfg.n_values.front();
    const int k = resolve_k(cfg.k_rule, n);
    const double gamma_true = true_params(cfg.model).gamma;

    std::vector<std::vector<double>> results(k0_sweep.size(),
                                             std::vector<double>(cfg.replications));
    run_replications(cfg.replications, cfg.workers, [&](int rep) {
        const Sample s = draw_sample(cfg, n, rep);
        for (std::size_t j = 0; j < k0_sweep.size(); ++j) {
            const FractionPair fp{k0_sweep[j], k};
            results[j][rep] = guarded([&] { return estimator(s, fp); });
        }
    });

    int best_k0 = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k0_sweep.size(); ++j) {
        const RowStats stats = aggregate(results[j], gamma_true);
        if (std::isnan(stats.mse)) continue;  // every replication failed here
        if (stats.mse < best_mse) {
            best_mse = stats.mse;
            best_k0 = k0_sweep[j];
        }
    }
    if (best_k0 == 0) {
        throw excess_failure_error("every sweep point failed in empirical_k0_opt");
    }
    return best_k0;
}

}  // namespace tailfrac
