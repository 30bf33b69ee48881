// tailfrac: tail-index estimation from data files plus the seeded
// simulation campaigns behind the report tables and figures.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tailfrac/asymptotics.hpp>
#include <tailfrac/errors.hpp>
#include <tailfrac/estimators.hpp>
#include <tailfrac/inference.hpp>
#include <tailfrac/models.hpp>
#include <tailfrac/montecarlo.hpp>
#include <tailfrac/version.hpp>

#include "config_json.hpp"

namespace {

using namespace tailfrac;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitExcessFailures = 4;

// One numeric value per line; '#' starts a comment; blank lines are skipped.
std::vector<double> read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("cannot open input file '" + path + "'");
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string token;
        std::istringstream stream(line);
        if (!(stream >> token)) continue;  // blank or comment-only line
        std::string extra;
        if (stream >> extra) {
            throw parameter_error("line " + std::to_string(line_no) +
                                  ": expected one value per line");
        }
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw parameter_error("line " + std::to_string(line_no) +
                                  ": cannot parse '" + token + "' as a number");
        }
        if (!std::isfinite(v)) {
            throw parameter_error("line " + std::to_string(line_no) +
                                  ": value is not finite");
        }
        values.push_back(v);
    }
    return values;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw parameter_error("cannot write output file '" + path + "'");
    out << content;
}

int clamp_k0(double raw, int k) {
    return static_cast<int>(std::clamp(std::floor(raw), 1.0, static_cast<double>(k - 1)));
}

struct EstimateFlags {
    std::string input;
    int k = 0;
    int k0 = 0;
    std::vector<double> alphas;
    double level = 0.0;  // 0 = no intervals
    double shift = 0.0;
    std::string out;
};

std::string ci_suffix(const ConfidenceInterval& ci) {
    std::string text = " ci_lower=" + format_double(ci.lower);
    text += " ci_upper=";
    text += ci.unbounded_above ? "inf" : format_double(ci.upper);
    text += " level=" + format_double(ci.level);
    return text;
}

int cmd_estimate(const EstimateFlags& flags) {
    std::vector<double> values;
    try {
        values = read_data_file(flags.input);
        if (values.size() < 50) {
            throw parameter_error("need at least 50 finite values, got " +
                                  std::to_string(values.size()));
        }
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    if (flags.shift != 0.0) {
        for (auto& v : values) v += flags.shift;
    }
    const int n = static_cast<int>(values.size());
    const Sample s{std::move(values)};

    const int k = flags.k > 0 ? flags.k : n / 2;
    if (k < 2 || k >= n) {
        std::cerr << "error: k must satisfy 2 <= k < n (k=" << k << ", n=" << n << ")\n";
        return kExitInfeasible;
    }

    // Pilot estimate at alpha = 1 drives the plug-in alpha0 and the default k0.
    double pilot = 0.0;
    std::optional<double> alpha0_plugin;
    try {
        pilot = gamma_hat(s, {clamp_k0(std::pow(k, 2.0 / 3.0), k), k}, 1.0).value;
        if (pilot > 0.0) alpha0_plugin = alpha0(pilot);
    } catch (const std::exception&) {
        // fall through: plug-in alpha0 simply unavailable
    }

    int k0 = flags.k0;
    if (k0 <= 0) {
        const double expo = pilot > 0.0 ? 2.0 * pilot / (2.0 * pilot + 1.0) : 2.0 / 3.0;
        k0 = clamp_k0(std::pow(k, expo), k);
    } else if (k0 >= k) {
        std::cerr << "error: k0 must satisfy k0 < k (k0=" << k0 << ", k=" << k << ")\n";
        return kExitInfeasible;
    }

    std::vector<double> alphas = flags.alphas;
    if (alphas.empty()) {
        alphas.push_back(1.0);
        if (alpha0_plugin) alphas.push_back(*alpha0_plugin);
    }
    for (double a : alphas) {
        if (!(a >= 1.0)) {
            std::cerr << "error: alpha must be >= 1, got " << a << '\n';
            return kExitInfeasible;
        }
    }

    std::string csv = "method,alpha,k0,k,estimate,ci_lower,ci_upper,level\n";
    const auto emit = [&](const std::string& method, std::optional<double> alpha,
                          std::optional<int> row_k0, double value,
                          const std::optional<ConfidenceInterval>& ci) {
        std::cout << "method=" << method;
        if (alpha) std::cout << " alpha=" << format_double(*alpha);
        if (row_k0) std::cout << " k0=" << *row_k0;
        std::cout << " k=" << k << " estimate=" << format_double(value);
        if (ci) std::cout << ci_suffix(*ci);
        std::cout << '\n';
        csv += method;
        csv += ',';
        csv += alpha ? format_double(*alpha) : "";
        csv += ',';
        csv += row_k0 ? std::to_string(*row_k0) : "";
        csv += ',' + std::to_string(k) + ',' + format_double(value) + ',';
        if (ci) {
            csv += format_double(ci->lower);
            csv += ',';
            csv += ci->unbounded_above ? "inf" : format_double(ci->upper);
            csv += ',' + format_double(ci->level);
        } else {
            csv += ",,";
        }
        csv += '\n';
    };
    const auto emit_error = [](const std::string& method, const std::exception& e) {
        std::cout << "method=" << method << " error=\"" << e.what() << "\"\n";
    };

    try {
        emit("hill", {}, {}, hill(s, k), {});
    } catch (const std::exception& e) {
        emit_error("hill", e);
    }
    try {
        emit("moment", {}, {}, moment(s, k), {});
    } catch (const std::exception& e) {
        emit_error("moment", e);
    }
    try {
        const double fa = fraga_alves(s, {k0, k});
        std::optional<ConfidenceInterval> ci;
        if (flags.level > 0.0) ci = ci_fraga_alves(fa, k0, flags.level);
        emit("fraga_alves", {}, k0, fa, ci);
    } catch (const std::exception& e) {
        emit_error("fraga_alves", e);
    }
    for (double alpha : alphas) {
        try {
            const Estimate est = gamma_hat(s, {k0, k}, alpha);
            std::optional<ConfidenceInterval> ci;
            if (flags.level > 0.0) ci = ci_new(est.value, k0, alpha, flags.level);
            emit("new_family", alpha, k0, est.value, ci);
        } catch (const std::exception& e) {
            emit_error("new_family", e);
        }
    }

    if (!flags.out.empty()) {
        write_text_file(flags.out, csv);
        nlohmann::json params;
        params["input"] = flags.input;
        params["k"] = k;
        params["k0"] = k0;
        params["alphas"] = alphas;
        params["level"] = flags.level;
        params["shift"] = flags.shift;
        cli::write_manifest(flags.out, "estimate", params, 0);
    }
    return kExitOk;
}

int cmd_table_alpha0(const std::vector<double>& custom, const std::string& out) {
    std::vector<double> grid = {0.1, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
    grid.insert(grid.end(), custom.begin(), custom.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::string csv = "gamma,alpha0\n";
    for (double g : grid) {
        if (!(g > 0.0)) {
            std::cerr << "error: gamma grid values must be positive\n";
            return kExitInputError;
        }
        csv += format_double(g) + "," + format_double(alpha0(g)) + "\n";
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out, csv);
        nlohmann::json params;
        params["gammas"] = grid;
        cli::write_manifest(out, "table-alpha0", params, 0);
    }
    return kExitOk;
}

struct SimulateFlags {
    std::string config_path;
    std::string out;
    std::string plot_out;
    std::string model;
    std::vector<int> n_values;
    int reps = 0;
    double level = 0.0;
    std::vector<double> alphas;
    int workers = 0;
    std::optional<std::uint64_t> seed;
};

// Precedence for the base seed: --seed flag, then TAILFRAC_SEED, then config.
void apply_seed_override(ExperimentConfig& cfg, const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) {
        cfg.base_seed = *flag_seed;
        return;
    }
    if (const char* env = std::getenv("TAILFRAC_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            throw parameter_error("TAILFRAC_SEED is not an unsigned integer");
        }
        cfg.base_seed = v;
    }
}

ExperimentConfig resolve_simulate_config(const SimulateFlags& flags) {
    if (flags.config_path.empty()) {
        throw parameter_error("simulate needs --config <file>");
    }
    ExperimentConfig cfg = cli::load_config_file(flags.config_path);
    if (!flags.model.empty()) cfg.model = TailModel::parse(flags.model);
    if (!flags.n_values.empty()) cfg.n_values = flags.n_values;
    if (flags.reps > 0) cfg.replications = flags.reps;
    if (flags.level > 0.0) cfg.level = flags.level;
    if (!flags.alphas.empty()) cfg.alphas = flags.alphas;
    if (flags.workers > 0) cfg.workers = flags.workers;
    apply_seed_override(cfg, flags.seed);
    cfg.validate();
    return cfg;
}

// Wide, plot-ready layout: one k0 column plus mean/mse columns per series.
std::string pivot_by_k0(const ExperimentReport& report) {
    std::vector<std::string> series;
    std::set<int> k0s;
    std::map<std::pair<int, std::string>, std::pair<double, double>> cells;
    for (const auto& row : report.rows) {
        std::string id = row.method;
        if (row.alpha) id += "_a" + format_double(*row.alpha);
        if (std::find(series.begin(), series.end(), id) == series.end()) series.push_back(id);
        k0s.insert(row.k0);
        cells[{row.k0, id}] = {row.mean, row.mse};
    }
    std::string csv = "k0";
    for (const auto& id : series) csv += ",mean:" + id + ",mse:" + id;
    csv += '\n';
    for (int k0 : k0s) {
        csv += std::to_string(k0);
        for (const auto& id : series) {
            const auto it = cells.find({k0, id});
            if (it == cells.end()) {
                csv += ",,";
            } else {
                csv += ',' + format_double(it->second.first) + ',' +
                       format_double(it->second.second);
            }
        }
        csv += '\n';
    }
    return csv;
}

int cmd_simulate(const std::string& which, const SimulateFlags& flags) {
    ExperimentConfig cfg;
    try {
        cfg = resolve_simulate_config(flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (flags.out.empty()) {
        std::cerr << "error: simulate needs --out <file>\n";
        return kExitInputError;
    }

    try {
        ExperimentReport report;
        if (which == "paths") {
            const int n = cfg.n_values.at(0);
            const int k = resolve_k(cfg.k_rule, n);
            report = run_paths(cfg, sweep_values(cfg.k0_rule, k));
        } else if (which == "grid") {
            report = run_grid(cfg);
        } else {
            report = run_coverage(cfg);
        }
        write_text_file(flags.out, report_to_csv(report));
        if (!flags.plot_out.empty()) {
            write_text_file(flags.plot_out, pivot_by_k0(report));
        }
        cli::write_manifest(flags.out, "simulate " + which, cli::config_to_json(cfg),
                            cfg.base_seed);
    } catch (const excess_failure_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitExcessFailures;
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_areff(const std::string& model_spec, const std::string& out, double step) {
    if (model_spec.empty()) {
        std::cerr << "error: areff needs --model\n";
        return kExitInputError;
    }
    try {
        const TailModel model = TailModel::parse(model_spec);
        const double gamma = true_params(model).gamma;
        const double limit = alpha0(gamma);
        std::string csv = "gamma,alpha,areff\n";
        for (double alpha = 1.0; alpha < limit; alpha += step) {
            try {
                csv += format_double(gamma) + "," + format_double(alpha) + "," +
                       format_double(areff(alpha, gamma)) + "\n";
            } catch (const null_bias_error&) {
                // alpha landed on the null-bias root; nothing to report there
            }
        }
        if (out.empty()) {
            std::cout << csv;
        } else {
            write_text_file(out, csv);
            nlohmann::json params;
            params["model"] = model.id();
            params["alpha_step"] = step;
            cli::write_manifest(out, "simulate areff", params, 0);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"location-invariant tail-index estimation and simulation"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    EstimateFlags est;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "estimate the tail index from a data file (one value per line)");
    estimate->add_option("input", est.input, "data file")->required();
    estimate->add_option("--k", est.k, "larger intermediate count (default n/2)");
    estimate->add_option("--k0", est.k0, "smaller intermediate count (default k^(2g/(2g+1)))");
    estimate->add_option("--alpha", est.alphas,
                         "tuning parameters (default: 1 and the plug-in null-bias value)");
    estimate->add_option("--level", est.level, "confidence level for intervals");
    estimate->add_option("--shift", est.shift, "add a constant to every observation");
    estimate->add_option("--out", est.out, "write estimates as CSV");

    std::vector<double> table_gammas;
    std::string table_out;
    CLI::App* table = app.add_subcommand("table-alpha0",
                                         "emit the gamma -> alpha0 table as CSV");
    table->add_option("--gammas", table_gammas, "extra gamma grid points");
    table->add_option("--out", table_out, "output CSV (default stdout)");

    SimulateFlags sim;
    std::string areff_model, areff_out;
    double areff_step = 0.01;
    CLI::App* simulate =
        app.add_subcommand("simulate", "run a seeded simulation campaign");
    simulate->require_subcommand(1);
    CLI::App* paths = simulate->add_subcommand("paths", "tuned-family sample paths over k0");
    CLI::App* grid = simulate->add_subcommand(
        "grid", "mean/MSE versus k0 for the baseline and tuned estimators");
    CLI::App* coverage =
        simulate->add_subcommand("coverage", "confidence-interval coverage and length");
    CLI::App* areff_cmd = simulate->add_subcommand(
        "areff", "asymptotic relative efficiency sweep over alpha");
    for (CLI::App* sub : {paths, grid, coverage}) {
        sub->add_option("--config", sim.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", sim.out, "report CSV path")->required();
        sub->add_option("--plot-out", sim.plot_out, "wide plot-ready CSV path");
        sub->add_option("--model", sim.model, "override the config model");
        sub->add_option("--n", sim.n_values, "override the config sample sizes");
        sub->add_option("--reps", sim.reps, "override the config replication count");
        sub->add_option("--level", sim.level, "override the config confidence level");
        sub->add_option("--alpha", sim.alphas, "override the config alpha list");
        sub->add_option("--workers", sim.workers, "worker threads");
        sub->add_option("--seed", sim.seed, "base seed (wins over TAILFRAC_SEED)");
    }
    areff_cmd->add_option("--model", areff_model, "model giving the true gamma")->required();
    areff_cmd->add_option("--out", areff_out, "output CSV (default stdout)");
    areff_cmd->add_option("--alpha-step", areff_step, "sweep step (default 0.01)");

    CLI11_PARSE(app, argc, argv);

    if (*estimate) return cmd_estimate(est);
    if (*table) return cmd_table_alpha0(table_gammas, table_out);
    if (*simulate) {
        if (*areff_cmd) return cmd_areff(areff_model, areff_out, areff_step);
        if (*paths) return cmd_simulate("paths", sim);
        if (*grid) return cmd_simulate("grid", sim);
        return cmd_simulate("coverage", sim);
    }
    return kExitOk;
}
