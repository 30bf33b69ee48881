#include "config_json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

#include <tailfrac/errors.hpp>
#include <tailfrac/version.hpp>

namespace tailfrac::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw parameter_error("unknown key '" + it.key() + "' in " + where);
        }
    }
}

KRule k_rule_from_json(const json& j) {
    reject_unknown_keys(j, {"type", "value"}, "k_rule");
    const std::string type = j.at("type").get<std::string>();
    KRule rule;
    if (type == "fixed_fraction") {
        rule.kind = KRule::Kind::FixedFraction;
    } else if (type == "power") {
        rule.kind = KRule::Kind::Power;
    } else if (type == "explicit") {
        rule.kind = KRule::Kind::Explicit;
    } else {
        throw parameter_error("unknown k_rule type '" + type + "'");
    }
    rule.value = j.at("value").get<double>();
    return rule;
}

K0Rule k0_rule_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    K0Rule rule;
    if (type == "theorem_opt") {
        reject_unknown_keys(j, {"type", "raise_to_bounded"}, "k0_rule");
        rule.kind = K0Rule::Kind::TheoremOpt;
        rule.raise_to_bounded = j.value("raise_to_bounded", false);
    } else if (type == "power") {
        reject_unknown_keys(j, {"type", "value", "scale", "raise_to_bounded"}, "k0_rule");
        rule.kind = K0Rule::Kind::Power;
        rule.value = j.at("value").get<double>();
        rule.scale = j.value("scale", 1.0);
        rule.raise_to_bounded = j.value("raise_to_bounded", false);
    } else if (type == "explicit") {
        reject_unknown_keys(j, {"type", "value"}, "k0_rule");
        rule.kind = K0Rule::Kind::Explicit;
        rule.value = j.at("value").get<double>();
    } else if (type == "sweep") {
        reject_unknown_keys(j, {"type", "lo", "hi", "step"}, "k0_rule");
        rule.kind = K0Rule::Kind::Sweep;
        rule.lo = j.at("lo").get<int>();
        rule.hi = j.at("hi").get<int>();
        rule.step = j.value("step", 1);
    } else {
        throw parameter_error("unknown k0_rule type '" + type + "'");
    }
    return rule;
}

json k_rule_to_json(const KRule& rule) {
    switch (rule.kind) {
        case KRule::Kind::FixedFraction:
            return {{"type", "fixed_fraction"}, {"value", rule.value}};
        case KRule::Kind::Power:
            return {{"type", "power"}, {"value", rule.value}};
        case KRule::Kind::Explicit:
            return {{"type", "explicit"}, {"value", rule.value}};
    }
    return {};
}

json k0_rule_to_json(const K0Rule& rule) {
    switch (rule.kind) {
        case K0Rule::Kind::TheoremOpt:
            return {{"type", "theorem_opt"}, {"raise_to_bounded", rule.raise_to_bounded}};
        case K0Rule::Kind::Power:
            return {{"type", "power"},
                    {"value", rule.value},
                    {"scale", rule.scale},
                    {"raise_to_bounded", rule.raise_to_bounded}};
        case K0Rule::Kind::Explicit:
            return {{"type", "explicit"}, {"value", rule.value}};
        case K0Rule::Kind::Sweep:
            return {{"type", "sweep"}, {"lo", rule.lo}, {"hi", rule.hi}, {"step", rule.step}};
    }
    return {};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"schema_version", "model", "n_values", "replications", "base_seed",
                         "k_rule", "k0_rule", "alphas", "level", "alpha0_mode", "debug_shift",
                         "workers"},
                        "config");
    const int schema = j.at("schema_version").get<int>();
    if (schema != kReportSchemaVersion) {
        throw parameter_error("unsupported schema_version " + std::to_string(schema));
    }

    ExperimentConfig cfg;
    cfg.model = TailModel::parse(j.at("model").get<std::string>());
    cfg.n_values = j.at("n_values").get<std::vector<int>>();
    cfg.replications = j.at("replications").get<int>();
    cfg.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("k_rule")) cfg.k_rule = k_rule_from_json(j.at("k_rule"));
    if (j.contains("k0_rule")) cfg.k0_rule = k0_rule_from_json(j.at("k0_rule"));
    if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
    cfg.level = j.value("level", 0.95);
    if (j.contains("alpha0_mode")) {
        const std::string mode = j.at("alpha0_mode").get<std::string>();
        if (mode == "oracle_true_gamma") {
            cfg.alpha0_mode = Alpha0Mode::OracleTrueGamma;
        } else if (mode == "pilot_plugin") {
            cfg.alpha0_mode = Alpha0Mode::PilotPlugin;
        } else {
            throw parameter_error("unknown alpha0_mode '" + mode + "'");
        }
    }
    cfg.debug_shift = j.value("debug_shift", 0.0);
    cfg.workers = j.value("workers", 1);
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = cfg.model.id();
    j["n_values"] = cfg.n_values;
    j["replications"] = cfg.replications;
    j["base_seed"] = cfg.base_seed;
    j["k_rule"] = k_rule_to_json(cfg.k_rule);
    j["k0_rule"] = k0_rule_to_json(cfg.k0_rule);
    j["alphas"] = cfg.alphas;
    j["level"] = cfg.level;
    j["alpha0_mode"] =
        cfg.alpha0_mode == Alpha0Mode::OracleTrueGamma ? "oracle_true_gamma" : "pilot_plugin";
    j["debug_shift"] = cfg.debug_shift;
    j["workers"] = cfg.workers;
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parameter_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

void write_manifest(const std::string& output_path, const std::string& command,
                    const json& config, std::uint64_t seed) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["output_path"] = output_path;
    manifest["emitted_at"] = utc_timestamp();
    manifest["tool_version"] = kToolVersion;
    manifest["seed"] = seed;
    const std::string path = output_path + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw parameter_error("cannot write manifest '" + path + "'");
    out << manifest.dump(2) << '\n';
}

}  // namespace tailfrac::cli
