// SPDX-License-Identifier: Apache-2.0
//
// JSON experiment configuration. A file is merged onto a complete default
// document, so every accepted key has a default and anything not in the
// default document is rejected. `--set a.b=v` overrides follow the same rule.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "scnisac/detectors.hpp"
#include "scnisac/error.hpp"
#include "scnisac/powalloc.hpp"
#include "scnisac/scenario.hpp"

namespace scn {

using Json = nlohmann::json;

struct DetectorSettings {
    DetectorKind kind = DetectorKind::SCN;
    double target_pf = 0.05;
    long long calibration_trials = 100000;
};

struct SweepSettings {
    std::vector<double> mu_db{0.0, 2.0, 4.0};
    std::vector<double> tau;
    std::vector<double> p_dbm;
    std::vector<double> r_min;
};

struct ValidateSettings {
    long long trials = 100000;
    long long rate_trials = 1000000;
    std::vector<int> snapshots{2, 4, 8, 16};
    std::vector<double> tau{1.5, 2.0, 3.0, 5.0, 8.0};
    std::vector<double> gamma_e{0.5, 1.0, 2.0, 4.0};
    std::vector<int> n_u{1, 2, 4};
    std::vector<double> rho{0.1, 1.0, 10.0, 100.0};
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    DetectorSettings detector;
    SweepSettings sweep;
    double r_min = 0.0;
    TauSearch tau_search;
    ValidateSettings validate;
};

inline Json default_config_document() {
    return Json::parse(R"({
      "seed": null,
      "snapshots": 16,
      "array": {"n_t": 4, "n_r": 2, "n_u": 4, "theta": 0.0},
      "power": {"p_total_dbm": 10.0, "eta": 0.5, "sigma_h2": 1.0},
      "noise": {"sigma_s2_dbm": -105.0, "sigma_c2_dbm": -105.0, "mu_db": 0.0},
      "target": {"beta": {"re": 1.0, "im": 0.0}},
      "detector": {"kind": "SCN", "trials": 100000, "calibration_trials": 100000,
                   "target_pf": 0.05, "h1_model": "snapshot"},
      "sweep": {"mu_db": [0.0, 2.0, 4.0], "tau": [], "p_dbm": [], "r_min": []},
      "allocation": {"r_min": 0.0, "tau_lo": 1.001, "tau_hi": 100.0, "tau_tol": 1e-6},
      "validate": {"trials": 100000, "rate_trials": 1000000, "snapshots": [2, 4, 8, 16],
                   "tau": [1.5, 2, 3, 5, 8], "gamma_e": [0.5, 1, 2, 4],
                   "n_u": [1, 2, 4], "rho": [0.1, 1, 10, 100]}
    })");
}

namespace detail {

inline void merge_known(Json& base, const Json& patch, const std::string& prefix) {
    if (!patch.is_object()) throw ConfigError("config: " + (prefix.empty() ? std::string("document") : prefix) +
                                              " must be a JSON object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("config: unknown key '" + key + "'");
        Json& slot = base[it.key()];
        if (slot.is_object())
            merge_known(slot, it.value(), key);
        else
            slot = it.value();
    }
}

inline std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

template <class T>
T field(const Json& doc, const std::string& path) {
    const Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        node = &node->at(path.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    try {
        return node->get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError("config: field '" + path + "' has the wrong type (" + node->type_name() + ")");
    }
}

}  // namespace detail

/// Applies `a.b.c=value` to doc. The value is parsed as JSON when possible
/// and taken as a string otherwise.
inline void apply_override(Json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (!node->is_object() || !node->contains(key)) throw ConfigError("override: unknown key '" + path + "'");
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (node->is_object()) throw ConfigError("override: '" + path + "' names a section, not a value");
    Json value = Json::parse(text, nullptr, false);
    *node = value.is_discarded() ? Json(text) : std::move(value);
}

inline ExperimentConfig config_from_document(const Json& doc) {
    using detail::field;
    ExperimentConfig c;
    ScenarioConfig& s = c.scenario;
    if (doc.at("seed").is_null()) throw ConfigError("config: 'seed' is required");
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("config: 'seed' must be a non-negative integer");
    s.seed = field<std::uint64_t>(doc, "seed");
    s.snapshots = field<int>(doc, "snapshots");
    s.n_t = field<int>(doc, "array.n_t");
    s.n_r = field<int>(doc, "array.n_r");
    s.n_u = field<int>(doc, "array.n_u");
    s.theta = field<double>(doc, "array.theta");
    s.p_total_dbm = field<double>(doc, "power.p_total_dbm");
    s.eta = field<double>(doc, "power.eta");
    s.sigma_h2 = field<double>(doc, "power.sigma_h2");
    s.sigma_s2_dbm = field<double>(doc, "noise.sigma_s2_dbm");
    s.sigma_c2_dbm = field<double>(doc, "noise.sigma_c2_dbm");
    s.mu_db = field<double>(doc, "noise.mu_db");
    s.beta = {field<double>(doc, "target.beta.re"), field<double>(doc, "target.beta.im")};
    s.trials = field<long long>(doc, "detector.trials");

    const auto h1 = field<std::string>(doc, "detector.h1_model");
    if (h1 == "snapshot")
        s.h1_model = H1Model::Snapshot;
    else if (h1 == "noncentral")
        s.h1_model = H1Model::Noncentral;
    else
        throw ConfigError("config: detector.h1_model must be 'snapshot' or 'noncentral'");

    const auto kind = parse_detector(field<std::string>(doc, "detector.kind"));
    if (!kind) throw ConfigError("config: detector.kind must be one of SCN, MaxEig, Energy, LRT");
    c.detector.kind = *kind;
    c.detector.target_pf = field<double>(doc, "detector.target_pf");
    c.detector.calibration_trials = field<long long>(doc, "detector.calibration_trials");
    if (!(c.detector.target_pf > 0.0 && c.detector.target_pf < 1.0))
        throw ConfigError("config: detector.target_pf must lie in (0, 1)");
    if (c.detector.calibration_trials < 1) throw ConfigError("config: detector.calibration_trials must be >= 1");

    c.sweep.mu_db = field<std::vector<double>>(doc, "sweep.mu_db");
    c.sweep.tau = field<std::vector<double>>(doc, "sweep.tau");
    c.sweep.p_dbm = field<std::vector<double>>(doc, "sweep.p_dbm");
    c.sweep.r_min = field<std::vector<double>>(doc, "sweep.r_min");
    for (double mu : c.sweep.mu_db)
        if (!(mu >= 0.0)) throw ConfigError("config: sweep.mu_db entries must be >= 0");
    for (double t : c.sweep.tau)
        if (!(t > 1.0)) throw ConfigError("config: sweep.tau entries must be > 1");
    for (double r : c.sweep.r_min)
        if (!(r >= 0.0)) throw ConfigError("config: sweep.r_min entries must be >= 0");

    c.r_min = field<double>(doc, "allocation.r_min");
    if (!(c.r_min >= 0.0)) throw ConfigError("config: allocation.r_min must be >= 0");
    c.tau_search = {field<double>(doc, "allocation.tau_lo"), field<double>(doc, "allocation.tau_hi"),
                    field<double>(doc, "allocation.tau_tol")};
    c.tau_search.validate();

    c.validate.trials = field<long long>(doc, "validate.trials");
    c.validate.rate_trials = field<long long>(doc, "validate.rate_trials");
    c.validate.snapshots = field<std::vector<int>>(doc, "validate.snapshots");
    c.validate.tau = field<std::vector<double>>(doc, "validate.tau");
    c.validate.gamma_e = field<std::vector<double>>(doc, "validate.gamma_e");
    c.validate.n_u = field<std::vector<int>>(doc, "validate.n_u");
    c.validate.rho = field<std::vector<double>>(doc, "validate.rho");
    if (c.validate.trials < 1 || c.validate.rate_trials < 1) throw ConfigError("config: validate trials must be >= 1");
    for (int L : c.validate.snapshots)
        if (L < 2) throw ConfigError("config: validate.snapshots entries must be >= 2");
    for (double t : c.validate.tau)
        if (!(t > 1.0)) throw ConfigError("config: validate.tau entries must be > 1");
    for (double g : c.validate.gamma_e)
        if (!(g >= 0.0)) throw ConfigError("config: validate.gamma_e entries must be >= 0");
    for (int n : c.validate.n_u)
        if (n < 1) throw ConfigError("config: validate.n_u entries must be >= 1");
    for (double r : c.validate.rho)
        if (!(r > 0.0)) throw ConfigError("config: validate.rho entries must be > 0");

    s.validate();
    return c;
}

/// Parses text, merges it onto the defaults, applies overrides.
inline ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {}) {
    Json file;
    try {
        file = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = detail::line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("config: JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    Json doc = default_config_document();
    detail::merge_known(doc, file, "");
    for (const auto& o : overrides) apply_override(doc, o);
    return config_from_document(doc);
}

inline ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

}  // namespace scn
