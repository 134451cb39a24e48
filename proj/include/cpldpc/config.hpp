#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpldpc/bounds.hpp"
#include "cpldpc/channel.hpp"
#include "cpldpc/density_evolution.hpp"
#include "cpldpc/ensemble.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/experiments.hpp"

namespace cpldpc {

using json = nlohmann::ordered_json;

namespace detail {

inline void require_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw config_error("config: unknown key '" + key + "' in " + where);
    }
}

inline double get_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw config_error(std::string("config: ") + key + " must be a number");
    return obj[key].get<double>();
}

inline DegreeDistribution parse_degree_map(const json& obj, const std::string& name) {
    if (!obj.is_object() || obj.empty())
        throw config_error("config: " + name + " must be a {degree: weight} map");
    std::map<int, double> m;
    for (const auto& [key, value] : obj.items()) {
        std::size_t pos = 0;
        int degree = 0;
        try {
            degree = std::stoi(key, &pos);
        } catch (...) {
            throw config_error("config: " + name + ": bad degree key '" + key + "'");
        }
        if (pos != key.size() || degree < 1)
            throw config_error("config: " + name + ": bad degree key '" + key + "'");
        if (!value.is_number())
            throw config_error("config: " + name + ": weight must be a number");
        m[degree] = value.get<double>();
    }
    return DegreeDistribution::from_map(m);
}

}  // namespace detail

struct PunctureSection {
    std::optional<double> p;
    std::optional<double> kappa;
    std::optional<double> epsilon;

    /// Direct p wins; otherwise the schedule p = 1 - kappa epsilon.
    std::optional<double> resolved_p() const {
        if (p) return p;
        if (kappa && epsilon) return puncture_schedule(*epsilon, *kappa);
        return std::nullopt;
    }
};

struct DeSection {
    double tol = 1e-10;
    std::size_t max_iters = 100000;
    bool x1_extrinsic = false;
    bool rg_edge_perspective = false;
};

struct SweepSection {
    std::vector<double> delta_grid;
    std::vector<double> p_grid;
    int trials = 10;
    std::size_t max_decoder_iters = 200;
    bool quenched = false;
    CodewordMode codewords = CodewordMode::zero;
};

struct BoundsSection {
    std::optional<double> epsilon;
    std::optional<double> kappa;
    int p_max = 100;
    BoundLogConvention convention = BoundLogConvention::natural_log;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::optional<EnsembleParams> ensemble;
    std::optional<ChannelModel> channel;
    PunctureSection puncture;
    DeSection de;
    std::optional<SweepSection> sweep;
    BoundsSection bounds;
    std::string output_path;
    std::string output_format = "csv";

    /// DEConfig assembled from the ensemble's distributions; delta/p must be
    /// supplied (from channel/puncture sections or flags).
    DEConfig de_config(double delta, double p) const {
        if (!ensemble) throw config_error("config: ensemble section required");
        DEConfig cfg{ensemble->lambda_g, ensemble->rho_g, ensemble->lambda_h, ensemble->rho_h};
        cfg.delta = delta;
        cfg.p = p;
        cfg.tol = de.tol;
        cfg.max_iters = de.max_iters;
        cfg.x1_extrinsic = de.x1_extrinsic;
        cfg.rg_edge_perspective = de.rg_edge_perspective;
        return cfg;
    }

    double channel_delta() const {
        if (!channel || channel->kind != ChannelModel::Kind::BEC)
            throw config_error("config: a BEC channel section is required here");
        return channel->param;
    }

    /// BoundInputs derived from ensemble + channel + puncturing.
    BoundInputs bound_inputs(double p, double epsilon, double kappa) const {
        if (!ensemble) throw config_error("config: ensemble section required");
        if (!channel) throw config_error("config: channel section required");
        BoundInputs b;
        const double n = static_cast<double>(ensemble->n());
        b.p1 = static_cast<double>(ensemble->n1) / n;
        b.p2 = static_cast<double>(ensemble->n2) / n;
        b.C = capacity(*channel);
        b.p = p;
        b.R_H = design_rate(ensemble->lambda_h, ensemble->rho_h);
        b.a_L = ensemble->rho_g.average_degree();
        b.a_R = ensemble->rho_h.average_degree();
        const LlrDensity d1 = llr_density(*channel);
        b.g11 = g_functional(d1, 1);
        b.g21 = g_functional(puncture_density(d1, p), 1);
        b.epsilon = epsilon;
        b.kappa = kappa;
        return b;
    }
};

inline RunConfig parse_run_config(const json& root) {
    if (!root.is_object()) throw config_error("config: root must be an object");
    detail::require_keys(root, "root",
                         {"seed", "ensemble", "channel", "puncture", "de", "sweep", "bounds",
                          "output"});
    RunConfig rc;
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned())
            throw config_error("config: seed must be a nonnegative integer");
        rc.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("ensemble")) {
        const json& e = root["ensemble"];
        detail::require_keys(e, "ensemble",
                             {"n1", "n2", "lambda_g", "rho_g", "lambda_h", "rho_h"});
        for (const char* k : {"n1", "n2", "lambda_g", "rho_g", "lambda_h", "rho_h"})
            if (!e.contains(k))
                throw config_error(std::string("config: ensemble.") + k + " missing");
        if (!e["n1"].is_number_unsigned() || !e["n2"].is_number_unsigned())
            throw config_error("config: n1/n2 must be nonnegative integers");
        rc.ensemble.emplace(EnsembleParams{
            e["n1"].get<std::size_t>(), e["n2"].get<std::size_t>(),
            detail::parse_degree_map(e["lambda_g"], "lambda_g"),
            detail::parse_degree_map(e["rho_g"], "rho_g"),
            detail::parse_degree_map(e["lambda_h"], "lambda_h"),
            detail::parse_degree_map(e["rho_h"], "rho_h")});
        rc.ensemble->seed = rc.seed;
    }
    if (root.contains("channel")) {
        const json& c = root["channel"];
        detail::require_keys(c, "channel", {"kind", "param"});
        if (!c.contains("kind") || !c["kind"].is_string() || !c.contains("param") ||
            !c["param"].is_number())
            throw config_error("config: channel needs {kind, param}");
        const std::string kind = c["kind"].get<std::string>();
        const double param = c["param"].get<double>();
        if (kind == "bec")
            rc.channel = ChannelModel::bec(param);
        else if (kind == "bsc")
            rc.channel = ChannelModel::bsc(param);
        else if (kind == "biawgn")
            rc.channel = ChannelModel::biawgn(param);
        else
            throw config_error("config: unknown channel kind '" + kind + "'");
    }
    if (root.contains("puncture")) {
        const json& p = root["puncture"];
        detail::require_keys(p, "puncture", {"p", "schedule"});
        if (p.contains("p")) rc.puncture.p = detail::get_number(p, "p", 0.0);
        if (p.contains("schedule")) {
            const json& s = p["schedule"];
            detail::require_keys(s, "puncture.schedule", {"kappa", "epsilon"});
            if (!s.contains("kappa") || !s.contains("epsilon"))
                throw config_error("config: schedule needs {kappa, epsilon}");
            rc.puncture.kappa = detail::get_number(s, "kappa", 0.0);
            rc.puncture.epsilon = detail::get_number(s, "epsilon", 0.0);
        }
        if (auto rp = rc.puncture.resolved_p()) {
            if (!(*rp >= 0.0 && *rp <= 1.0))
                throw config_error("config: puncture probability outside [0, 1]");
            if (rc.ensemble) rc.ensemble->puncture_p = *rp;
        }
    }
    if (root.contains("de")) {
        const json& d = root["de"];
        detail::require_keys(d, "de", {"tol", "max_iters", "x1_extrinsic", "rg_edge_perspective"});
        rc.de.tol = detail::get_number(d, "tol", rc.de.tol);
        if (d.contains("max_iters")) {
            if (!d["max_iters"].is_number_unsigned())
                throw config_error("config: de.max_iters must be a nonnegative integer");
            rc.de.max_iters = d["max_iters"].get<std::size_t>();
        }
        if (d.contains("x1_extrinsic")) {
            if (!d["x1_extrinsic"].is_boolean())
                throw config_error("config: de.x1_extrinsic must be a boolean");
            rc.de.x1_extrinsic = d["x1_extrinsic"].get<bool>();
        }
        if (d.contains("rg_edge_perspective")) {
            if (!d["rg_edge_perspective"].is_boolean())
                throw config_error("config: de.rg_edge_perspective must be a boolean");
            rc.de.rg_edge_perspective = d["rg_edge_perspective"].get<bool>();
        }
    }
    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        detail::require_keys(s, "sweep",
                             {"delta_grid", "p_grid", "trials", "max_decoder_iters", "quenched",
                              "codewords"});
        SweepSection sw;
        if (!s.contains("delta_grid") || !s["delta_grid"].is_array())
            throw config_error("config: sweep.delta_grid must be an array");
        for (const auto& v : s["delta_grid"]) sw.delta_grid.push_back(v.get<double>());
        if (s.contains("p_grid")) {
            for (const auto& v : s["p_grid"]) sw.p_grid.push_back(v.get<double>());
        }
        if (s.contains("trials")) sw.trials = s["trials"].get<int>();
        if (s.contains("max_decoder_iters"))
            sw.max_decoder_iters = s["max_decoder_iters"].get<std::size_t>();
        if (s.contains("quenched")) sw.quenched = s["quenched"].get<bool>();
        if (s.contains("codewords")) {
            const std::string mode = s["codewords"].get<std::string>();
            if (mode == "zero")
                sw.codewords = CodewordMode::zero;
            else if (mode == "uniform")
                sw.codewords = CodewordMode::uniform;
            else
                throw config_error("config: sweep.codewords must be 'zero' or 'uniform'");
        }
        rc.sweep = std::move(sw);
    }
    if (root.contains("bounds")) {
        const json& b = root["bounds"];
        detail::require_keys(b, "bounds", {"epsilon", "kappa", "p_max", "log_convention"});
        if (b.contains("epsilon")) rc.bounds.epsilon = detail::get_number(b, "epsilon", 0.0);
        if (b.contains("kappa")) rc.bounds.kappa = detail::get_number(b, "kappa", 0.0);
        if (b.contains("p_max")) rc.bounds.p_max = b["p_max"].get<int>();
        if (b.contains("log_convention")) {
            const std::string conv = b["log_convention"].get<std::string>();
            if (conv == "natural")
                rc.bounds.convention = BoundLogConvention::natural_log;
            else if (conv == "log2")
                rc.bounds.convention = BoundLogConvention::log_base_two;
            else
                throw config_error("config: bounds.log_convention must be 'natural' or 'log2'");
        }
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        detail::require_keys(o, "output", {"path", "format"});
        if (o.contains("path")) rc.output_path = o["path"].get<std::string>();
        if (o.contains("format")) {
            rc.output_format = o["format"].get<std::string>();
            if (rc.output_format != "csv" && rc.output_format != "json" &&
                rc.output_format != "both")
                throw config_error("config: output.format must be csv, json or both");
        }
    }
    return rc;
}

inline RunConfig parse_run_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_run_config(root);
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config_text(text);
}

}  // namespace cpldpc
