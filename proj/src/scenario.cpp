// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The harqris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harqris/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "harqris/error.hpp"
#include "harqris/optimizer.hpp"

namespace harqris::scenario {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where() + " must be a table");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& at(const std::string& key) {
        if (!obj_.contains(key)) throw ConfigError("missing required field '" + field(key) + "'");
        seen_.insert(key);
        return obj_.at(key);
    }

    const json* find(const std::string& key) {
        if (!obj_.contains(key)) return nullptr;
        seen_.insert(key);
        return &obj_.at(key);
    }

    double number(const std::string& key) { return as_number(at(key), field(key)); }

    std::optional<double> opt_number(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return as_number(*v, field(key));
    }

    std::uint64_t unsigned_int(const std::string& key) { return as_unsigned(at(key), field(key)); }

    std::optional<std::uint64_t> opt_unsigned(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return as_unsigned(*v, field(key));
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError("field '" + field(key) + "' must be a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) { return as_numbers(at(key), field(key)); }

    ObjectReader child(const std::string& key) { return ObjectReader(at(key), field(key)); }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    /// Rejects keys that were never read.
    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown field '" + field(it.key()) + "'");
        }
    }

    static double as_number(const json& v, const std::string& name) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        }
        throw ConfigError("field '" + name + "' must be a number");
    }

    static std::uint64_t as_unsigned(const json& v, const std::string& name) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        throw ConfigError("field '" + name + "' must be a nonnegative integer");
    }

    static std::vector<double> as_numbers(const json& v, const std::string& name) {
        if (!v.is_array()) throw ConfigError("field '" + name + "' must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], name + "[" + std::to_string(i) + "]"));
        return out;
    }

private:
    std::string where() const { return path_.empty() ? "scenario" : "field '" + path_ + "'"; }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

json number_or_inf(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

// Either a linear gain under gain_key or a path-loss table under loss_key.
double read_gain(ObjectReader& r, const std::string& gain_key, const std::string& loss_key) {
    const bool has_gain = r.has(gain_key);
    const bool has_loss = r.has(loss_key);
    if (has_gain == has_loss) {
        throw ConfigError("exactly one of '" + r.field(gain_key) + "' or '" + r.field(loss_key) + "' is required");
    }
    if (has_gain) return r.number(gain_key);
    auto pl = r.child(loss_key);
    channel::PathLossSpec spec;
    spec.distance = pl.number("distance");
    spec.reference_distance = pl.number("reference_distance");
    spec.exponent = pl.number("exponent");
    pl.finish();
    try {
        return channel::path_gain(spec);
    } catch (const DomainError& e) {
        throw ConfigError(r.field(loss_key) + ": " + e.what());
    }
}

// kappa (linear) or kappa_db; dB is converted here and nowhere else.
double read_kappa(ObjectReader& r) {
    const bool lin = r.has("kappa");
    const bool db = r.has("kappa_db");
    if (lin == db) throw ConfigError("exactly one of '" + r.field("kappa") + "' or '" + r.field("kappa_db") + "' is required");
    const double k = lin ? r.number("kappa") : channel::db_to_linear(r.number("kappa_db"));
    if (std::isnan(k) || k < 0.0) throw ConfigError("field '" + r.field(lin ? "kappa" : "kappa_db") + "' gives a negative Rician factor");
    return k;
}

NetworkSpec read_network(ObjectReader r) {
    NetworkSpec spec;
    if (auto seed = r.opt_unsigned("los_phase_seed")) spec.los_phase_seed = *seed;

    auto d = r.child("direct");
    spec.base.direct.beta_sd = read_gain(d, "beta", "path_loss");
    spec.base.direct.kappa_sd = read_kappa(d);
    if (auto phase = d.opt_number("los_phase")) {
        spec.base.direct.los_phase_sd = *phase;
        spec.direct_phase_explicit = true;
    }
    d.finish();

    if (const json* panels = r.find("panels")) {
        if (!panels->is_array()) throw ConfigError("field 'network.panels' must be an array of tables");
        for (std::size_t k = 0; k < panels->size(); ++k) {
            ObjectReader p((*panels)[k], "network.panels[" + std::to_string(k) + "]");
            channel::RisPanel panel;
            const auto n = p.unsigned_int("elements");
            if (n < 1) throw ConfigError("field '" + p.field("elements") + "' must be at least 1");
            panel.n_elements = n;
            panel.beta_sr = read_gain(p, "beta_sr", "sr_path_loss");
            panel.beta_rd = read_gain(p, "beta_rd", "rd_path_loss");
            panel.kappa_rd = read_kappa(p);
            if (const json* v = p.find("los_phases_sr")) panel.los_phases_sr = ObjectReader::as_numbers(*v, p.field("los_phases_sr"));
            if (const json* v = p.find("los_phases_rd")) panel.los_phases_rd = ObjectReader::as_numbers(*v, p.field("los_phases_rd"));
            p.finish();
            spec.base.panels.push_back(std::move(panel));
        }
    }
    r.finish();
    return spec;
}

std::vector<double> read_snr_grid(ObjectReader r) {
    std::vector<double> out;
    if (r.has("values")) {
        out = r.numbers("values");
    } else {
        const double start = r.number("start");
        const double stop = r.number("stop");
        const double step = r.number("step");
        if (!(step > 0.0) || !(stop >= start)) throw ConfigError("field 'snr_db' needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    }
    r.finish();
    if (out.empty()) throw ConfigError("field 'snr_db' is empty");
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i] > out[i - 1])) throw ConfigError("field 'snr_db.values' must be strictly increasing");
    }
    return out;
}

specfun::TruncationPolicy read_truncation(ObjectReader r) {
    const auto mode = r.string("mode");
    specfun::TruncationPolicy policy;
    if (mode == "fixed") {
        policy = specfun::TruncationPolicy::fixed(static_cast<unsigned>(r.opt_unsigned("order").value_or(50)));
    } else if (mode == "adaptive") {
        policy = specfun::TruncationPolicy::adaptive(r.opt_number("tolerance").value_or(1e-12));
        if (!(policy.tail_tolerance > 0.0 && policy.tail_tolerance < 1.0)) {
            throw ConfigError("field 'truncation.tolerance' must lie in (0, 1)");
        }
    } else {
        throw ConfigError("field 'truncation.mode' must be 'fixed' or 'adaptive'");
    }
    r.finish();
    return policy;
}

PhaseStrategy read_phases(ObjectReader r) {
    PhaseStrategy s;
    const auto kind = r.string("strategy");
    if (kind == "optimal") {
        s.kind = PhaseStrategy::Kind::Optimal;
    } else if (kind == "fixed") {
        s.kind = PhaseStrategy::Kind::Fixed;
        s.fixed_value = r.number("value");
    } else if (kind == "random") {
        s.kind = PhaseStrategy::Kind::Random;
        s.seed = r.unsigned_int("seed");
    } else if (kind == "explicit") {
        s.kind = PhaseStrategy::Kind::Explicit;
        if (r.has("per_panel") == r.has("values")) {
            throw ConfigError("explicit phases need exactly one of 'phases.per_panel' or 'phases.values'");
        }
        if (r.has("per_panel")) {
            s.per_panel = r.numbers("per_panel");
            if (s.per_panel.empty()) throw ConfigError("field 'phases.per_panel' is empty");
        } else {
            const json& rows = r.at("values");
            if (!rows.is_array()) throw ConfigError("field 'phases.values' must be an array of arrays");
            for (std::size_t k = 0; k < rows.size(); ++k) {
                s.values.push_back(ObjectReader::as_numbers(rows[k], "phases.values[" + std::to_string(k) + "]"));
            }
        }
    } else {
        throw ConfigError("field 'phases.strategy' must be one of optimal, fixed, random, explicit");
    }
    r.finish();
    return s;
}

json toml_to_json(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        json j = json::object();
        for (auto&& [key, value] : *t) j[std::string(key.str())] = toml_to_json(value);
        return j;
    }
    if (const auto* a = node.as_array()) {
        json j = json::array();
        for (auto&& value : *a) j.push_back(toml_to_json(value));
        return j;
    }
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    throw ConfigError("unsupported TOML value type at line " + std::to_string(node.source().begin.line));
}

}  // namespace

Scenario from_json(const json& doc) {
    if (doc.is_object() && doc.contains("manifest_version")) {
        if (!doc.contains("scenario")) throw ConfigError("manifest has no 'scenario' section");
        return from_json(doc.at("scenario"));
    }
    ObjectReader root(doc, "");
    Scenario sc;
    if (const json* name = root.find("name")) {
        if (!name->is_string()) throw ConfigError("field 'name' must be a string");
        sc.name = name->get<std::string>();
    }
    sc.network = read_network(root.child("network"));

    {
        auto h = root.child("harq");
        const json& schemes = h.at("schemes");
        if (schemes.is_string()) {
            sc.schemes.push_back(analytic::parse_scheme(schemes.get<std::string>()));
        } else if (schemes.is_array() && !schemes.empty()) {
            for (const auto& s : schemes) {
                if (!s.is_string()) throw ConfigError("field 'harq.schemes' must list scheme names");
                sc.schemes.push_back(analytic::parse_scheme(s.get<std::string>()));
            }
        } else {
            throw ConfigError("field 'harq.schemes' must be a scheme name or a nonempty list");
        }
        const json& rounds = h.at("rounds");
        auto push_round = [&](const json& v) {
            const auto l = ObjectReader::as_unsigned(v, "harq.rounds");
            if (l < 1 || l > 1000) throw ConfigError("field 'harq.rounds' must lie in [1, 1000]");
            sc.rounds.push_back(static_cast<unsigned>(l));
        };
        if (rounds.is_array()) {
            if (rounds.empty()) throw ConfigError("field 'harq.rounds' is empty");
            for (const auto& v : rounds) push_round(v);
        } else {
            push_round(rounds);
        }
        sc.rate = h.number("rate");
        if (!(sc.rate > 0.0) || !std::isfinite(sc.rate)) throw ConfigError("field 'harq.rate' must be positive");
        h.finish();
    }

    sc.snr_db = read_snr_grid(root.child("snr_db"));
    if (root.has("truncation")) sc.truncation = read_truncation(root.child("truncation"));
    if (root.has("phases")) {
        sc.phases = read_phases(root.child("phases"));
    } else {
        sc.phases.kind = PhaseStrategy::Kind::Optimal;
    }

    if (root.has("montecarlo")) {
        auto m = root.child("montecarlo");
        if (auto t = m.opt_unsigned("trials")) sc.montecarlo.trials = *t;
        if (auto s = m.opt_unsigned("seed")) sc.montecarlo.seed = *s;
        if (auto c = m.opt_unsigned("chunk_size")) sc.montecarlo.chunk_size = *c;
        m.finish();
        if (sc.montecarlo.trials < 1) throw ConfigError("field 'montecarlo.trials' must be at least 1");
        if (sc.montecarlo.chunk_size < 1) throw ConfigError("field 'montecarlo.chunk_size' must be at least 1");
    }

    if (root.has("sweep")) {
        auto s = root.child("sweep");
        const json& el = s.at("elements");
        if (!el.is_array() || el.empty()) throw ConfigError("field 'sweep.elements' must be a nonempty array");
        for (const auto& v : el) {
            const auto n = ObjectReader::as_unsigned(v, "sweep.elements");
            if (n < 1) throw ConfigError("field 'sweep.elements' entries must be at least 1");
            sc.element_sweep.push_back(n);
        }
        s.finish();
    }

    if (root.has("diversity")) {
        auto d = root.child("diversity");
        const auto w = d.numbers("window_db");
        if (w.size() != 2 || !(w[1] > w[0])) throw ConfigError("field 'diversity.window_db' must be [low, high] with low < high");
        sc.diversity_window_db = std::make_pair(w[0], w[1]);
        d.finish();
    }

    sc.compare_fixed_value = optimizer::kFixedStrategyPhase;
    if (root.has("compare")) {
        auto c = root.child("compare");
        if (auto s = c.opt_unsigned("random_seed")) sc.compare_random_seed = *s;
        if (auto v = c.opt_number("fixed_value")) sc.compare_fixed_value = *v;
        c.finish();
    }
    root.finish();

    // Surface structural problems now rather than at run time.
    resolve_variants(sc);
    return sc;
}

Scenario parse_toml(const std::string& text, const std::string& source) {
    toml::table table;
    try {
        table = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        const auto& where = e.source().begin;
        throw ConfigError(source + ":" + std::to_string(where.line) + ":" + std::to_string(where.column) + ": " +
                          std::string(e.description()));
    }
    return from_json(toml_to_json(table));
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        json doc;
        try {
            doc = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return from_json(doc);
    }
    return parse_toml(buf.str(), path.string());
}

json to_json(const Scenario& sc) {
    json j;
    if (!sc.name.empty()) j["name"] = sc.name;

    const auto& net = sc.network.base;
    json direct = {{"beta", net.direct.beta_sd}, {"kappa", number_or_inf(net.direct.kappa_sd)}};
    if (sc.network.direct_phase_explicit) direct["los_phase"] = net.direct.los_phase_sd;
    json panels = json::array();
    for (const auto& p : net.panels) {
        json pj = {{"elements", p.n_elements},
                   {"beta_sr", p.beta_sr},
                   {"beta_rd", p.beta_rd},
                   {"kappa", number_or_inf(p.kappa_rd)}};
        if (!p.los_phases_sr.empty()) pj["los_phases_sr"] = p.los_phases_sr;
        if (!p.los_phases_rd.empty()) pj["los_phases_rd"] = p.los_phases_rd;
        panels.push_back(pj);
    }
    j["network"] = {{"los_phase_seed", sc.network.los_phase_seed}, {"direct", direct}, {"panels", panels}};

    json schemes = json::array();
    for (auto s : sc.schemes) schemes.push_back(std::string(analytic::to_string(s)));
    j["harq"] = {{"schemes", schemes}, {"rounds", sc.rounds}, {"rate", sc.rate}};
    j["snr_db"] = {{"values", sc.snr_db}};

    if (sc.truncation.mode == specfun::TruncationPolicy::Mode::Fixed) {
        j["truncation"] = {{"mode", "fixed"}, {"order", sc.truncation.fixed_order}};
    } else {
        j["truncation"] = {{"mode", "adaptive"}, {"tolerance", sc.truncation.tail_tolerance}};
    }

    switch (sc.phases.kind) {
        case PhaseStrategy::Kind::Optimal: j["phases"] = {{"strategy", "optimal"}}; break;
        case PhaseStrategy::Kind::Fixed: j["phases"] = {{"strategy", "fixed"}, {"value", sc.phases.fixed_value}}; break;
        case PhaseStrategy::Kind::Random: j["phases"] = {{"strategy", "random"}, {"seed", sc.phases.seed}}; break;
        case PhaseStrategy::Kind::Explicit:
            if (!sc.phases.per_panel.empty()) {
                j["phases"] = {{"strategy", "explicit"}, {"per_panel", sc.phases.per_panel}};
            } else {
                j["phases"] = {{"strategy", "explicit"}, {"values", sc.phases.values}};
            }
            break;
    }

    j["montecarlo"] = {{"trials", sc.montecarlo.trials},
                       {"seed", sc.montecarlo.seed},
                       {"chunk_size", sc.montecarlo.chunk_size}};
    if (!sc.element_sweep.empty()) j["sweep"] = {{"elements", sc.element_sweep}};
    if (sc.diversity_window_db) {
        j["diversity"] = {{"window_db", {sc.diversity_window_db->first, sc.diversity_window_db->second}}};
    }
    j["compare"] = {{"random_seed", sc.compare_random_seed}, {"fixed_value", sc.compare_fixed_value}};
    return j;
}

std::vector<double> snr_linear(const Scenario& sc) {
    std::vector<double> out;
    out.reserve(sc.snr_db.size());
    for (double db : sc.snr_db) out.push_back(channel::db_to_linear(db));
    return out;
}

channel::PhaseConfig resolve_phases(const PhaseStrategy& strategy, const channel::NetworkConfig& net) {
    if (net.total_elements() == 0) return channel::PhaseConfig::constant(net, 0.0);
    switch (strategy.kind) {
        case PhaseStrategy::Kind::Optimal: return optimizer::optimal_phases(net).phases;
        case PhaseStrategy::Kind::Fixed: return channel::PhaseConfig::constant(net, strategy.fixed_value);
        case PhaseStrategy::Kind::Random: return channel::PhaseConfig::random(net, strategy.seed);
        case PhaseStrategy::Kind::Explicit: {
            if (!strategy.per_panel.empty()) return channel::PhaseConfig::tiled(net, strategy.per_panel);
            channel::PhaseConfig out;
            for (const auto& row : strategy.values) {
                auto& wrapped = out.thetas.emplace_back();
                for (double v : row) wrapped.push_back(channel::wrap_phase(v));
            }
            out.validate(net);
            return out;
        }
    }
    throw ConfigError("unknown phase strategy");
}

std::vector<Variant> resolve_variants(const Scenario& sc) {
    std::vector<std::pair<std::string, channel::NetworkConfig>> nets;
    if (sc.element_sweep.empty()) {
        nets.emplace_back("base", sc.network.base);
    } else {
        for (auto n : sc.element_sweep) {
            auto net = sc.network.base;
            for (std::size_t k = 0; k < net.panels.size(); ++k) {
                auto& p = net.panels[k];
                if (!p.los_phases_sr.empty() || !p.los_phases_rd.empty()) {
                    throw ConfigError("network.panels[" + std::to_string(k) +
                                      "]: explicit LoS phases cannot be combined with sweep.elements");
                }
                p.n_elements = n;
            }
            nets.emplace_back("N=" + std::to_string(n), std::move(net));
        }
    }

    std::vector<Variant> out;
    for (auto& [label, net] : nets) {
        channel::fill_los_phases(net, sc.network.los_phase_seed, !sc.network.direct_phase_explicit);
        net.validate();
        auto phases = resolve_phases(sc.phases, net);
        out.push_back({label, std::move(net), std::move(phases)});
    }
    return out;
}

}  // namespace harqris::scenario
