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

#include "harqris/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "harqris/analytic.hpp"
#include "harqris/error.hpp"
#include "harqris/montecarlo.hpp"
#include "harqris/optimizer.hpp"
#include "harqris/parallel.hpp"

namespace harqris::runner {

using nlohmann::json;
using scenario::Scenario;
using scenario::Variant;

namespace {

using Clock = std::chrono::steady_clock;

std::string format_db(double db) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", db);
    return buf;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

class Timer {
public:
    void stage(const std::string& name) {
        const auto now = Clock::now();
        if (!current_.empty()) seconds_[current_] += std::chrono::duration<double>(now - start_).count();
        current_ = name;
        start_ = now;
    }
    json finish() {
        stage("");
        json j = json::object();
        for (const auto& [k, v] : seconds_) j[k] = v;
        return j;
    }

private:
    std::string current_;
    Clock::time_point start_ = Clock::now();
    std::map<std::string, double> seconds_;
};

// Bookkeeping shared by every subcommand for the manifest.
struct RunLog {
    unsigned max_order_used = 0;
    json extra = json::object();
};

analytic::HarqParams harq_for(const Scenario& sc, analytic::Scheme scheme, unsigned rounds) {
    analytic::HarqParams h;
    h.scheme = scheme;
    h.max_rounds = rounds;
    h.rate = sc.rate;
    h.snr_grid = scenario::snr_linear(sc);
    return h;
}

void track_orders(const analytic::OutageCurve& curve, RunLog& log) {
    for (const auto& e : curve.entries) log.max_order_used = std::max(log.max_order_used, e.truncation_order);
}

std::string op_curve(const Scenario& sc, const std::vector<Variant>& variants, unsigned workers, RunLog& log) {
    std::ostringstream csv;
    csv << "variant,scheme,L,snr_db,p_out_exact,truncation_order\n";
    for (const auto& v : variants) {
        const auto stats = channel::compute_stats(v.network, v.phases);
        for (auto scheme : sc.schemes) {
            for (auto rounds : sc.rounds) {
                const auto curve = analytic::exact_curve(stats, harq_for(sc, scheme, rounds), sc.truncation, workers);
                track_orders(curve, log);
                for (std::size_t i = 0; i < curve.entries.size(); ++i) {
                    const auto& e = curve.entries[i];
                    csv << v.label << ',' << analytic::to_string(scheme) << ',' << rounds << ','
                        << format_db(sc.snr_db[i]) << ',' << format_probability(e.p_out) << ','
                        << e.truncation_order << '\n';
                }
            }
        }
    }
    return csv.str();
}

std::string asymptote(const Scenario& sc, const std::vector<Variant>& variants, unsigned workers, RunLog& log) {
    std::ostringstream csv;
    csv << "variant,scheme,L,snr_db,p_out_exact,p_out_asymptotic,ratio\n";
    for (const auto& v : variants) {
        const auto stats = channel::compute_stats(v.network, v.phases);
        for (auto scheme : sc.schemes) {
            for (auto rounds : sc.rounds) {
                const auto harq = harq_for(sc, scheme, rounds);
                const auto exact = analytic::exact_curve(stats, harq, sc.truncation, workers);
                track_orders(exact, log);
                for (std::size_t i = 0; i < exact.entries.size(); ++i) {
                    // The column is capped at 1; the ratio uses the uncapped asymptote.
                    const double asym = analytic::asymptotic_outage(stats, scheme, rounds, sc.rate, harq.snr_grid[i]);
                    csv << v.label << ',' << analytic::to_string(scheme) << ',' << rounds << ','
                        << format_db(sc.snr_db[i]) << ',' << format_probability(exact.entries[i].p_out) << ','
                        << format_probability(std::min(1.0, asym)) << ',' << format_real(exact.entries[i].p_out / asym)
                        << '\n';
                }
            }
        }
    }
    return csv.str();
}

std::string monte_carlo(const Scenario& sc, const std::vector<Variant>& variants, unsigned workers, RunLog& log) {
    std::ostringstream csv;
    csv << "variant,scheme,L,snr_db,p_out_mc,stderr,trials,p_out_exact\n";
    const unsigned max_rounds = *std::max_element(sc.rounds.begin(), sc.rounds.end());
    const auto grid = scenario::snr_linear(sc);
    for (const auto& v : variants) {
        const auto stats = channel::compute_stats(v.network, v.phases);
        // Shared draws across SNR points and schemes; counts for every L come from one pass.
        std::vector<montecarlo::JointOutageCounts> counts;
        for (double rho : grid) {
            montecarlo::SimulationPlan plan;
            plan.trials = sc.montecarlo.trials;
            plan.seed = sc.montecarlo.seed;
            plan.chunk_size = sc.montecarlo.chunk_size;
            plan.max_rounds = max_rounds;
            plan.rate = sc.rate;
            plan.rho = rho;
            plan.workers = workers;
            counts.push_back(montecarlo::estimate_outage_joint(v.network, v.phases, plan));
        }
        for (auto scheme : sc.schemes) {
            for (auto rounds : sc.rounds) {
                const auto exact = analytic::exact_curve(stats, harq_for(sc, scheme, rounds), sc.truncation, workers);
                track_orders(exact, log);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const auto est = counts[i].estimate(scheme, rounds, sc.montecarlo.seed);
                    csv << v.label << ',' << analytic::to_string(scheme) << ',' << rounds << ','
                        << format_db(sc.snr_db[i]) << ',' << format_probability(est.p_hat) << ','
                        << format_real(est.std_error) << ',' << est.trials << ','
                        << format_probability(exact.entries[i].p_out) << '\n';
                }
            }
        }
    }
    return csv.str();
}

json phases_json(const channel::PhaseConfig& phases) { return phases.thetas; }

std::string optimize_phase(const Scenario& sc, const std::vector<Variant>& variants, unsigned workers, RunLog& log) {
    std::ostringstream csv;
    csv << "variant,strategy,scheme,L,snr_db,p_out_exact,psi_glos\n";
    json solutions = json::array();
    for (const auto& v : variants) {
        const auto sol = optimizer::optimal_phases(v.network);
        solutions.push_back({{"variant", v.label},
                             {"phases", phases_json(sol.phases)},
                             {"psi_glos_achieved", sol.psi_glos_achieved},
                             {"upper_bound", sol.upper_bound},
                             {"gap", sol.gap}});
        for (auto scheme : sc.schemes) {
            for (auto rounds : sc.rounds) {
                const auto cmp = optimizer::compare_strategies(v.network, harq_for(sc, scheme, rounds), sc.truncation,
                                                               sc.compare_random_seed, sc.compare_fixed_value, workers);
                const std::pair<const char*, const optimizer::StrategyCurve*> rows[] = {
                    {"optimal", &cmp.optimal}, {"fixed", &cmp.fixed}, {"random", &cmp.random}};
                for (const auto& [name, s] : rows) {
                    track_orders(s->curve, log);
                    for (std::size_t i = 0; i < s->curve.entries.size(); ++i) {
                        csv << v.label << ',' << name << ',' << analytic::to_string(scheme) << ',' << rounds << ','
                            << format_db(sc.snr_db[i]) << ',' << format_probability(s->curve.entries[i].p_out) << ','
                            << format_real(s->stats.psi_glos) << '\n';
                    }
                }
            }
        }
    }
    log.extra["phase_solutions"] = solutions;
    return csv.str();
}

std::string diversity(const Scenario& sc, const std::vector<Variant>& variants, unsigned workers, RunLog& log) {
    std::ostringstream csv;
    csv << "variant,scheme,L,curve,diversity,intercept,residual,points,snr_db_min,snr_db_max\n";
    const auto window_db = sc.diversity_window_db.value_or(std::make_pair(sc.snr_db.back() - 15.0, sc.snr_db.back()));
    // Window edges get a hair of slack so grid points sitting on them are kept.
    const analytic::SnrWindow window{channel::db_to_linear(window_db.first - 1e-9),
                                     channel::db_to_linear(window_db.second + 1e-9)};
    for (const auto& v : variants) {
        const auto stats = channel::compute_stats(v.network, v.phases);
        for (auto scheme : sc.schemes) {
            for (auto rounds : sc.rounds) {
                const auto harq = harq_for(sc, scheme, rounds);
                const auto exact = analytic::exact_curve(stats, harq, sc.truncation, workers);
                track_orders(exact, log);
                const auto asym = analytic::asymptotic_curve(stats, harq);
                const std::pair<const char*, const analytic::OutageCurve*> curves[] = {{"exact", &exact},
                                                                                      {"asymptotic", &asym}};
                for (const auto& [name, curve] : curves) {
                    const auto fit = analytic::fit_diversity(*curve, window);
                    csv << v.label << ',' << analytic::to_string(scheme) << ',' << rounds << ',' << name << ','
                        << format_real(fit.diversity) << ',' << format_real(fit.intercept) << ','
                        << format_real(fit.residual) << ',' << fit.points << ',' << format_db(window_db.first) << ','
                        << format_db(window_db.second) << '\n';
                }
            }
        }
    }
    return csv.str();
}

json network_json(const channel::NetworkConfig& net) {
    json panels = json::array();
    for (const auto& p : net.panels) {
        panels.push_back({{"elements", p.n_elements},
                          {"beta_sr", p.beta_sr},
                          {"beta_rd", p.beta_rd},
                          {"kappa", std::isinf(p.kappa_rd) ? json("inf") : json(p.kappa_rd)},
                          {"los_phases_sr", p.los_phases_sr},
                          {"los_phases_rd", p.los_phases_rd}});
    }
    return {{"direct",
             {{"beta", net.direct.beta_sd},
              {"kappa", std::isinf(net.direct.kappa_sd) ? json("inf") : json(net.direct.kappa_sd)},
              {"los_phase", net.direct.los_phase_sd}}},
            {"panels", panels}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"op-curve", "asymptote", "mc", "optimize-phase", "diversity"};
    return names;
}

std::string format_probability(double p) { return format_real(p); }

specfun::TruncationPolicy parse_truncation(std::string_view text) {
    const auto colon = text.find(':');
    const std::string kind(text.substr(0, colon));
    const std::string arg = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
    try {
        if (colon != std::string_view::npos && arg.empty()) throw std::invalid_argument(arg);
        if (kind == "fixed") {
            std::size_t used = 0;
            const long order = arg.empty() ? 50 : std::stol(arg, &used);
            if ((!arg.empty() && used != arg.size()) || order < 0) throw std::invalid_argument(arg);
            return specfun::TruncationPolicy::fixed(static_cast<unsigned>(order));
        }
        if (kind == "adaptive") {
            std::size_t used = 0;
            const double tol = arg.empty() ? 1e-12 : std::stod(arg, &used);
            if ((!arg.empty() && used != arg.size()) || !(tol > 0.0 && tol < 1.0)) throw std::invalid_argument(arg);
            return specfun::TruncationPolicy::adaptive(tol);
        }
    } catch (const std::logic_error&) {
    }
    throw ConfigError("--trunc expects fixed:<order> or adaptive:<tolerance>, got '" + std::string(text) + "'");
}

Scenario apply_overrides(Scenario sc, const RunOptions& options) {
    if (options.trials) {
        if (*options.trials < 1) throw ConfigError("--trials must be at least 1");
        sc.montecarlo.trials = *options.trials;
    }
    if (options.seed) sc.montecarlo.seed = *options.seed;
    if (options.truncation) sc.truncation = *options.truncation;
    return sc;
}

RunOutputs run(std::string_view subcommand, const Scenario& sc, const RunOptions& options) {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
        throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
    }
    Timer timer;
    timer.stage("resolve");
    const unsigned workers = resolve_workers(options.workers);
    const auto variants = scenario::resolve_variants(sc);

    timer.stage("compute");
    RunLog log;
    std::string csv;
    if (subcommand == "op-curve") {
        csv = op_curve(sc, variants, workers, log);
    } else if (subcommand == "asymptote") {
        csv = asymptote(sc, variants, workers, log);
    } else if (subcommand == "mc") {
        csv = monte_carlo(sc, variants, workers, log);
    } else if (subcommand == "optimize-phase") {
        csv = optimize_phase(sc, variants, workers, log);
    } else {
        csv = diversity(sc, variants, workers, log);
    }

    timer.stage("write");
    std::filesystem::create_directories(options.out_dir);
    RunOutputs out;
    const std::string stem(subcommand);
    out.csv = options.out_dir / (stem + ".csv");
    out.manifest = options.out_dir / (stem + ".manifest.json");
    write_file(out.csv, csv);

    json resolved = json::array();
    for (const auto& v : variants) {
        const auto stats = channel::compute_stats(v.network, v.phases);
        resolved.push_back({{"label", v.label},
                            {"network", network_json(v.network)},
                            {"phases", phases_json(v.phases)},
                            {"psi_glos", stats.psi_glos},
                            {"psi_gnlos", stats.psi_gnlos}});
    }
    json manifest;
    manifest["manifest_version"] = 1;
    manifest["tool"] = "harqris";
    manifest["tool_version"] = std::string(kToolVersion);
    manifest["subcommand"] = stem;
    manifest["scenario_source"] = options.scenario_source;
    manifest["scenario"] = scenario::to_json(sc);
    manifest["resolved_variants"] = resolved;
    manifest["snr_linear"] = scenario::snr_linear(sc);
    manifest["seeds"] = {{"los_phase_seed", sc.network.los_phase_seed},
                         {"montecarlo_seed", sc.montecarlo.seed},
                         {"compare_random_seed", sc.compare_random_seed}};
    manifest["max_truncation_order_used"] = log.max_order_used;
    manifest["workers"] = workers;
    manifest["outputs"] = {{"csv", out.csv.filename().string()}};
    for (auto it = log.extra.begin(); it != log.extra.end(); ++it) manifest[it.key()] = it.value();
    manifest["wall_clock_seconds"] = timer.finish();
    write_file(out.manifest, manifest.dump(2) + "\n");
    return out;
}

}  // namespace harqris::runner
