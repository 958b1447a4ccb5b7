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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "harqris/analytic.hpp"
#include "harqris/error.hpp"
#include "harqris/montecarlo.hpp"
#include "harqris/optimizer.hpp"
#include "harqris/runner.hpp"
#include "harqris/scenario.hpp"

namespace py = pybind11;
using namespace harqris;
using analytic::Scheme;
using specfun::TruncationPolicy;

namespace {

TruncationPolicy policy_from(const std::optional<std::string>& trunc) {
    return trunc ? runner::parse_truncation(*trunc) : TruncationPolicy::fixed(50);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

const scenario::Variant& pick(const std::vector<scenario::Variant>& variants, std::size_t index) {
    if (index >= variants.size()) throw py::index_error("variant index out of range");
    return variants[index];
}

}  // namespace

PYBIND11_MODULE(_harqris, m) {
    m.doc() = "Outage analysis of HARQ over multi-RIS Rician channels.";
    m.attr("__version__") = std::string(runner::kToolVersion);

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<FitError>(m, "FitError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());

    py::enum_<Scheme>(m, "Scheme")
        .value("TYPE_I", Scheme::TypeI)
        .value("CC", Scheme::ChaseCombining);
    m.def("parse_scheme", &analytic::parse_scheme, py::arg("name"));

    // Special functions.
    m.def("reg_lower_gamma", &specfun::reg_lower_gamma, py::arg("a"), py::arg("x"));
    m.def("reg_upper_gamma", &specfun::reg_upper_gamma, py::arg("a"), py::arg("x"));
    m.def(
        "poisson_gamma_mixture",
        [](double xi, double a, double x, const std::optional<std::string>& trunc) {
            const auto v = specfun::poisson_gamma_mixture(xi, a, x, policy_from(trunc));
            return py::make_tuple(v.value, v.order, v.tail_bound);
        },
        py::arg("xi"), py::arg("a"), py::arg("x"), py::arg("trunc") = py::none(),
        "(value, last order kept, certified tail bound) of sum_i Poisson(i; xi) P(a + i, x).");

    py::class_<channel::ChannelStats>(m, "ChannelStats")
        .def_static("from_powers", &channel::ChannelStats::from_powers, py::arg("psi_glos"), py::arg("psi_gnlos"))
        .def_readonly("mu", &channel::ChannelStats::mu)
        .def_readonly("psi_glos", &channel::ChannelStats::psi_glos)
        .def_readonly("psi_gnlos", &channel::ChannelStats::psi_gnlos)
        .def("xi", &channel::ChannelStats::xi, py::arg("rounds"))
        .def("__repr__", [](const channel::ChannelStats& s) {
            return "ChannelStats(psi_glos=" + std::to_string(s.psi_glos) + ", psi_gnlos=" + std::to_string(s.psi_gnlos) +
                   ")";
        });

    // Closed-form outage.
    m.def("outage_threshold", &analytic::outage_threshold, py::arg("rate"), py::arg("rho"));
    m.def(
        "gain_cdf",
        [](const channel::ChannelStats& s, double x, const std::optional<std::string>& trunc) {
            return analytic::gain_cdf(s, x, policy_from(trunc));
        },
        py::arg("stats"), py::arg("x"), py::arg("trunc") = py::none());
    m.def(
        "sum_gain_cdf",
        [](const channel::ChannelStats& s, unsigned rounds, double x, const std::optional<std::string>& trunc) {
            return analytic::sum_gain_cdf(s, rounds, x, policy_from(trunc));
        },
        py::arg("stats"), py::arg("rounds"), py::arg("x"), py::arg("trunc") = py::none());
    m.def(
        "outage",
        [](const channel::ChannelStats& s, Scheme scheme, unsigned rounds, double rate, double rho,
           const std::optional<std::string>& trunc) {
            return analytic::outage(s, {scheme, rounds, rate, {}}, rho, policy_from(trunc)).p_out;
        },
        py::arg("stats"), py::arg("scheme"), py::arg("rounds"), py::arg("rate"), py::arg("rho"),
        py::arg("trunc") = py::none());
    m.def("asymptotic_outage", &analytic::asymptotic_outage, py::arg("stats"), py::arg("scheme"), py::arg("rounds"),
          py::arg("rate"), py::arg("rho"));
    m.def("snr_offset_factor", &analytic::snr_offset_factor, py::arg("stats"), py::arg("rounds"));
    m.def("coding_gain", &analytic::coding_gain, py::arg("scheme"), py::arg("rounds"), py::arg("rate"));
    m.def(
        "exact_curve",
        [](const channel::ChannelStats& s, Scheme scheme, unsigned rounds, double rate,
           const std::vector<double>& snr_db, const std::optional<std::string>& trunc, unsigned workers) {
            analytic::HarqParams h{scheme, rounds, rate, {}};
            for (double db : snr_db) h.snr_grid.push_back(from_db(db));
            std::vector<double> out;
            for (const auto& e : analytic::exact_curve(s, h, policy_from(trunc), workers).entries) out.push_back(e.p_out);
            return out;
        },
        py::arg("stats"), py::arg("scheme"), py::arg("rounds"), py::arg("rate"), py::arg("snr_db"),
        py::arg("trunc") = py::none(), py::arg("workers") = 1, "Exact outage at each SNR (dB, ascending).");
    m.def(
        "fit_diversity",
        [](const std::vector<double>& snr_db, const std::vector<double>& p_out, double db_min, double db_max) {
            if (snr_db.size() != p_out.size()) throw py::value_error("snr_db and p_out differ in length");
            analytic::OutageCurve curve;
            for (std::size_t i = 0; i < snr_db.size(); ++i) curve.entries.push_back({from_db(snr_db[i]), p_out[i]});
            const auto fit = analytic::fit_diversity(curve, {from_db(db_min), from_db(db_max)});
            py::dict d;
            d["diversity"] = fit.diversity;
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["residual"] = fit.residual;
            d["points"] = fit.points;
            return d;
        },
        py::arg("snr_db"), py::arg("p_out"), py::arg("db_min"), py::arg("db_max"),
        "Least-squares log-log slope over [db_min, db_max]; points below 1e-14 are skipped.");

    // Scenarios.
    py::class_<scenario::Scenario>(m, "Scenario")
        .def_static("load", &scenario::load_scenario, py::arg("path"))
        .def_static("from_toml", &scenario::parse_toml, py::arg("text"), py::arg("source") = "<string>")
        .def_readonly("name", &scenario::Scenario::name)
        .def_readonly("rounds", &scenario::Scenario::rounds)
        .def_readonly("rate", &scenario::Scenario::rate)
        .def_readonly("snr_db", &scenario::Scenario::snr_db)
        .def_property_readonly("schemes", [](const scenario::Scenario& s) { return s.schemes; })
        .def("to_json", [](const scenario::Scenario& s) { return scenario::to_json(s).dump(); })
        .def("variants",
             [](const scenario::Scenario& s) {
                 std::vector<std::string> labels;
                 for (const auto& v : scenario::resolve_variants(s)) labels.push_back(v.label);
                 return labels;
             })
        .def(
            "stats",
            [](const scenario::Scenario& s, std::size_t variant) {
                const auto variants = scenario::resolve_variants(s);
                const auto& v = pick(variants, variant);
                return channel::compute_stats(v.network, v.phases);
            },
            py::arg("variant") = 0, "Channel statistics of one variant under its configured phases.")
        .def(
            "optimal_phases",
            [](const scenario::Scenario& s, std::size_t variant) {
                const auto variants = scenario::resolve_variants(s);
                const auto sol = optimizer::optimal_phases(pick(variants, variant).network);
                py::dict d;
                d["phases"] = sol.phases.thetas;
                d["psi_glos_achieved"] = sol.psi_glos_achieved;
                d["upper_bound"] = sol.upper_bound;
                d["gap"] = sol.gap;
                return d;
            },
            py::arg("variant") = 0)
        .def(
            "simulate_outage",
            [](const scenario::Scenario& s, Scheme scheme, unsigned rounds, double snr_db, std::uint64_t trials,
               std::uint64_t seed, std::size_t variant, unsigned workers) {
                const auto variants = scenario::resolve_variants(s);
                const auto& v = pick(variants, variant);
                montecarlo::SimulationPlan plan;
                plan.trials = trials;
                plan.seed = seed;
                plan.max_rounds = rounds;
                plan.scheme = scheme;
                plan.rate = s.rate;
                plan.rho = from_db(snr_db);
                plan.workers = workers;
                const auto est = [&] {
                    py::gil_scoped_release release;
                    return montecarlo::estimate_outage(v.network, v.phases, plan);
                }();
                return py::make_tuple(est.p_hat, est.std_error);
            },
            py::arg("scheme"), py::arg("rounds"), py::arg("snr_db"), py::arg("trials") = 100000, py::arg("seed") = 1,
            py::arg("variant") = 0, py::arg("workers") = 0, "(p_hat, std_error) from Monte-Carlo trials.");

    m.def("subcommands", &runner::subcommands);
    m.def(
        "run",
        [](const std::string& subcommand, const std::filesystem::path& scenario_path, const std::filesystem::path& out,
           std::optional<std::uint64_t> trials, std::optional<std::uint64_t> seed,
           const std::optional<std::string>& trunc, unsigned workers) {
            runner::RunOptions opt;
            opt.out_dir = out;
            opt.workers = workers;
            opt.trials = trials;
            opt.seed = seed;
            if (trunc) opt.truncation = runner::parse_truncation(*trunc);
            opt.scenario_source = scenario_path.string();
            const auto sc = runner::apply_overrides(scenario::load_scenario(scenario_path), opt);
            py::gil_scoped_release release;
            const auto outputs = runner::run(subcommand, sc, opt);
            return std::make_pair(outputs.csv, outputs.manifest);
        },
        py::arg("subcommand"), py::arg("scenario"), py::arg("out"), py::arg("trials") = py::none(),
        py::arg("seed") = py::none(), py::arg("trunc") = py::none(), py::arg("workers") = 0,
        "Runs one CLI subcommand; returns (csv_path, manifest_path).");
}
