#pragma once

// Command-line front door. Subcommands evaluate the PME distribution and its
// transforms, run the busy-period forward/inverse calculus, and drive the
// discrete-event simulator, emitting CSV or JSON tables for plotting.
//
// Exit codes: 0 success, 2 argument/domain error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "busy_period.hpp"
#include "extended_real.hpp"
#include "pme.hpp"
#include "simulator.hpp"
#include "stats.hpp"
#include "table.hpp"
#include "tail_curve.hpp"
#include "transforms.hpp"

namespace pmeq::cli {

using nlohmann::json;

struct GridFlags {
    std::string spec;  // "start:stop:count"
    bool log = false;
};

inline std::vector<double> build_grid(const GridFlags& g, const std::string& what) {
    double a = 0.0, b = 0.0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(g.spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !is.eof())
        throw std::invalid_argument(what + ": grid must be start:stop:count, got '" + g.spec + "'");
    if (n < 2) throw std::invalid_argument(what + ": grid count must be >= 2");
    if (!(b > a)) throw std::invalid_argument(what + ": grid stop must exceed start");
    if (g.log && !(a > 0.0)) throw std::invalid_argument(what + ": log grid needs start > 0");
    return g.log ? logspace(a, b, n) : linspace(a, b, n);
}

inline ServiceModel parse_service(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("service must be kind:param (exp:RATE, det:VALUE, pareto:R, pme:R)");
    const std::string kind = spec.substr(0, colon);
    double param = 0.0;
    try {
        std::size_t used = 0;
        param = std::stod(spec.substr(colon + 1), &used);
        if (colon + 1 + used != spec.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("service parameter is not a number in '" + spec + "'");
    }
    if (kind == "exp") return ServiceModel{Exponential(param)};
    if (kind == "det") return ServiceModel{Deterministic(param)};
    if (kind == "pareto") return ServiceModel{ParetoParams(param)};
    if (kind == "pme") return ServiceModel{PmeParams(param)};
    throw std::invalid_argument("unknown service kind '" + kind + "' (use exp, det, pareto, pme)");
}

namespace detail {

struct OutputFlags {
    std::string format = "csv";
    std::string path;  // empty = stdout
};

inline void add_output_flags(CLI::App* cmd, OutputFlags& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", out.path, "Output path (default: standard output)");
}

inline void emit(const OutputFlags& flags, std::ostream& fallback, const std::string& payload) {
    if (flags.path.empty()) {
        fallback << payload;
        return;
    }
    std::ofstream f(flags.path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output path '" + flags.path + "'");
    f << payload;
}

inline json json_number_or_inf(const ExtendedReal& v) {
    if (v.is_finite()) return v.value();
    return v.str();  // "inf" / "-inf" as strings, never IEEE specials
}

// --- pme ------------------------------------------------------------------

struct PmeArgs {
    double r = 0.0;
    GridFlags grid{"", false};
    OutputFlags out;
};

inline std::string run_pme(const PmeArgs& a) {
    GridFlags g = a.grid;
    if (g.spec.empty()) g = {"1e-3:50:400", true};
    const auto grid = build_grid(g, "pme");
    const PmeParams p(a.r);

    std::vector<double> pdf(grid.size()), tail(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        pdf[i] = pme_pdf(p, grid[i]);
        tail[i] = pme_tail(p, grid[i]);
    }
    const int n_max = static_cast<int>(std::ceil(a.r)) + 2;
    std::vector<ExtendedReal> moments;
    for (int n = 1; n <= n_max; ++n) moments.push_back(pme_moment(p, n));

    std::ostringstream os;
    if (a.out.format == "json") {
        json j;
        j["r"] = a.r;
        j["grid"] = grid;
        j["pdf"] = pdf;
        j["tail"] = tail;
        json ms = json::array();
        for (int n = 1; n <= n_max; ++n) {
            ms.push_back({{"n", n}, {"value", json_number_or_inf(moments[static_cast<std::size_t>(n - 1)])}});
        }
        j["moments"] = ms;
        os << j.dump(2) << '\n';
    } else {
        Table t;
        t.columns = {{"t", "time", {}}, {"pdf", "1/time", {}}, {"tail", "dimensionless", {}}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.columns[0].cells.emplace_back(grid[i]);
            t.columns[1].cells.emplace_back(pdf[i]);
            t.columns[2].cells.emplace_back(tail[i]);
        }
        t.write_csv(os);
        os << '\n';
        Table m;
        m.columns = {{"n", "order", {}}, {"moment", "time^n", {}}};
        for (int n = 1; n <= n_max; ++n) {
            m.columns[0].cells.emplace_back(static_cast<double>(n));
            m.columns[1].cells.push_back(cell_of(moments[static_cast<std::size_t>(n - 1)]));
        }
        m.write_csv(os);
    }
    return os.str();
}

// --- lt -------------------------------------------------------------------

struct LtArgs {
    double r = 0.0;
    int max_deriv = 2;
    GridFlags grid{"", false};
    OutputFlags out;
};

inline std::string run_lt(const LtArgs& a) {
    if (a.max_deriv < 0) throw std::invalid_argument("lt: --max-deriv must be >= 0");
    GridFlags g = a.grid;
    if (g.spec.empty()) g = {"1e-3:50:400", true};
    const auto sgrid = build_grid(g, "lt");

    std::vector<double> gvals(sgrid.size()), hvals(sgrid.size());
    std::vector<std::vector<ExtendedReal>> derivs(static_cast<std::size_t>(a.max_deriv));
    for (std::size_t i = 0; i < sgrid.size(); ++i) {
        const double s = sgrid[i];
        gvals[i] = pme_lt(a.r, s).value.value();
        hvals[i] = pme_tail_lt(a.r, s).value.value();
        for (int n = 1; n <= a.max_deriv; ++n) {
            auto& col = derivs[static_cast<std::size_t>(n - 1)];
            col.push_back(s > 0.0 ? pme_tail_lt_deriv(a.r, s, n).value
                                  : pme_tail_lt_deriv_at_zero(a.r, n).value);
        }
    }
    std::vector<ExtendedReal> limits;
    for (int n = 0; n <= a.max_deriv; ++n) limits.push_back(pme_tail_lt_deriv_at_zero(a.r, n).value);

    std::ostringstream os;
    if (a.out.format == "json") {
        json j;
        j["r"] = a.r;
        j["s"] = sgrid;
        j["g"] = gvals;
        j["h"] = hvals;
        json d = json::object();
        for (int n = 1; n <= a.max_deriv; ++n) {
            json col = json::array();
            for (const auto& v : derivs[static_cast<std::size_t>(n - 1)]) col.push_back(json_number_or_inf(v));
            d[std::to_string(n)] = col;
        }
        j["h_deriv"] = d;
        json lim = json::array();
        for (int n = 0; n <= a.max_deriv; ++n) {
            lim.push_back({{"n", n}, {"value", json_number_or_inf(limits[static_cast<std::size_t>(n)])}});
        }
        j["limits_at_zero"] = lim;
        os << j.dump(2) << '\n';
    } else {
        Table t;
        t.columns = {{"s", "1/time", {}}, {"g", "dimensionless", {}}, {"h", "time", {}}};
        for (int n = 1; n <= a.max_deriv; ++n) {
            t.columns.push_back({"h_d" + std::to_string(n), "time^" + std::to_string(n + 1), {}});
        }
        for (std::size_t i = 0; i < sgrid.size(); ++i) {
            t.columns[0].cells.emplace_back(sgrid[i]);
            t.columns[1].cells.emplace_back(gvals[i]);
            t.columns[2].cells.emplace_back(hvals[i]);
            for (int n = 1; n <= a.max_deriv; ++n) {
                t.columns[static_cast<std::size_t>(2 + n)].cells.push_back(
                    cell_of(derivs[static_cast<std::size_t>(n - 1)][i]));
            }
        }
        t.write_csv(os);
        os << '\n';
        Table lim;
        lim.columns = {{"n", "order", {}}, {"limit_at_zero", "time^(n+1)", {}}};
        for (int n = 0; n <= a.max_deriv; ++n) {
            lim.columns[0].cells.emplace_back(static_cast<double>(n));
            lim.columns[1].cells.push_back(cell_of(limits[static_cast<std::size_t>(n)]));
        }
        lim.write_csv(os);
    }
    return os.str();
}

// --- busy -----------------------------------------------------------------

struct BusyArgs {
    double lambda = 0.0;
    std::string service;
    GridFlags tgrid{"", false};
    GridFlags sgrid{"", false};
    OutputFlags out;
};

inline std::string run_busy(const BusyArgs& a) {
    const QueueParams q(a.lambda, parse_service(a.service));
    GridFlags tg = a.tgrid.spec.empty() ? GridFlags{"1e-3:50:400", true} : a.tgrid;
    GridFlags sg = a.sgrid.spec.empty() ? GridFlags{"1e-2:50:40", true} : a.sgrid;
    const auto tgrid = build_grid(tg, "busy t");
    const auto sgrid = build_grid(sg, "busy s");
    if (tgrid.front() <= 0.0) throw std::invalid_argument("busy: t grid must be positive for inversion");

    const double rho = q.rho();
    const double u0 = busy_tail_lt(q, 0.0);
    const double u0_ref = (std::exp(rho) - 1.0) / q.lambda;

    std::vector<double> uvals(sgrid.size());
    for (std::size_t i = 0; i < sgrid.size(); ++i) uvals[i] = busy_tail_lt(q, sgrid[i]);
    auto inverted = busy_tail(q, tgrid);

    std::ostringstream os;
    if (a.out.format == "json") {
        json j;
        j["lambda"] = a.lambda;
        j["rho"] = rho;
        j["u0"] = u0;
        j["u0_reference"] = u0_ref;
        j["max_excursion"] = inverted.max_excursion;
        j["s"] = sgrid;
        j["u"] = uvals;
        j["t"] = inverted.curve.grid;
        j["tail"] = inverted.curve.values;
        os << j.dump(2) << '\n';
    } else {
        Table summary;
        summary.columns = {{"lambda", "1/time", {Cell{a.lambda}}},
                           {"rho", "dimensionless", {Cell{rho}}},
                           {"u0", "time", {Cell{u0}}},
                           {"u0_reference", "time", {Cell{u0_ref}}},
                           {"max_excursion", "dimensionless", {Cell{inverted.max_excursion}}}};
        summary.write_csv(os);
        os << '\n';
        Table st;
        st.columns = {{"s", "1/time", {}}, {"u", "time", {}}};
        for (std::size_t i = 0; i < sgrid.size(); ++i) {
            st.columns[0].cells.emplace_back(sgrid[i]);
            st.columns[1].cells.emplace_back(uvals[i]);
        }
        st.write_csv(os);
        os << '\n';
        Table tt;
        tt.columns = {{"t", "time", {}}, {"tail", "dimensionless", {}}};
        for (std::size_t i = 0; i < inverted.curve.grid.size(); ++i) {
            tt.columns[0].cells.emplace_back(inverted.curve.grid[i]);
            tt.columns[1].cells.emplace_back(inverted.curve.values[i]);
        }
        tt.write_csv(os);
    }
    return os.str();
}

// --- recover --------------------------------------------------------------

struct RecoverArgs {
    double r = 0.0;
    double lambda = 0.0;
    GridFlags grid{"", false};
    OutputFlags out;
};

inline std::string run_recover(const RecoverArgs& a) {
    GridFlags g = a.grid.spec.empty() ? GridFlags{"1e-3:50:400", true} : a.grid;
    const auto grid = build_grid(g, "recover");
    if (grid.front() <= 0.0) throw std::invalid_argument("recover: grid must be positive for inversion");

    auto rec = recover_service_from_pme_busy(a.r, a.lambda, grid);

    const double t_base = rec.service_tail.grid.back() / 8.0;
    struct MomentRow {
        int n;
        std::array<double, 4> values;
        TailClass verdict;
    };
    std::vector<MomentRow> rows;
    for (int n = 0; n <= 3; ++n) {
        std::array<double, 4> v{};
        for (int k = 0; k < 4; ++k) {
            v[static_cast<std::size_t>(k)] = equilibrium_tail_moment(
                rec.service_tail, n, t_base * std::pow(2.0, k), rec.implied_alpha);
        }
        rows.push_back({n, v, divergence_diagnostic(v)});
    }

    std::ostringstream os;
    if (a.out.format == "json") {
        json j;
        j["r"] = a.r;
        j["lambda"] = a.lambda;
        j["implied_alpha"] = rec.implied_alpha;
        j["max_excursion"] = rec.max_excursion;
        j["t"] = rec.service_tail.grid;
        j["tail"] = rec.service_tail.values;
        j["truncation_T"] = t_base;
        json ms = json::array();
        for (const auto& row : rows) {
            ms.push_back({{"n", row.n},
                          {"at_T", row.values[0]},
                          {"at_2T", row.values[1]},
                          {"at_4T", row.values[2]},
                          {"at_8T", row.values[3]},
                          {"classification", to_string(row.verdict)}});
        }
        j["equilibrium_moments"] = ms;
        os << j.dump(2) << '\n';
    } else {
        Table summary;
        summary.columns = {{"r", "dimensionless", {Cell{a.r}}},
                           {"lambda", "1/time", {Cell{a.lambda}}},
                           {"implied_alpha", "time", {Cell{rec.implied_alpha}}},
                           {"max_excursion", "dimensionless", {Cell{rec.max_excursion}}}};
        summary.write_csv(os);
        os << '\n';
        Table tt;
        tt.columns = {{"t", "time", {}}, {"tail", "dimensionless", {}}};
        for (std::size_t i = 0; i < rec.service_tail.grid.size(); ++i) {
            tt.columns[0].cells.emplace_back(rec.service_tail.grid[i]);
            tt.columns[1].cells.emplace_back(rec.service_tail.values[i]);
        }
        tt.write_csv(os);
        os << '\n';
        Table ms;
        ms.columns = {{"n", "order", {}},       {"at_T", "time^n", {}},  {"at_2T", "time^n", {}},
                      {"at_4T", "time^n", {}},  {"at_8T", "time^n", {}}, {"classification", "verdict", {}}};
        for (const auto& row : rows) {
            ms.columns[0].cells.emplace_back(static_cast<double>(row.n));
            for (int k = 0; k < 4; ++k)
                ms.columns[static_cast<std::size_t>(1 + k)].cells.emplace_back(
                    row.values[static_cast<std::size_t>(k)]);
            ms.columns[5].cells.emplace_back(std::string(to_string(row.verdict)));
        }
        ms.write_csv(os);
    }
    return os.str();
}

// --- sim ------------------------------------------------------------------

struct SimArgs {
    double lambda = 0.0;
    std::string service;
    std::int64_t n_busy = -1;
    double horizon = -1.0;
    std::uint64_t seed = 1;
    GridFlags grid{"", false};
    bool compare = false;
    OutputFlags out;
};

inline std::string run_sim(const SimArgs& a) {
    SimConfig cfg{QueueParams(a.lambda, parse_service(a.service))};
    cfg.target_busy_periods = a.n_busy;
    cfg.horizon = a.horizon;
    cfg.seed = a.seed;
    cfg.validate();

    GridFlags g = a.grid.spec.empty() ? GridFlags{"1e-2:50:60", true} : a.grid;
    const auto grid = build_grid(g, "sim");

    auto res = simulate(cfg);
    if (res.busy_lengths.empty()) throw numerical_error("sim: no complete busy period before the horizon");
    auto emp = empirical_tail(res.busy_lengths, grid);

    std::optional<InvertedTail> ana;
    double sup_distance = 0.0;
    if (a.compare) {
        std::vector<double> positive;
        for (double t : grid) {
            if (t > 0.0) positive.push_back(t);
        }
        ana = busy_tail(cfg.queue, positive);
        for (std::size_t i = 0; i < emp.grid.size(); ++i) {
            sup_distance = std::max(sup_distance,
                                    std::abs(emp.values[i] - ana->curve.value_at(emp.grid[i])));
        }
    }

    const double mean_busy = sample_mean(res.busy_lengths);
    const double se_busy = res.busy_lengths.size() > 1 ? sample_stderr(res.busy_lengths) : 0.0;
    const double mean_idle = res.idle_lengths.empty() ? 0.0 : sample_mean(res.idle_lengths);

    std::ostringstream os;
    if (a.out.format == "json") {
        json j;
        j["summary"] = {{"n_busy", res.busy_lengths.size()},
                        {"n_idle", res.idle_lengths.size()},
                        {"mean_busy", mean_busy},
                        {"se_busy", se_busy},
                        {"mean_idle", mean_idle},
                        {"busy_fraction", res.busy_fraction},
                        {"empty_fraction", 1.0 - res.busy_fraction},
                        {"rng_draws", res.rng_draws},
                        {"seed", cfg.seed}};
        j["t"] = emp.grid;
        j["empirical_tail"] = emp.values;
        if (ana) {
            json av = json::array();
            for (double t : emp.grid) av.push_back(ana->curve.value_at(t));
            j["analytic_tail"] = av;
            j["sup_distance"] = sup_distance;
        }
        os << j.dump(2) << '\n';
    } else {
        Table summary;
        summary.columns = {{"n_busy", "count", {Cell{static_cast<double>(res.busy_lengths.size())}}},
                           {"n_idle", "count", {Cell{static_cast<double>(res.idle_lengths.size())}}},
                           {"mean_busy", "time", {Cell{mean_busy}}},
                           {"se_busy", "time", {Cell{se_busy}}},
                           {"mean_idle", "time", {Cell{mean_idle}}},
                           {"busy_fraction", "dimensionless", {Cell{res.busy_fraction}}},
                           {"empty_fraction", "dimensionless", {Cell{1.0 - res.busy_fraction}}},
                           {"rng_draws", "count", {Cell{static_cast<double>(res.rng_draws)}}}};
        if (ana) summary.columns.push_back({"sup_distance", "dimensionless", {Cell{sup_distance}}});
        summary.write_csv(os);
        os << '\n';
        Table tt;
        tt.columns = {{"t", "time", {}}, {"empirical_tail", "dimensionless", {}}};
        if (ana) tt.columns.push_back({"analytic_tail", "dimensionless", {}});
        for (std::size_t i = 0; i < emp.grid.size(); ++i) {
            tt.columns[0].cells.emplace_back(emp.grid[i]);
            tt.columns[1].cells.emplace_back(emp.values[i]);
            if (ana) tt.columns[2].cells.emplace_back(ana->curve.value_at(emp.grid[i]));
        }
        tt.write_csv(os);
    }
    return os.str();
}

}  // namespace detail

// Parses and runs one invocation. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PME distribution and infinite-server busy-period toolkit"};
    app.require_subcommand(1);

    detail::PmeArgs pme_args;
    auto* pme_cmd = app.add_subcommand("pme", "Evaluate the PME density, tail and moments");
    pme_cmd->add_option("--r", pme_args.r, "Shape parameter (> 1)")->required();
    pme_cmd->add_option("--grid", pme_args.grid.spec, "Time grid start:stop:count");
    pme_cmd->add_flag("--log", pme_args.grid.log, "Log-spaced grid");
    detail::add_output_flags(pme_cmd, pme_args.out);

    detail::LtArgs lt_args;
    auto* lt_cmd = app.add_subcommand("lt", "Evaluate the PME transforms and derivative limits");
    lt_cmd->add_option("--r", lt_args.r, "Shape parameter (> 1)")->required();
    lt_cmd->add_option("--max-deriv", lt_args.max_deriv, "Highest derivative order")->capture_default_str();
    lt_cmd->add_option("--grid", lt_args.grid.spec, "s grid start:stop:count");
    lt_cmd->add_flag("--log", lt_args.grid.log, "Log-spaced grid");
    detail::add_output_flags(lt_cmd, lt_args.out);

    detail::BusyArgs busy_args;
    auto* busy_cmd = app.add_subcommand("busy", "Busy-period transform and inverted tail");
    busy_cmd->add_option("--lambda", busy_args.lambda, "Arrival rate")->required();
    busy_cmd->add_option("--service", busy_args.service, "Service model kind:param")->required();
    busy_cmd->add_option("--grid", busy_args.tgrid.spec, "t grid start:stop:count");
    busy_cmd->add_flag("--log", busy_args.tgrid.log, "Log-spaced t grid");
    busy_cmd->add_option("--sgrid", busy_args.sgrid.spec, "s grid start:stop:count");
    busy_cmd->add_flag("--slog", busy_args.sgrid.log, "Log-spaced s grid");
    detail::add_output_flags(busy_cmd, busy_args.out);

    detail::RecoverArgs rec_args;
    auto* rec_cmd = app.add_subcommand("recover", "Recover the service tail from a PME busy period");
    rec_cmd->add_option("--r", rec_args.r, "Busy-period shape parameter (> 1)")->required();
    rec_cmd->add_option("--lambda", rec_args.lambda, "Arrival rate")->required();
    rec_cmd->add_option("--grid", rec_args.grid.spec, "t grid start:stop:count");
    rec_cmd->add_flag("--log", rec_args.grid.log, "Log-spaced grid");
    detail::add_output_flags(rec_cmd, rec_args.out);

    detail::SimArgs sim_args;
    auto* sim_cmd = app.add_subcommand("sim", "Discrete-event simulation of busy/idle periods");
    sim_cmd->add_option("--lambda", sim_args.lambda, "Arrival rate")->required();
    sim_cmd->add_option("--service", sim_args.service, "Service model kind:param")->required();
    sim_cmd->add_option("--n", sim_args.n_busy, "Stop after N complete busy periods");
    sim_cmd->add_option("--horizon", sim_args.horizon, "Stop at this time horizon");
    sim_cmd->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("--grid", sim_args.grid.spec, "Tail grid start:stop:count");
    sim_cmd->add_flag("--log", sim_args.grid.log, "Log-spaced grid");
    sim_cmd->add_flag("--compare", sim_args.compare, "Also invert the analytic tail and report sup distance");
    detail::add_output_flags(sim_cmd, sim_args.out);

    // CLI11 consumes a reversed argument vector
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);  // --help and friends
        }
        err << e.what() << '\n';
        return 2;
    }

    try {
        std::string payload;
        detail::OutputFlags flags;
        if (pme_cmd->parsed()) {
            payload = detail::run_pme(pme_args);
            flags = pme_args.out;
        } else if (lt_cmd->parsed()) {
            payload = detail::run_lt(lt_args);
            flags = lt_args.out;
        } else if (busy_cmd->parsed()) {
            payload = detail::run_busy(busy_args);
            flags = busy_args.out;
        } else if (rec_cmd->parsed()) {
            payload = detail::run_recover(rec_args);
            flags = rec_args.out;
        } else {
            payload = detail::run_sim(sim_args);
            flags = sim_args.out;
        }
        detail::emit(flags, out, payload);
        return 0;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace pmeq::cli
