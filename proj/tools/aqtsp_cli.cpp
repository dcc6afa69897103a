#include "aqtsp/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config;
    std::string problem, instance, theta, penalty, fault, schedule, stepper, family, output_dir, format;
    int per_mode_max = 0, link_total_max = 0, max_link_total = 0, sample_stride = 0, samples = 0, levels = 0;
    int M = 0, marked = 0;
    std::vector<int> Ms;
    double K = 0, inflation = 0, T = 0, dt = 0, krylov_tol = 0, orthogonal_tol = 0, target = 0, dt_over_T = 0, T_max = 0;
    bool symmetric = false;
};

// Flags given on the command line override the config document key by key.
ordered_json overlay(const CLI::App& app, const Flags& f) {
    ordered_json doc = ordered_json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw aqtsp::ValidationError("cannot open config file " + f.config);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            doc = ordered_json::parse(buf.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw aqtsp::ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw aqtsp::ValidationError("config must be a JSON object");
    }
    auto given = [&](const char* name) { return app.count(name) > 0; };
    auto set = [&](const char* flag, std::initializer_list<const char*> path, const ordered_json& value) {
        if (!given(flag)) return;
        ordered_json* node = &doc;
        auto it = path.begin();
        for (; std::next(it) != path.end(); ++it) node = &(*node)[*it];
        (*node)[*it] = value;
    };
    set("--problem", {"problem"}, f.problem);
    set("--instance", {"instance"}, f.instance);
    if (given("--theta")) {
        if (f.theta == "auto") {
            doc["theta"] = "auto";
        } else {
            try {
                std::size_t used = 0;
                const double v = std::stod(f.theta, &used);
                if (used != f.theta.size()) throw std::invalid_argument(f.theta);
                doc["theta"] = v;
            } catch (const std::exception&) {
                throw aqtsp::ValidationError("--theta must be a number or auto, got '" + f.theta + "'");
            }
        }
    }
    set("--per-mode-max", {"cutoff", "per_mode_max"}, f.per_mode_max);
    set("--link-total-max", {"cutoff", "link_total_max"}, f.link_total_max);
    set("--symmetric", {"symmetric_links"}, f.symmetric);
    set("--scale-inflation", {"scale_inflation"}, f.inflation);
    set("--penalty", {"penalty"}, f.penalty);
    set("--max-link-total", {"max_link_total"}, f.max_link_total);
    set("--fault", {"fault"}, f.fault);
    set("--schedule", {"schedule", "kind"}, f.schedule);
    set("--K", {"schedule", "K"}, f.K);
    set("--T", {"T"}, f.T);
    set("--dt", {"dt"}, f.dt);
    set("--stepper", {"stepper"}, f.stepper);
    set("--sample-stride", {"sample_stride"}, f.sample_stride);
    set("--krylov-tol", {"krylov_tolerance"}, f.krylov_tol);
    set("--orthogonal-tol", {"orthogonal_tol"}, f.orthogonal_tol);
    set("--samples", {"spectrum", "samples"}, f.samples);
    set("--levels", {"spectrum", "levels"}, f.levels);
    set("--M", {"search", "M"}, f.M);
    set("--marked", {"search", "marked"}, f.marked);
    set("--Ms", {"search", "Ms"}, f.Ms);
    set("--family", {"search", "family"}, f.family);
    set("--target", {"search", "target"}, f.target);
    set("--dt-over-T", {"search", "dt_over_T"}, f.dt_over_T);
    set("--T-max", {"search", "T_max"}, f.T_max);
    set("--output-dir", {"output_dir"}, f.output_dir);
    set("--format", {"report_format"}, f.format);
    return doc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic TSP simulator on truncated bosonic Fock spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "JSON run configuration; flags override its keys");
    app.add_option("--problem", f.problem, "tsp | search");
    app.add_option("--instance", f.instance, "instance document (n_cities, distances)");
    app.add_option("--theta", f.theta, "link displacement, or auto");
    app.add_option("--per-mode-max", f.per_mode_max, "occupation cap per mode");
    app.add_option("--link-total-max", f.link_total_max, "cap on the total link occupation");
    app.add_flag("--symmetric", f.symmetric, "one mode per undirected link; requires a symmetric instance");
    app.add_option("--scale-inflation", f.inflation, "relative inflation of s above half the total distance");
    app.add_option("--penalty", f.penalty, "hermitian_square | squared_plus_hc");
    app.add_option("--max-link-total", f.max_link_total, "verify-filter link-total bound (0: default)");
    app.add_option("--fault", f.fault, "none | transposed_link (verify-filter fault injection)");
    app.add_option("--schedule", f.schedule, "linear | scaled | quadratic_boost | exponential_boost | tabulated");
    app.add_option("--K", f.K, "schedule boost factor");
    app.add_option("--T", f.T, "total evolution time");
    app.add_option("--dt", f.dt, "time step");
    app.add_option("--stepper", f.stepper, "magnus4 | midpoint");
    app.add_option("--sample-stride", f.sample_stride, "record every n-th step");
    app.add_option("--krylov-tol", f.krylov_tol, "error budget per matrix exponential");
    app.add_option("--orthogonal-tol", f.orthogonal_tol, "survival amplitude counted as orthogonal");
    app.add_option("--samples", f.samples, "spectrum: number of tau samples");
    app.add_option("--levels", f.levels, "spectrum: number of levels");
    app.add_option("--M", f.M, "search: number of items");
    app.add_option("--marked", f.marked, "search: marked item (0-based)");
    app.add_option("--Ms", f.Ms, "search-bench: item counts, comma separated")->delimiter(',');
    app.add_option("--family", f.family, "search-bench: linear | scaled_sqrt_m | quadratic_boost_sqrt_m | exponential_boost_e_m");
    app.add_option("--target", f.target, "search-bench: success target");
    app.add_option("--dt-over-T", f.dt_over_T, "search-bench: step size relative to T");
    app.add_option("--T-max", f.T_max, "search-bench: largest T tried");
    app.add_option("--output-dir", f.output_dir, "directory for reports and tables");
    app.add_option("--format", f.format, "json | text");
    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    using Command = std::function<aqtsp::cli::CommandOutput(const aqtsp::cli::RunConfig&)>;
    const std::vector<std::tuple<std::string, std::string, Command>> commands{
        {"solve-classical", "exact shortest tours by exhaustive search", aqtsp::cli::cmd_solve_classical},
        {"verify-filter", "exhaustive check of the filtering operator", aqtsp::cli::cmd_verify_filter},
        {"spectrum", "lowest levels along the interpolation", aqtsp::cli::cmd_spectrum},
        {"evolve", "time evolution and success probability", aqtsp::cli::cmd_evolve},
        {"bounds", "characteristic times and energy estimates", aqtsp::cli::cmd_bounds},
        {"search-bench", "run-time scaling of adiabatic search", aqtsp::cli::cmd_search_bench},
    };
    std::map<const CLI::App*, Command> dispatch;
    for (const auto& [name, help, fn] : commands) dispatch[app.add_subcommand(name, help)] = fn;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto config = aqtsp::cli::RunConfig::from_json(overlay(app, f).dump());
        if (print_config) {
            std::cout << config.to_json() << "\n";
            return 0;
        }
        for (const auto& [sub, fn] : dispatch) {
            if (!sub->parsed()) continue;
            const auto out = fn(config);
            std::cout << out.report;
            for (const auto& file : out.files) std::cerr << "wrote " << file << "\n";
            if (!out.checks_passed) {
                std::cerr << "error: an embedded check failed (see checks in the report)\n";
                return 3;
            }
        }
        return 0;
    } catch (const aqtsp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const aqtsp::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\nhint: lower --per-mode-max or set --link-total-max\n";
        return 2;
    } catch (const aqtsp::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\nhint: reduce --dt or tighten --krylov-tol\n";
        return 3;
    } catch (const aqtsp::InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
