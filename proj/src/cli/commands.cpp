#include "aqtsp/cli/commands.hpp"

#include "aqtsp/bounds/bounds.hpp"
#include "aqtsp/evolution/spectral.hpp"
#include "aqtsp/fock/coherent.hpp"
#include "aqtsp/io/report.hpp"
#include "aqtsp/linalg/eigensolver.hpp"
#include "aqtsp/search/search.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"
#include "aqtsp/tsp/q_combinatorial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace aqtsp::cli {

using nlohmann::ordered_json;

namespace {

ordered_json item(double v, const std::string& label) {
    ordered_json j;
    j["value"] = io::json_number(v);
    j["label"] = label;
    return j;
}

void flatten(const ordered_json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const auto& e) { return e.is_structured(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

std::string path_in(const RunConfig& config, const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
}

CommandOutput finish(const RunConfig& config, const std::string& command, ordered_json doc,
                     std::vector<std::string> files, bool passed) {
    ordered_json out;
    out["command"] = command;
    out["checks_passed"] = passed;
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = it.value();
    out["config"] = ordered_json::parse(config.to_json());
    CommandOutput result;
    if (config.report_format == "text") {
        flatten(out, "", result.report);
    } else {
        result.report = out.dump(2) + "\n";
    }
    const auto report_path = path_in(config, command + (config.report_format == "text" ? ".txt" : ".json"));
    io::write_text(report_path, result.report);
    files.insert(files.begin(), report_path);
    result.files = std::move(files);
    result.checks_passed = passed;
    return result;
}

ordered_json tour_json(const oracle::Tour& t) {
    ordered_json j;
    j["sequence"] = t.sequence;
    j["length"] = t.length;
    return j;
}

tsp::TspInstance load_configured_instance(const RunConfig& config) {
    if (config.instance.empty()) throw ValidationError("no instance given (set 'instance' or pass --instance)");
    return tsp::load_instance(config.instance, config.symmetric_links);
}

/// Either problem reduced to what the dynamics commands need.
struct Problem {
    fock::SparseOperator H_I, H_P;
    Vector psi0;
    evolution::SubspaceProjector target;
    ordered_json meta;
    std::optional<TspSetup> tsp;
};

Problem load_problem(const RunConfig& config) {
    Problem p;
    if (config.problem == "search") {
        const auto inst = search::SearchInstance::uniform(config.search_M, config.search_marked);
        auto h = search::build_search_hamiltonians(inst);
        p.H_I = std::move(h.H0);
        p.H_P = std::move(h.Hf);
        p.psi0 = inst.amplitudes;
        p.target = evolution::SubspaceProjector::from_indices(inst.M, {inst.marked});
        p.meta["problem"] = "search";
        p.meta["M"] = inst.M;
        p.meta["marked"] = inst.marked;
        p.meta["dimension"] = inst.M;
        return p;
    }
    auto setup = prepare_tsp(config);
    p.H_I = setup.H_I;
    p.H_P = setup.H_P;
    p.psi0 = setup.psi0;
    p.target = setup.target;
    p.meta["problem"] = "tsp";
    p.meta["n_cities"] = setup.instance.n_cities();
    p.meta["theta"] = item(setup.theta, "link displacement of the initial Hamiltonian");
    p.meta["s"] = item(setup.s, "penalty scale s");
    p.meta["dimension"] = setup.basis.dimension();
    p.meta["cutoff"] = setup.basis.cutoff().describe();
    p.meta["coherent_overlap"] =
        item(setup.coherent_overlap, "|<truncated coherent state|ground state of truncated H_I>|^2");
    p.meta["coherent_truncation_weight"] = item(setup.truncation_weight, "coherent-state mass lost to the caps");
    p.meta["optimal_length"] = setup.optimum.length;
    ordered_json tours = ordered_json::array();
    for (const auto& t : setup.optimum.tours) tours.push_back(tour_json(t));
    p.meta["optimal_tours"] = tours;
    p.tsp = std::move(setup);
    return p;
}

} // namespace

double resolve_theta(const RunConfig& config, int n_cities) {
    return config.theta ? *config.theta : bounds::theta_for_unit_resource(n_cities);
}

TspSetup prepare_tsp(const RunConfig& config) {
    auto instance = load_configured_instance(config);
    const int n = instance.n_cities();
    const double theta = resolve_theta(config, n);
    fock::OccupationCutoff cut;
    cut.per_mode_max = config.cutoff.per_mode_max;
    cut.link_total_max = config.cutoff.link_total_max;
    cut.hooker_total_max = 0;
    cut.marker_total_max = 0;
    fock::FockBasis basis(fock::ModeRegistry(n, config.symmetric_links), cut);
    const double s = tsp::scale_s(instance, config.scale_inflation);
    auto H_I = tsp::build_initial_hamiltonian(basis, cplx(theta, 0.0));
    auto H_P = tsp::sector_target_hamiltonian(instance, basis, config.penalty, s);

    const auto ground = linalg::lowest_eigenpairs(H_I, 1);
    Vector psi0 = ground.vectors.col(0);
    psi0.normalize();
    const auto coherent = fock::coherent_state(basis, cplx(theta, 0.0));
    const double overlap = std::norm(coherent.state.amplitudes().dot(psi0));

    auto optimum = oracle::brute_force_shortest(instance, config.symmetric_links);
    std::set<Eigen::Index> found;
    for (const auto& t : optimum.tours) {
        const auto state = oracle::tour_to_basis_state(t.sequence, basis.registry());
        const auto idx = basis.index_of(state);
        if (!idx) throw CapacityError("optimal tour lies outside the truncated basis; raise the link caps");
        found.insert(static_cast<Eigen::Index>(*idx));
    }
    std::vector<Eigen::Index> indices(found.begin(), found.end());
    auto target = evolution::SubspaceProjector::from_indices(static_cast<Eigen::Index>(basis.dimension()), indices);
    return TspSetup{std::move(instance),
                    theta,
                    s,
                    std::move(basis),
                    std::move(H_I),
                    std::move(H_P),
                    std::move(psi0),
                    overlap,
                    coherent.truncation_weight,
                    std::move(optimum),
                    std::move(indices),
                    std::move(target)};
}

fock::OccupationCutoff filter_cutoff(const RunConfig& config, int n_cities) {
    fock::OccupationCutoff cut = config.cutoff;
    if (!cut.link_total_max) {
        if (config.max_link_total > 0) cut.link_total_max = config.max_link_total;
        else if (n_cities > 3) cut.link_total_max = n_cities + 1;
    }
    if (n_cities > 3) {
        if (!cut.hooker_total_max) cut.hooker_total_max = 1;
        if (!cut.marker_total_max) cut.marker_total_max = n_cities - 1;
    }
    cut.validate();
    return cut;
}

FilterVerification verify_filter(int n_cities, const RunConfig& config, double tol) {
    FilterVerification v;
    v.n_cities = n_cities;
    v.cutoff = filter_cutoff(config, n_cities);
    const fock::FockBasis basis(fock::ModeRegistry(n_cities, config.symmetric_links), v.cutoff);
    const auto& reg = basis.registry();
    v.dimension = basis.dimension();
    const auto Q = tsp::build_Q(basis, config.fault);
    const Eigen::SparseMatrix<cplx, Eigen::ColMajor> Qc = Q.matrix();
    const std::size_t n_links = reg.link_count();

    auto state_of = [&](const std::vector<int>& links) {
        fock::BasisState st(reg.mode_count(), 0);
        std::copy(links.begin(), links.end(), st.begin());
        return st;
    };

    // Hamiltonian cycles with unit occupations are fixed points.
    {
        std::vector<fock::City> seq(n_cities);
        std::iota(seq.begin(), seq.end(), 1);
        std::set<std::vector<int>> seen;
        do {
            const auto links = oracle::tour_links(seq, reg);
            if (!seen.insert(links).second) continue;
            const auto idx = basis.index_of(state_of(links));
            if (!idx) continue;
            const auto col = static_cast<Eigen::Index>(*idx);
            double r = 0.0;
            bool diag = false;
            for (decltype(Qc)::InnerIterator it(Qc, col); it; ++it) {
                cplx val = it.value();
                if (it.row() == col) {
                    val -= 1.0;
                    diag = true;
                }
                r = std::max(r, std::abs(val));
            }
            if (!diag) r = std::max(r, 1.0);
            v.max_tour_residual = std::max(v.max_tour_residual, r);
            ++v.tours;
        } while (std::next_permutation(seq.begin() + 1, seq.end()));
    }

    // Elimination classes: nothing may survive in the h/m vacuum.
    const int link_total = v.cutoff.link_total_max.value_or(v.cutoff.per_mode_max * static_cast<int>(n_links));
    for (auto c : oracle::elimination_classes()) {
        ClassCheck cc;
        cc.config_class = c;
        for (const auto& links : oracle::configurations_of_class(reg, c, v.cutoff.per_mode_max, link_total)) {
            const auto idx = basis.index_of(state_of(links));
            if (!idx) continue;
            double vac = 0.0;
            for (decltype(Qc)::InnerIterator it(Qc, static_cast<Eigen::Index>(*idx)); it; ++it)
                if (basis.hm_vacuum(static_cast<std::size_t>(it.row()))) vac = std::max(vac, std::abs(it.value()));
            ++cc.configurations;
            cc.max_vacuum_component = std::max(cc.max_vacuum_component, vac);
            if (vac > tol) {
                ++cc.failures;
                if (cc.examples.size() < 3) cc.examples.push_back(links);
            }
        }
        v.classes.push_back(std::move(cc));
    }

    // Matrix against combinatorial expansion on every h/m-vacuum column.
    for (const auto col : basis.hm_vacuum_indices()) {
        const auto links = basis.link_occupations(static_cast<std::size_t>(col));
        std::map<Eigen::Index, double> expected;
        for (const auto& [st, val] : tsp::q_combinatorial_apply(reg, links, v.cutoff, config.fault)) {
            const auto idx = basis.index_of(st);
            if (!idx) {
                v.max_matrix_difference = std::max(v.max_matrix_difference, std::abs(val));
                continue;
            }
            expected[static_cast<Eigen::Index>(*idx)] += val;
        }
        for (decltype(Qc)::InnerIterator it(Qc, col); it; ++it) {
            auto e = expected.find(it.row());
            const double want = e == expected.end() ? 0.0 : e->second;
            if (e != expected.end()) expected.erase(e);
            v.max_matrix_difference = std::max(v.max_matrix_difference, std::abs(it.value() - want));
        }
        for (const auto& [row, val] : expected) v.max_matrix_difference = std::max(v.max_matrix_difference, std::abs(val));
        ++v.compared_columns;
    }

    v.passed = v.tours > 0 && v.max_tour_residual <= tol && v.max_matrix_difference <= tol &&
               std::all_of(v.classes.begin(), v.classes.end(), [](const ClassCheck& c) { return c.failures == 0; });
    return v;
}

CommandOutput cmd_solve_classical(const RunConfig& config) {
    const auto inst = load_configured_instance(config);
    const auto res = oracle::brute_force_shortest(inst, false);
    ordered_json doc;
    doc["n_cities"] = inst.n_cities();
    doc["optimal_length"] = item(res.length, "shortest closed tour length (exhaustive search)");
    ordered_json tours = ordered_json::array();
    for (const auto& t : res.tours) tours.push_back(tour_json(t));
    doc["optimal_tours"] = tours;
    return finish(config, "solve-classical", doc, {}, true);
}

CommandOutput cmd_verify_filter(const RunConfig& config) {
    const int n = load_configured_instance(config).n_cities();
    const auto v = verify_filter(n, config);
    ordered_json doc;
    doc["n_cities"] = n;
    doc["fault"] = config.fault == tsp::FilterFault::none ? "none" : "transposed_link";
    doc["cutoff"] = v.cutoff.describe();
    doc["dimension"] = v.dimension;
    doc["tours"] = {{"count", v.tours},
                    {"max_residual", item(v.max_tour_residual, "max |(Q - 1)|tour>| over unit-occupation cycles")},
                    {"pass", v.tours > 0 && v.max_tour_residual <= 1e-12}};
    ordered_json classes = ordered_json::array();
    for (const auto& c : v.classes) {
        ordered_json j;
        j["class"] = oracle::to_string(c.config_class);
        j["configurations"] = c.configurations;
        j["failures"] = c.failures;
        j["max_vacuum_component"] = io::json_number(c.max_vacuum_component);
        j["failing_examples"] = c.examples;
        j["pass"] = c.failures == 0;
        classes.push_back(j);
    }
    doc["elimination_classes"] = classes;
    doc["matrix_vs_combinatorial"] = {
        {"columns", v.compared_columns},
        {"max_difference", item(v.max_matrix_difference, "entrywise |Q matrix - combinatorial expansion|")},
        {"pass", v.max_matrix_difference <= 1e-12}};
    return finish(config, "verify-filter", doc, {}, v.passed);
}

CommandOutput cmd_spectrum(const RunConfig& config) {
    const auto p = load_problem(config);
    const auto sched = config.schedule.build();
    const auto flow = evolution::spectral_flow(p.H_I, p.H_P, sched, config.spectrum_samples, config.spectrum_levels);
    const int k = static_cast<int>(flow.levels.front().size());

    std::vector<std::string> cols{"tau"};
    for (int i = 0; i < k; ++i) cols.push_back("e" + std::to_string(i));
    cols.push_back("gap");
    io::Table table(cols);
    for (std::size_t i = 0; i < flow.tau.size(); ++i) {
        std::vector<double> row{flow.tau[i]};
        for (int j = 0; j < k; ++j) row.push_back(flow.levels[i][j]);
        row.push_back(flow.gap[i]);
        table.add_row(row);
    }
    const auto tsv = path_in(config, "spectrum.tsv");
    io::write_text(tsv, table.to_tsv({"lowest eigenvalues of f(tau) H_I + g(tau) H_P, schedule " + sched.describe(),
                                      "gap = e_d - e_0 with d the ground multiplicity at tau = 1"}));

    // Endpoint cross-check against independent diagonalizations.
    double endpoint_err = 0.0;
    for (double tau : {0.0, 1.0}) {
        const auto H = cplx(sched.f(tau)) * p.H_I + cplx(sched.g(tau)) * p.H_P;
        const auto ref = linalg::lowest_eigenpairs(H, k);
        const auto& got = tau == 0.0 ? flow.levels.front() : flow.levels.back();
        for (int j = 0; j < k; ++j)
            endpoint_err = std::max(endpoint_err, std::abs(got[j] - ref.values[j]) / std::max(1.0, std::abs(ref.values[j])));
    }
    bool passed = endpoint_err <= 1e-8;

    ordered_json doc = p.meta;
    doc["schedule"] = sched.describe();
    doc["samples"] = flow.tau.size();
    doc["ground_multiplicity"] = flow.ground_multiplicity;
    doc["min_gap"] = item(flow.min_gap, "smallest gap between the ground cluster and the next level");
    doc["min_gap_tau"] = item(flow.min_gap_tau, "tau at the smallest gap");
    doc["endpoint_error"] = item(endpoint_err, "relative mismatch of the tau = 0, 1 levels against direct diagonalization");
    if (p.tsp) {
        const double ground = p.tsp->H_P.matrix().diagonal().real().minCoeff();
        const double err = std::abs(ground - p.tsp->optimum.length);
        doc["ground_energy_error"] = item(err, "|min eigenvalue of H_P - shortest tour length|");
        passed = passed && err <= 1e-9;
    }
    return finish(config, "spectrum", doc, {tsv}, passed);
}

CommandOutput cmd_evolve(const RunConfig& config) {
    const auto p = load_problem(config);
    const auto sched = config.schedule.build();
    evolution::EvolveOptions opt;
    opt.dt = config.dt;
    opt.stepper = config.stepper;
    opt.sample_stride = config.sample_stride;
    opt.krylov_tolerance = config.krylov_tolerance;
    const auto res = evolution::evolve(p.H_I, p.H_P, sched, config.T, p.psi0, opt, &p.target);

    io::Table table({"t", "abs_survival", "target_probability", "energy", "norm_drift"});
    for (std::size_t i = 0; i < res.times.size(); ++i)
        table.add_row({res.times[i], std::abs(res.survival[i]), res.target_probability[i], res.energy[i], res.drift[i]});
    const auto tsv = path_in(config, "evolution.tsv");
    io::write_text(tsv, table.to_tsv({"schedule " + sched.describe() + ", T = " + io::format_double(config.T) +
                                          ", dt = " + io::format_double(config.dt) + ", stepper " +
                                          evolution::to_string(config.stepper),
                                      "abs_survival = |<psi(0)|psi(t)>|; energy = <psi(t)|H(t/T)|psi(t)>"}));

    const auto moments = bounds::energy_moments(p.psi0, p.H_P);
    const auto times = bounds::characteristic_times(moments, sched);
    const auto t_orth = evolution::first_orthogonal_time(res, config.orthogonal_tol);
    const bool bound_ok = !t_orth || *t_orth >= times.T_perp - 2.0 * config.dt;
    const bool drift_ok = res.max_drift <= opt.drift_tolerance;
    const bool herm_ok = p.H_I.hermiticity_residual() <= 1e-12 && p.H_P.hermiticity_residual() <= 1e-12;

    ordered_json doc = p.meta;
    doc["schedule"] = sched.describe();
    doc["T"] = config.T;
    doc["dt"] = config.dt;
    doc["steps"] = res.steps;
    doc["matvecs"] = res.matvecs;
    doc["initial_success"] = item(res.target_probability.front(), "target-subspace weight of the initial state");
    doc["success"] = item(res.target_probability.back(), "target-subspace weight at t = T");
    doc["max_norm_drift"] = item(res.max_drift, "max | ||psi(t)|| - 1 |");
    doc["max_initial_energy"] = item(res.max_initial_energy, "max over tau of <psi0|H(tau)|psi0>");
    doc["T_perp"] = item(times.T_perp, "orthogonality time bound, sqrt(2)/(int g * spread)");
    doc["first_orthogonal_time"] =
        item(t_orth ? *t_orth : std::nan(""), "first t with |<psi(0)|psi(t)>| <= " + io::format_double(config.orthogonal_tol));
    doc["tightness_ratio"] =
        item(t_orth && times.T_perp > 0.0 ? *t_orth / times.T_perp : std::nan(""), "first orthogonal time / T_perp");
    doc["checks"] = {{"orthogonality_bound", bound_ok}, {"norm_drift", drift_ok}, {"hermiticity", herm_ok}};
    return finish(config, "evolve", doc, {tsv}, bound_ok && drift_ok && herm_ok);
}

CommandOutput cmd_bounds(const RunConfig& config) {
    const auto p = load_problem(config);
    const auto sched = config.schedule.build();
    const auto moments = bounds::energy_moments(p.psi0, p.H_P);
    const auto times = bounds::characteristic_times(moments, sched);

    bounds::BoundsReport r;
    r.T_forall = times.T_forall;
    r.T_perp = times.T_perp;
    r.g_integral = times.g_integral;
    r.max_initial_energy = bounds::max_initial_energy(p.psi0, p.H_I, p.H_P, sched);
    r.mean_energy = moments.mean;
    r.spread = moments.spread;
    std::optional<std::string> warning;
    if (p.tsp) {
        const int n = p.tsp->instance.n_cities();
        const auto est = bounds::tsp_estimates(n, p.tsp->theta, p.tsp->s);
        r.estimate_spread = est.spread;
        r.estimate_energy = est.energy;
        r.theta_star = bounds::theta_for_unit_resource(n);
        r.scheduled_energy_estimate = r.g_integral * est.energy;
        warning = est.warning;
    } else {
        r.estimate_spread = r.estimate_energy = r.theta_star = r.scheduled_energy_estimate = std::nan("");
    }
    const auto integral = bounds::general_integral_bounds(p.H_I, p.H_P, sched, p.psi0, config.T);
    // With psi0 an eigenvector of H_I the shifted integrand reduces to
    // g(tau) * spread, so its threshold time must coincide with T_perp.
    const double consistency =
        std::isfinite(times.T_perp) ? std::abs(integral.T_min_shifted - times.T_perp) / times.T_perp : 0.0;
    const double residual = (p.H_I.apply(p.psi0) - p.psi0 * p.psi0.dot(p.H_I.apply(p.psi0))).norm();
    const bool passed = residual > 1e-8 || consistency <= 1e-8;

    ordered_json doc = p.meta;
    doc["schedule"] = sched.describe();
    doc["bounds"] = ordered_json::parse(bounds::to_json(r));
    doc["integral_bounds"] = {
        {"T", config.T},
        {"norm_integral", item(integral.norm_integral, "int_0^T ||H psi0|| dt")},
        {"shifted_integral", item(integral.shifted_integral, "int_0^T ||(H - <H>) psi0|| dt")},
        {"norm_met", integral.norm_met},
        {"shifted_met", integral.shifted_met},
        {"T_min_norm", item(integral.T_min_norm, "smallest T with the norm integral >= 2")},
        {"T_min_shifted", item(integral.T_min_shifted, "smallest T with the shifted integral >= sqrt(2)")}};
    doc["T_perp_consistency"] = item(consistency, "relative |T_min_shifted - T_perp|");
    if (warning) doc["warning"] = *warning;
    return finish(config, "bounds", doc, {}, passed);
}

CommandOutput cmd_search_bench(const RunConfig& config) {
    search::ScalingOptions opt;
    opt.target = config.search_target;
    opt.dt_over_T = config.search_dt_over_T;
    opt.T_max = config.search_T_max;
    opt.stepper = config.stepper;
    const auto study = search::scaling_study(config.search_Ms, config.search_family, opt);

    io::Table table({"M", "T_half", "max_energy", "T_perp"});
    for (const auto& pt : study.points)
        table.add_row({static_cast<double>(pt.M), pt.T_half ? *pt.T_half : std::nan(""), pt.max_energy, pt.T_perp});
    const auto tsv = path_in(config, "search_scaling.tsv");
    io::write_text(tsv, table.to_tsv({"family " + search::to_string(study.family) + ", target success " +
                                      io::format_double(study.target),
                                      "T_half = smallest T with |<m|psi(T)>|^2 >= target; nan when not reached"}));

    auto fit_json = [](const search::LogLogFit& f, const std::string& label) {
        ordered_json j;
        j["label"] = label;
        j["exponent"] = io::json_number(f.exponent);
        j["stderr"] = io::json_number(f.stderr_exponent);
        j["ci95"] = {io::json_number(f.ci_low), io::json_number(f.ci_high)};
        j["intercept"] = io::json_number(f.intercept);
        return j;
    };
    ordered_json doc;
    doc["family"] = search::to_string(study.family);
    doc["target"] = study.target;
    ordered_json pts = ordered_json::array();
    for (const auto& pt : study.points) {
        ordered_json j;
        j["M"] = pt.M;
        j["T_half"] = pt.T_half ? io::json_number(*pt.T_half) : ordered_json(nullptr);
        j["max_energy"] = io::json_number(pt.max_energy);
        j["T_perp"] = io::json_number(pt.T_perp);
        if (!pt.note.empty()) j["note"] = pt.note;
        pts.push_back(j);
    }
    doc["points"] = pts;
    doc["time_fit"] = study.time_fit ? fit_json(*study.time_fit, "log-log slope of T_half against M")
                                     : ordered_json(nullptr);
    doc["energy_fit"] = fit_json(study.energy_fit, "log-log slope of the max initial energy against M");
    doc["t_perp_fit"] = fit_json(study.t_perp_fit, "log-log slope of the orthogonality time bound against M");
    return finish(config, "search-bench", doc, {tsv}, true);
}

} // namespace aqtsp::cli
