// Acceptance runner: `acceptance <n>` checks one criterion, `acceptance`
// checks all of them. Each criterion prints detail lines followed by one
// "CRITERION n ... PASS|FAIL" line; the exit status is nonzero on FAIL.

#include "aqtsp/bounds/bounds.hpp"
#include "aqtsp/cli/commands.hpp"
#include "aqtsp/evolution/propagate.hpp"
#include "aqtsp/fock/coherent.hpp"
#include "aqtsp/oracle/tour.hpp"
#include "aqtsp/search/search.hpp"
#include "aqtsp/tsp/blocks.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace aqtsp;
using evolution::Schedule;

namespace {

using Clock = std::chrono::steady_clock;

void detail(const char* fmt, auto... args) {
    std::printf("  ");
    std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    return search::loglog_fit(x, y).exponent;
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * (i + j) + 1.0;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i] / n;
        mb += rb[i] / n;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return (saa == 0 || sbb == 0) ? 0.0 : sab / std::sqrt(saa * sbb);
}

std::string data_path(const std::string& name) { return std::string(AQTSP_DATA_DIR) + "/" + name; }

cli::RunConfig directed3_config() {
    cli::RunConfig c;
    c.instance = data_path("directed3.json");
    return c;
}

// ---------------------------------------------------------------------------

bool filter_soundness() {
    const auto t0 = Clock::now();
    bool ok = true;
    for (int n : {3, 4}) {
        for (bool sym : {false, true}) {
            cli::RunConfig c;
            c.symmetric_links = sym;
            const auto v = cli::verify_filter(n, c, 1e-12);
            std::size_t configs = 0, failures = 0;
            for (const auto& k : v.classes) {
                configs += k.configurations;
                failures += k.failures;
            }
            detail("N=%d %s dim=%zu tours=%zu tour_residual=%.2e class_configs=%zu class_failures=%zu "
                   "columns=%zu matrix_vs_combinatorial=%.2e",
                   n, sym ? "symmetric" : "directed", v.dimension, v.tours, v.max_tour_residual, configs, failures,
                   v.compared_columns, v.max_matrix_difference);
            ok = ok && v.passed && v.max_tour_residual <= 1e-12 && failures == 0 && v.max_matrix_difference <= 1e-12;
        }
    }
    const double secs = seconds_since(t0);
    detail("runtime %.1f s (limit 300 s)", secs);
    return ok && secs <= 300.0;
}

// Compares one ground-space report against the oracle. Returns the
// degeneracy, or -1 on mismatch.
int check_ground(const tsp::GroundSpaceReport& g, const oracle::OracleResult& best, const fock::ModeRegistry& reg,
                 std::string& why) {
    if (std::abs(g.min_eigenvalue - best.length) > 1e-9) {
        why = "min eigenvalue " + std::to_string(g.min_eigenvalue) + " vs tour " + std::to_string(best.length);
        return -1;
    }
    std::multiset<std::vector<int>> got, want;
    for (const auto& s : g.ground) {
        if (s.hm_weight > 1e-9) {
            why = "ground state outside the hooker/marker vacuum";
            return -1;
        }
        got.insert(s.links);
    }
    for (const auto& t : best.tours) want.insert(oracle::tour_links(t.sequence, reg));
    if (got != want) {
        why = "ground space differs from the optimal tour states";
        return -1;
    }
    return static_cast<int>(g.degeneracy());
}

bool ground_state_correctness() {
    const auto t0 = Clock::now();
    bool ok = true;
    int instances = 0, min_deg = 1 << 30;
    double worst = 0.0;
    struct Case {
        int n, count;
        fock::OccupationCutoff cut;
    };
    fock::OccupationCutoff c3;
    c3.per_mode_max = 2;
    c3.hooker_total_max = 1;
    c3.marker_total_max = 2;
    fock::OccupationCutoff c4;
    c4.per_mode_max = 4;
    c4.link_total_max = 5;
    c4.hooker_total_max = 1;
    c4.marker_total_max = 3;
    for (const Case& cs : {Case{3, 20, c3}, Case{4, 10, c4}}) {
        const fock::FockBasis basis(fock::ModeRegistry(cs.n, false), cs.cut);
        const tsp::FockBasis& b = basis;
        std::optional<tsp::SparseOperator> Q;
        if (cs.n == 3) Q = tsp::build_Q(b);
        for (int k = 0; k < cs.count; ++k) {
            const auto inst = tsp::random_euclidean(cs.n, 1000 + 17 * k + cs.n);
            const auto best = oracle::brute_force_shortest(inst);
            const double s = tsp::scale_s(inst);
            std::vector<std::multiset<std::vector<int>>> spaces;
            for (auto variant : {tsp::PenaltyVariant::hermitian_square, tsp::PenaltyVariant::squared_plus_hc}) {
                const auto g = cs.n == 3
                                   ? tsp::ground_space_from_operator(
                                         tsp::build_target_hamiltonian(inst, b, variant, s, *Q), b)
                                   : tsp::ground_space_blockwise(inst, b, variant, s);
                std::string why;
                const int deg = check_ground(g, best, basis.registry(), why);
                worst = std::max(worst, std::abs(g.min_eigenvalue - best.length));
                if (deg < 0) {
                    detail("N=%d instance %d %s: %s", cs.n, k, tsp::to_string(variant).c_str(), why.c_str());
                    ok = false;
                    continue;
                }
                min_deg = std::min(min_deg, deg);
                std::multiset<std::vector<int>> links;
                for (const auto& st : g.ground) links.insert(st.links);
                spaces.push_back(links);
            }
            if (spaces.size() == 2 && spaces[0] != spaces[1]) {
                detail("N=%d instance %d: penalty variants disagree on the ground space", cs.n, k);
                ok = false;
            }
            ++instances;
        }
        detail("N=%d: %d instances, dim=%zu, elapsed %.1f s", cs.n, cs.count, basis.dimension(), seconds_since(t0));
    }
    detail("max |E0 - optimal length| = %.2e, min directed degeneracy = %d", worst, min_deg);

    // Diagnostic only: without hooker/marker totals the second penalty form
    // is not bounded below.
    {
        fock::OccupationCutoff open;
        open.per_mode_max = 2;
        const fock::FockBasis b(fock::ModeRegistry(3, false), open);
        const auto inst = tsp::random_euclidean(3, 1003);
        const auto Q = tsp::build_Q(b);
        for (auto variant : {tsp::PenaltyVariant::hermitian_square, tsp::PenaltyVariant::squared_plus_hc}) {
            const auto g = tsp::ground_space_from_operator(
                tsp::build_target_hamiltonian(inst, b, variant, tsp::scale_s(inst), Q), b);
            detail("diagnostic, N=3 without h/m totals (dim=%zu), %s: E0 = %.6g, optimal length %.6g",
                   b.dimension(), tsp::to_string(variant).c_str(), g.min_eigenvalue,
                   oracle::brute_force_shortest(inst).length);
        }
    }
    const double secs = seconds_since(t0);
    detail("runtime %.1f s (limit 600 s)", secs);
    return ok && instances >= 30 && min_deg >= 2 && secs <= 600.0;
}

bool adiabatic_recovery() {
    const auto t0 = Clock::now();
    const auto setup = cli::prepare_tsp(directed3_config());
    detail("instance directed3: optimum %.3f over %zu tour(s), theta=%.4f, dim=%zu, initial success %.4f",
           setup.optimum.length, setup.optimum.tours.size(), setup.theta, setup.basis.dimension(),
           evolution::success_probability(setup.psi0, setup.target));
    std::vector<double> Ts, succ;
    double best = 0.0;
    for (double T = 4.0; T <= 2048.0; T *= 2.0) {
        evolution::EvolveOptions opt;
        opt.dt = std::max(0.25, T / 2048.0);
        opt.sample_stride = 1 << 20;
        const auto r = evolution::evolve(setup.H_I, setup.H_P, Schedule::linear(), T, setup.psi0, opt, &setup.target);
        const double p = r.target_probability.back();
        Ts.push_back(T);
        succ.push_back(p);
        best = std::max(best, p);
        detail("T=%6.0f dt=%.3f success=%.4f drift=%.1e", T, opt.dt, p, r.max_drift);
    }
    const double rho = spearman(Ts, succ);
    const double secs = seconds_since(t0);
    detail("best success %.4f, Spearman %.3f, runtime %.1f s (limit 900 s)", best, rho, secs);
    return setup.optimum.tours.size() == 1 && best >= 0.9 && rho >= 0.8 && secs <= 900.0;
}

bool bound_necessity() {
    const auto t0 = Clock::now();
    int runs = 0, events = 0, violations = 0;
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
    auto record = [&](const char* label, double T, double dt, double t_perp, std::optional<double> t_orth) {
        ++runs;
        if (!t_orth) return;
        ++events;
        const double ratio = *t_orth / t_perp;
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
        if (*t_orth < t_perp - 2.0 * dt) {
            ++violations;
            detail("violation: %s T=%g t_orth=%.4f T_perp=%.4f", label, T, *t_orth, t_perp);
        }
    };

    const auto setup = cli::prepare_tsp(directed3_config());
    const int n = setup.instance.n_cities();
    const std::vector<std::pair<std::string, Schedule>> tsp_schedules{
        {"linear", Schedule::linear()},
        {"scaled", Schedule::scaled(std::sqrt(static_cast<double>(n)))},
        {"quadratic_boost", Schedule::quadratic_boost(std::sqrt(static_cast<double>(n)))},
        {"exponential_boost", Schedule::exponential_boost(std::exp(static_cast<double>(n)))},
    };
    for (const auto& [name, sched] : tsp_schedules) {
        const double t_perp =
            bounds::characteristic_times(bounds::energy_moments(setup.psi0, setup.H_P), sched).T_perp;
        for (double T : {0.5, 2.0, 8.0}) {
            evolution::EvolveOptions opt;
            opt.dt = std::min(0.005, T / 200.0);
            const auto r = evolution::evolve(setup.H_I, setup.H_P, sched, T, setup.psi0, opt);
            record(("tsp " + name).c_str(), T, opt.dt, t_perp, evolution::first_orthogonal_time(r));
        }
    }
    const int tsp_events = events;

    for (auto family : {search::SearchFamily::linear, search::SearchFamily::scaled_sqrt_m,
                        search::SearchFamily::quadratic_boost_sqrt_m, search::SearchFamily::exponential_boost_e_m}) {
        const std::vector<int> Ms = family == search::SearchFamily::exponential_boost_e_m ? std::vector<int>{2, 4, 8}
                                                                                          : std::vector<int>{2, 4, 8, 16};
        for (int M : Ms) {
            const auto inst = search::SearchInstance::uniform(M);
            const auto sched = search::family_schedule(family, M);
            for (double T : {2.0, 8.0, 32.0, 128.0}) {
                const double dt = std::min(0.02, T / 400.0) / (family == search::SearchFamily::exponential_boost_e_m
                                                                   ? std::max(1.0, std::exp(M) / 50.0)
                                                                   : 1.0);
                const auto r = search::run_search(inst, sched, T, dt);
                record(("search " + search::to_string(family)).c_str(), T, dt, r.T_perp, r.first_orthogonal);
            }
        }
    }
    const double secs = seconds_since(t0);
    detail("%d runs, %d orthogonality events (%d tsp), %d violations", runs, events, tsp_events, violations);
    detail("tightness ratio t_orth / T_perp: min %.3f, max %.3f", min_ratio, max_ratio);
    detail("runtime %.1f s", secs);
    return violations == 0 && events > 0;
}

bool search_scaling() {
    const auto t0 = Clock::now();
    const std::vector<int> Ms{4, 8, 16, 32, 64};
    search::ScalingOptions opt;
    auto show = [](const search::ScalingStudy& st) {
        for (const auto& p : st.points)
            detail("  M=%3d T_half=%9.3f max_energy=%7.3f T_perp=%8.3f %s", p.M, p.T_half.value_or(NAN),
                   p.max_energy, p.T_perp, p.note.c_str());
    };
    const auto lin = search::scaling_study(Ms, search::SearchFamily::linear, opt);
    show(lin);
    const auto sc = search::scaling_study(Ms, search::SearchFamily::scaled_sqrt_m, opt);
    show(sc);
    const double lin_exp = lin.time_fit ? lin.time_fit->exponent : NAN;
    const double sc_exp = sc.time_fit ? sc.time_fit->exponent : NAN;
    detail("linear: T_half exponent %.3f +- %.3f (want 0.5 +- 0.15), T_perp exponent %.3f", lin_exp,
           lin.time_fit ? lin.time_fit->stderr_exponent : NAN, lin.t_perp_fit.exponent);
    detail("scaled(sqrt M): T_half exponent %.3f +- %.3f (want 0.0 +- 0.15), T_perp exponent %.3f", sc_exp,
           sc.time_fit ? sc.time_fit->stderr_exponent : NAN, sc.t_perp_fit.exponent);
    detail("scaled(sqrt M): max-energy exponent %.3f (want 0.5 +- 0.15)", sc.energy_fit.exponent);
    const bool a = std::abs(lin_exp - 0.5) <= 0.15;
    const bool b = std::abs(sc_exp) <= 0.15;
    const bool c = std::abs(sc.energy_fit.exponent - 0.5) <= 0.15;
    const double secs = seconds_since(t0);
    detail("linear %s, scaled time %s, scaled energy %s, runtime %.1f s (limit 1200 s)", a ? "ok" : "off",
           b ? "ok" : "off", c ? "ok" : "off", secs);
    return a && b && c && secs <= 1200.0;
}

bool closed_form_anchors() {
    double delta_err = 0.0;
    for (int M : {2, 3, 4, 8, 16, 64, 256}) {
        const auto inst = search::SearchInstance::uniform(M);
        const auto h = search::build_search_hamiltonians(inst);
        const double c2 = 1.0 / M;
        const double closed = std::sqrt(c2 - c2 * c2);
        delta_err = std::max(delta_err, std::abs(bounds::energy_moments(inst.amplitudes, h.Hf).spread - closed));
    }
    detail("spread for uniform amplitudes: max |matrix - closed form| = %.2e (limit 1e-12)", delta_err);

    double integral_err = 0.0;
    for (int M : {4, 16, 64}) {
        const auto sched = search::family_schedule(search::SearchFamily::quadratic_boost_sqrt_m, M);
        const double want = 1.0 / 6.0 + std::sqrt(static_cast<double>(M)) / 2.0;
        const double got = sched.g_integral_quadrature();
        integral_err = std::max(integral_err, std::abs(got - want));
        detail("quadratic_boost M=%d: quadrature %.12f, closed form of the schedule %.12f, quoted 1/6+sqrt(M)/2 = %.12f",
               M, got, sched.g_integral(), want);
    }

    double theta_err = 0.0;
    double fact = 1.0;
    for (int n = 2; n <= 12; ++n) {
        fact *= n - 1;
        theta_err = std::max(theta_err, std::abs(fact * std::pow(bounds::theta_for_unit_resource(n), 2 * n) - 1.0));
    }
    detail("unit resource: max |(N-1)! theta^2N - 1| for N <= 12 = %.2e", theta_err);
    const bool a = delta_err <= 1e-12, b = integral_err <= 1e-12, c = theta_err <= 1e-12;
    detail("spread %s, quadratic_boost integral %s, theta %s", a ? "ok" : "off", b ? "ok" : "off", c ? "ok" : "off");
    return a && b && c;
}

bool spread_exponent() {
    const auto inst = tsp::load_instance(data_path("directed3.json"));
    const int n = inst.n_cities();
    const double s = tsp::scale_s(inst);
    fock::OccupationCutoff cut;
    cut.per_mode_max = 3;
    cut.hooker_total_max = 0;
    cut.marker_total_max = 0;
    const fock::FockBasis basis(fock::ModeRegistry(n, false), cut);
    const auto H_P = tsp::sector_target_hamiltonian(inst, basis, tsp::PenaltyVariant::hermitian_square, s);
    const auto D = tsp::distance_operator(inst, basis);
    const auto penalty = H_P - D;

    std::vector<double> thetas, full, pen, est;
    for (int k = 0; k <= 8; ++k) {
        const double theta = 0.02 * std::pow(5.0, k / 8.0);
        const Vector psi = fock::coherent_state(basis, cplx(theta)).state.amplitudes();
        thetas.push_back(theta);
        full.push_back(bounds::energy_moments(psi, H_P).spread);
        pen.push_back(bounds::energy_moments(psi, penalty).spread);
        est.push_back(bounds::tsp_estimates(n, theta, s).energy);
    }
    const double a = slope(thetas, full), b = slope(thetas, pen), c = slope(thetas, est);
    detail("N=%d, theta in [0.02, 0.1], dim=%zu", n, basis.dimension());
    detail("spread of H_P: slope %.3f (want %d within 5%%)", a, n);
    detail("spread of the penalty term alone: slope %.3f", b);
    detail("energy estimate: slope %.3f (want %d within 5%%)", c, 2 * n);
    const bool ok_a = std::abs(a - n) <= 0.05 * n;
    const bool ok_c = std::abs(c - 2 * n) <= 0.05 * 2 * n;
    detail("spread %s, estimate %s", ok_a ? "ok" : "off", ok_c ? "ok" : "off");
    return ok_a && ok_c;
}

bool numerical_hygiene() {
    double max_drift = 0.0, max_dt_change = 0.0, max_herm = 0.0;
    const auto setup = cli::prepare_tsp(directed3_config());
    const auto search_inst = search::SearchInstance::uniform(16);
    const auto sh = search::build_search_hamiltonians(search_inst);
    for (const auto* op : {&setup.H_I, &setup.H_P, &sh.H0, &sh.Hf})
        max_herm = std::max(max_herm, op->hermiticity_residual());

    auto pair_run = [&](const fock::SparseOperator& A, const fock::SparseOperator& B, const Vector& psi0,
                        const Schedule& sched, double T, double dt, const char* label) {
        evolution::EvolveOptions o1, o2;
        o1.dt = dt;
        o2.dt = dt / 2.0;
        const auto r1 = evolution::evolve(A, B, sched, T, psi0, o1);
        const auto r2 = evolution::evolve(A, B, sched, T, psi0, o2);
        const double change = (r1.final_state - r2.final_state).cwiseAbs().maxCoeff();
        max_drift = std::max({max_drift, r1.max_drift, r2.max_drift});
        max_dt_change = std::max(max_dt_change, change);
        detail("%s T=%g dt=%g: dt-halving change %.2e, drift %.1e", label, T, dt, change,
               std::max(r1.max_drift, r2.max_drift));
    };
    pair_run(setup.H_I, setup.H_P, setup.psi0, Schedule::linear(), 8.0, 0.01, "tsp linear");
    pair_run(setup.H_I, setup.H_P, setup.psi0, Schedule::quadratic_boost(std::sqrt(3.0)), 8.0, 0.01,
             "tsp quadratic_boost");
    pair_run(sh.H0, sh.Hf, search_inst.amplitudes, Schedule::linear(), 64.0, 0.1, "search linear");
    pair_run(sh.H0, sh.Hf, search_inst.amplitudes, Schedule::scaled(4.0), 64.0, 0.05, "search scaled");
    detail("max drift %.1e (limit 1e-8), max dt-halving change %.1e (limit 1e-6), max hermiticity residual %.1e "
           "(limit 1e-12)",
           max_drift, max_dt_change, max_herm);
    return max_drift <= 1e-8 && max_dt_change <= 1e-6 && max_herm <= 1e-12;
}

struct Criterion {
    const char* name;
    std::function<bool()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"filter soundness", filter_soundness},
        {"ground-state correctness", ground_state_correctness},
        {"adiabatic solution recovery", adiabatic_recovery},
        {"orthogonality bound necessity", bound_necessity},
        {"search scaling", search_scaling},
        {"closed-form anchors", closed_form_anchors},
        {"spread-scaling exponent", spread_exponent},
        {"numerical hygiene", numerical_hygiene},
    };
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(all.size())) {
            std::fprintf(stderr, "usage: acceptance [1-%zu]\n", all.size());
            return 2;
        }
        which.push_back(n);
    } else {
        for (std::size_t i = 1; i <= all.size(); ++i) which.push_back(static_cast<int>(i));
    }
    bool all_ok = true;
    for (int n : which) {
        bool ok = false;
        try {
            ok = all[n - 1].run();
        } catch (const std::exception& e) {
            detail("error: %s", e.what());
        }
        std::printf("CRITERION %d %s: %s\n", n, all[n - 1].name, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
