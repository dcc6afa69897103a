#include "aqtsp/bounds/bounds.hpp"
#include "aqtsp/fock/coherent.hpp"
#include "aqtsp/search/search.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace aqtsp;
using namespace aqtsp::bounds;
using evolution::Schedule;

TEST_CASE("energy moments") {
    const auto inst = search::SearchInstance::uniform(4);
    const auto h = search::build_search_hamiltonians(inst);
    const auto m = energy_moments(inst.amplitudes, h.Hf);
    CHECK(m.mean == doctest::Approx(0.75));
    CHECK(m.spread == doctest::Approx(std::sqrt(3.0) / 4.0));
    CHECK(m.spread == doctest::Approx(0.4330).epsilon(1e-4));

    const auto eig = energy_moments(inst.amplitudes, h.H0);
    CHECK(eig.spread <= 1e-8);
    CHECK_THROWS_AS(energy_moments(Vector::Ones(4), h.Hf), ValidationError);
}

TEST_CASE("TSP spread two ways") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1.3, 0.7, 1.1, 0, 1.0, 0.9, 1.2, 0;
    const tsp::TspInstance inst(d);
    fock::OccupationCutoff full;
    full.per_mode_max = 2;
    full.hooker_total_max = 1;
    full.marker_total_max = 2;
    const fock::FockBasis basis(fock::ModeRegistry(3, false), full);
    const auto set = tsp::build_hamiltonian_set(inst, basis, cplx(0.2));
    const auto sector = tsp::vacuum_sector(set);

    fock::OccupationCutoff links = full;
    links.hooker_total_max = 0;
    links.marker_total_max = 0;
    const fock::FockBasis link_basis(fock::ModeRegistry(3, false), links);
    const auto diag = tsp::sector_target_hamiltonian(inst, link_basis, tsp::PenaltyVariant::hermitian_square, set.s);
    const Vector psi = fock::coherent_state(link_basis, cplx(0.2)).state.amplitudes();
    CHECK(energy_moments(psi, sector.H_P).spread ==
          doctest::Approx(energy_moments(psi, diag).spread).epsilon(1e-8));
}

TEST_CASE("characteristic times") {
    CHECK(Schedule::linear().g_integral() == 0.5);
    for (double M : {4.0, 16.0, 64.0}) {
        const auto qb = Schedule::quadratic_boost(std::sqrt(M));
        CHECK(qb.g_integral() == doctest::Approx(0.5 + std::sqrt(M) / 6.0).epsilon(1e-15));
        CHECK(qb.g_integral_quadrature() == doctest::Approx(qb.g_integral()).epsilon(1e-13));
    }
    const auto m = search::search_moments(search::SearchInstance::uniform(4));
    const auto t = characteristic_times(m, Schedule::linear());
    CHECK(t.T_perp == doctest::Approx(std::sqrt(2.0) / (0.5 * std::sqrt(3.0) / 4.0)));
    CHECK(t.T_perp == doctest::Approx(6.532).epsilon(1e-4));
    CHECK(t.T_forall == doctest::Approx(2.0 / (0.5 * std::hypot(m.spread, m.mean))));
    CHECK(t.T_forall < t.T_perp);

    const auto none = characteristic_times({0.0, 0.0}, Schedule::linear());
    CHECK(none.orthogonal_unreachable);
    CHECK(std::isinf(none.T_perp));
}

TEST_CASE("TSP estimates") {
    const auto e = tsp_estimates(3, 0.1, 3.0);
    CHECK(e.spread == doctest::Approx(3.0 * std::sqrt(2.0) * 1e-3));
    CHECK(e.energy / e.spread == doctest::Approx(std::sqrt(2.0) * 1e-3));
    CHECK_FALSE(e.warning.has_value());
    CHECK(tsp_estimates(4, 0.7, 1.0).warning.has_value());
}

TEST_CASE("unit-resource displacement") {
    CHECK(theta_for_unit_resource(2) == 1.0);
    CHECK(theta_for_unit_resource(3) == doctest::Approx(std::pow(2.0, -1.0 / 6.0)));
    CHECK(theta_for_unit_resource(4) == doctest::Approx(0.7995).epsilon(1e-4));
    double fact = 1.0;
    for (int n = 2; n <= 12; ++n) {
        fact *= n - 1;
        CHECK(std::abs(fact * std::pow(theta_for_unit_resource(n), 2 * n) - 1.0) <= 1e-12);
    }
}

TEST_CASE("integral bounds") {
    const auto inst = search::SearchInstance::uniform(8);
    const auto h = search::build_search_hamiltonians(inst);
    for (const auto& sched : {Schedule::linear(), Schedule::quadratic_boost(2.0), Schedule::scaled(3.0)}) {
        const auto t = characteristic_times(search::search_moments(inst), sched);
        const auto b = general_integral_bounds(h.H0, h.Hf, sched, inst.amplitudes, 10.0);
        CHECK(std::abs(b.T_min_shifted - t.T_perp) <= 1e-6 * t.T_perp);
        CHECK(b.shifted_integral == doctest::Approx(10.0 * std::sqrt(2.0) / b.T_min_shifted));

        // Doubling the spread halves the minimal time.
        const auto b2 = general_integral_bounds(h.H0, cplx(2.0) * h.Hf, sched, inst.amplitudes, 10.0);
        CHECK(b2.T_min_shifted == doctest::Approx(b.T_min_shifted / 2.0));

        // The mean is the best constant shift.
        const auto off = general_integral_bounds(h.H0, h.Hf, sched, inst.amplitudes, 10.0, [&](double tau) {
            return sched.g(tau) * 0.875 + 0.1;
        });
        CHECK(off.shifted_integral > b.shifted_integral);
    }
}

TEST_CASE("max initial energy") {
    for (int M : {4, 9, 16}) {
        const auto inst = search::SearchInstance::uniform(M);
        const auto h = search::build_search_hamiltonians(inst);
        CHECK(max_initial_energy(inst.amplitudes, h.H0, h.Hf, Schedule::linear()) ==
              doctest::Approx(1.0 - 1.0 / M));
    }
    std::vector<double> xs, ys, es;
    for (int M : {4, 16, 64}) {
        const auto inst = search::SearchInstance::uniform(M);
        const auto h = search::build_search_hamiltonians(inst);
        xs.push_back(M);
        ys.push_back(max_initial_energy(inst.amplitudes, h.H0, h.Hf, search::family_schedule(search::SearchFamily::scaled_sqrt_m, M)));
    }
    const auto fit = search::loglog_fit(xs, ys);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.2));
    CHECK(std::abs(fit.exponent - 0.5) <= 0.1);

    // Exponential boost: log energy is linear in M with unit slope.
    std::vector<double> ms, logs;
    for (int M : {4, 6, 8, 10}) {
        const auto inst = search::SearchInstance::uniform(M);
        const auto h = search::build_search_hamiltonians(inst);
        ms.push_back(M);
        logs.push_back(std::log(max_initial_energy(inst.amplitudes, h.H0, h.Hf,
                                                   search::family_schedule(search::SearchFamily::exponential_boost_e_m, M))));
    }
    const double slope = (logs.back() - logs.front()) / (ms.back() - ms.front());
    CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("report document") {
    BoundsReport r;
    r.T_perp = 6.5;
    r.T_forall = std::numeric_limits<double>::infinity();
    const auto doc = nlohmann::json::parse(to_json(r));
    CHECK(doc["T_perp"]["value"] == 6.5);
    CHECK(doc["T_forall"]["value"] == "inf");
    CHECK(doc["T_perp"]["label"].get<std::string>().find("orthogonality") != std::string::npos);
}
