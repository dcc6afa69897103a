#include "aqtsp/fock/coherent.hpp"
#include "aqtsp/fock/ladder.hpp"
#include "aqtsp/linalg/eigensolver.hpp"
#include "aqtsp/oracle/tour.hpp"
#include "aqtsp/tsp/blocks.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"
#include "aqtsp/tsp/instance.hpp"
#include "aqtsp/tsp/q_combinatorial.hpp"

#include <doctest.h>

#include <cmath>

using namespace aqtsp;
using namespace aqtsp::tsp;
using fock::BasisState;
using fock::ModeRegistry;
using fock::OccupationCutoff;

namespace {

OccupationCutoff caps(int per_mode, std::optional<int> links, std::optional<int> hooks, std::optional<int> marks) {
    OccupationCutoff c;
    c.per_mode_max = per_mode;
    c.link_total_max = links;
    c.hooker_total_max = hooks;
    c.marker_total_max = marks;
    return c;
}

TspInstance triangle(double a, double b, double c) {
    Eigen::MatrixXd d(3, 3);
    d << 0, a, c, a, 0, b, c, b, 0;
    return TspInstance(d, true);
}

TspInstance unit_square() {
    const double r = std::sqrt(2.0);
    Eigen::MatrixXd d(4, 4);
    d << 0, 1, r, 1, 1, 0, 1, r, r, 1, 0, 1, 1, r, 1, 0;
    return TspInstance(d, true);
}

// Basis state with the listed (to, from) links occupied.
BasisState links_state(const ModeRegistry& reg, std::initializer_list<std::tuple<int, int, int>> occ) {
    BasisState s(reg.mode_count(), 0);
    for (const auto& [to, from, n] : occ) s[*reg.link(to, from)] = n;
    return s;
}

Vector ket(const FockBasis& b, const BasisState& s) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(b.dimension()));
    v[static_cast<Eigen::Index>(*b.index_of(s))] = 1.0;
    return v;
}

double vacuum_part(const FockBasis& b, const Vector& v) {
    double w = 0.0;
    for (auto i : b.hm_vacuum_indices()) w += std::norm(v[i]);
    return std::sqrt(w);
}

} // namespace

TEST_CASE("instance validation") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 1.5, 1, 0;
    CHECK_NOTHROW(TspInstance(d, false));
    try {
        TspInstance bad(d, true);
        FAIL("asymmetric matrix accepted");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(1, 3)") != std::string::npos);
    }
    Eigen::MatrixXd neg = d;
    neg(1, 0) = -1;
    CHECK_THROWS_AS(TspInstance{neg}, ValidationError);
    Eigen::MatrixXd diag = d;
    diag(2, 2) = 0.5;
    CHECK_THROWS_AS(TspInstance{diag}, ValidationError);
    CHECK_THROWS_AS(parse_instance(R"({"n_cities": 3, "distances": [[0, 1], [1, 0]]})"), ValidationError);
    CHECK_THROWS_AS(parse_instance(R"({"n_cities": 3, "distances": [[0,1,1],[1,0,1],[1,1,"x"]]})"), ValidationError);
    CHECK_THROWS_AS(parse_instance("not json"), ValidationError);

    const auto t = parse_instance(instance_to_json(unit_square()), true);
    CHECK(t.d(3, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(random_euclidean(5, 7).symmetric());
    CHECK((random_euclidean(5, 7).distances() - random_euclidean(5, 7).distances()).norm() == 0.0);
    CHECK_FALSE(random_asymmetric(4, 3).symmetric());
}

TEST_CASE("penalty scale") {
    CHECK(scale_s(triangle(1, 1, 1), 0.0) == doctest::Approx(3.0));
    CHECK(scale_s(unit_square(), 0.0) == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)));
    CHECK(scale_s(triangle(1, 1, 1), 0.1) == doctest::Approx(3.3));
    CHECK_THROWS_AS(scale_s(triangle(1, 1, 1), -0.1), ValidationError);
}

TEST_CASE("initial Hamiltonian") {
    SUBCASE("theta = 0 is the total number operator") {
        const FockBasis b(ModeRegistry(3, true), caps(2, std::nullopt, 1, 2));
        const auto H = build_initial_hamiltonian(b, cplx(0.0));
        auto total = fock::total_number(b, fock::ModeKind::link) + fock::total_number(b, fock::ModeKind::hooker) +
                     fock::total_number(b, fock::ModeKind::marker);
        CHECK(fock::max_abs_difference(H, total) <= 1e-14);
        const auto g = linalg::lowest_eigenpairs(H, 1);
        CHECK(g.values[0] == doctest::Approx(0.0));
        CHECK(std::abs(g.vectors(0, 0)) == doctest::Approx(1.0));
    }
    SUBCASE("coherent energy shrinks as the caps grow") {
        double previous = 1.0;
        for (int cap = 1; cap <= 4; ++cap) {
            const FockBasis b(ModeRegistry(3, true), caps(cap, std::nullopt, 0, 0));
            const auto H = build_initial_hamiltonian(b, cplx(0.3));
            const Vector psi = fock::coherent_state(b, cplx(0.3)).state.amplitudes();
            const double e = psi.dot(H.apply(psi)).real();
            CHECK(e >= -1e-14);
            CHECK(e < previous);
            previous = e;
        }
        CHECK(previous < 1e-4);
    }
    SUBCASE("ground energy against the coherent Rayleigh quotient") {
        for (int cap : {2, 4}) {
            const FockBasis b(ModeRegistry(3, false), caps(cap, std::nullopt, 0, 0));
            const auto H = build_initial_hamiltonian(b, cplx(0.2));
            CHECK(H.hermitian());
            const Vector psi = fock::coherent_state(b, cplx(0.2)).state.amplitudes();
            const double rq = psi.dot(H.apply(psi)).real();
            const double e0 = linalg::lowest_eigenpairs(H, 1).values[0];
            CHECK(e0 <= rq + 1e-14);
            if (cap == 4) CHECK(std::abs(rq - e0) <= 1e-8);
        }
    }
}

TEST_CASE("filter factors") {
    const FockBasis b(ModeRegistry(3, false), caps(2, 3, 1, 2));
    const auto& reg = b.registry();
    const auto ops = build_filter_operators(b);
    const BasisState vac(reg.mode_count(), 0);
    CHECK(ops.F.apply(ket(b, vac)).norm() == 0.0);

    const auto one = links_state(reg, {{2, 1, 1}});
    auto expected = one;
    expected[reg.hooker(2)] = 1;
    expected[reg.marker(2)] = 1;
    const Vector out = ops.F.apply(ket(b, one));
    CHECK((out - ket(b, expected)).norm() < 1e-14);

    CHECK(ops.E.apply(ket(b, links_state(reg, {{1, 2, 1}, {2, 1, 1}}))).norm() == 0.0);
    CHECK_THROWS_AS(build_Q(fock::FockBasis(ModeRegistry(3, false), caps(2, 3, 0, 2))), ValidationError);
    CHECK_THROWS_AS(build_Q(fock::FockBasis(ModeRegistry(3, false), caps(2, 3, 1, 1))), ValidationError);
}

TEST_CASE("Q on N = 4 configurations") {
    const FockBasis b(ModeRegistry(4, false), caps(2, 5, 1, 3));
    const auto& reg = b.registry();
    const auto Q = build_Q(b);

    const auto tour = links_state(reg, {{2, 1, 1}, {3, 2, 1}, {4, 3, 1}, {1, 4, 1}});
    CHECK((Q.apply(ket(b, tour)) - ket(b, tour)).norm() <= 1e-12);

    const auto doubled = links_state(reg, {{2, 1, 2}, {3, 2, 1}, {4, 3, 1}, {1, 4, 1}});
    CHECK((Q.apply(ket(b, doubled)) - 2.0 * ket(b, doubled)).norm() <= 1e-12);

    const auto no_start = links_state(reg, {{3, 2, 1}, {4, 3, 1}, {2, 4, 1}, {1, 2, 1}});
    CHECK(vacuum_part(b, Q.apply(ket(b, no_start))) == 0.0);

    const auto two_cycles = links_state(reg, {{2, 1, 1}, {1, 2, 1}, {4, 3, 1}, {3, 4, 1}});
    CHECK(Q.apply(ket(b, two_cycles)).norm() == 0.0);
}

TEST_CASE("combinatorial Q") {
    SUBCASE("N = 3 tour") {
        const ModeRegistry reg(3, false);
        const auto s = links_state(reg, {{2, 1, 1}, {3, 2, 1}, {1, 3, 1}});
        const auto out = q_combinatorial_apply_state(reg, s);
        REQUIRE(out.size() == 1);
        CHECK(out[0].first == s);
        CHECK(out[0].second == doctest::Approx(1.0));
        CHECK(q_vacuum_value(reg, oracle::tour_links({1, 2, 3}, reg)) == 1.0);
    }
    SUBCASE("disjoint 2-cycles vanish everywhere") {
        const ModeRegistry reg(4, false);
        const auto s = links_state(reg, {{2, 1, 1}, {1, 2, 1}, {4, 3, 1}, {3, 4, 1}});
        CHECK(q_combinatorial_apply_state(reg, s).empty());
    }
    SUBCASE("revisit with a missed city leaves the vacuum") {
        const ModeRegistry reg(4, false);
        // 1 -> 2 -> 3 -> 2 -> 1, city 4 unvisited
        const auto s = links_state(reg, {{2, 1, 1}, {3, 2, 1}, {2, 3, 1}, {1, 2, 1}});
        for (const auto& [state, value] : q_combinatorial_apply_state(reg, s)) {
            bool vacuum = true;
            for (std::size_t m = reg.link_count(); m < state.size(); ++m) vacuum = vacuum && state[m] == 0;
            CHECK_FALSE(vacuum);
            (void)value;
        }
    }
    SUBCASE("h/m input must be empty") {
        const ModeRegistry reg(3, false);
        BasisState s(reg.mode_count(), 0);
        s[reg.hooker(2)] = 1;
        CHECK_THROWS_AS(q_combinatorial_apply_state(reg, s), ValidationError);
    }
    SUBCASE("symmetric registries halve the double orientation") {
        const ModeRegistry reg(4, true);
        CHECK(q_vacuum_value(reg, oracle::tour_links({1, 2, 3, 4}, reg)) == doctest::Approx(1.0));
    }
}

TEST_CASE("target Hamiltonian on the triangle") {
    const auto inst = triangle(1, 1, 1.5);
    const FockBasis b(ModeRegistry(3, false), caps(2, std::nullopt, 1, 2));
    const auto& reg = b.registry();
    for (auto variant : {PenaltyVariant::hermitian_square, PenaltyVariant::squared_plus_hc}) {
        const auto set = build_hamiltonian_set(inst, b, cplx(0.3), variant, 0.1);
        CHECK(set.H_P.hermitian());
        CHECK(set.H_I.hermitian());
        const Vector vac = ket(b, BasisState(reg.mode_count(), 0));
        const double factor = variant == PenaltyVariant::hermitian_square ? 1.0 : 2.0;
        CHECK(vac.dot(set.H_P.apply(vac)).real() == doctest::Approx(factor * set.s));

        const Vector tour = ket(b, links_state(reg, {{2, 1, 1}, {3, 2, 1}, {1, 3, 1}}));
        CHECK((set.H_P.apply(tour) - 3.5 * tour).norm() <= 1e-12);

        // An extra link the tour does not use costs its own distance.
        const Vector extra = ket(b, links_state(reg, {{2, 1, 1}, {3, 2, 1}, {1, 3, 1}, {3, 1, 1}}));
        CHECK((set.H_P.apply(extra) - (3.5 + inst.d(3, 1)) * extra).norm() <= 1e-12);

        const auto sector = vacuum_sector(set);
        CHECK(sector.leakage <= 1e-12);
        const FockBasis links_only(ModeRegistry(3, false), caps(2, std::nullopt, 0, 0));
        const auto direct = sector_target_hamiltonian(inst, links_only, variant, set.s);
        CHECK(fock::max_abs_difference(direct, sector.H_P) <= 1e-10);
        CHECK(fock::max_abs_difference(build_initial_hamiltonian(links_only, cplx(0.3)), sector.H_I) <= 1e-12);
    }
}

TEST_CASE("ground space from blocks") {
    const auto inst = random_euclidean(3, 11);
    const FockBasis b(ModeRegistry(3, false), caps(2, std::nullopt, 1, 2));
    const double s = scale_s(inst);
    const auto Q = build_Q(b);
    const auto H_P = build_target_hamiltonian(inst, b, PenaltyVariant::hermitian_square, s, Q);
    const auto a = ground_space_from_operator(H_P, b);
    const auto c = ground_space_blockwise(inst, b, PenaltyVariant::hermitian_square, s);
    const auto best = oracle::brute_force_shortest(inst);
    CHECK(a.max_off_block == 0.0);
    CHECK(a.min_eigenvalue == doctest::Approx(best.length).epsilon(1e-12));
    CHECK(c.min_eigenvalue == doctest::Approx(best.length).epsilon(1e-12));
    CHECK(a.degeneracy() == best.tours.size());
    CHECK(c.degeneracy() == a.degeneracy());
    CHECK(a.first_excited == doctest::Approx(c.first_excited).epsilon(1e-10));
    for (const auto& g : a.ground) CHECK(g.hm_weight <= 1e-12);
}
