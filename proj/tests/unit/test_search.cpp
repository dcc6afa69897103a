#include "aqtsp/evolution/spectral.hpp"
#include "aqtsp/search/search.hpp"

#include <doctest.h>

#include <cmath>

using namespace aqtsp;
using namespace aqtsp::search;

TEST_CASE("search Hamiltonians") {
    const auto inst = SearchInstance::uniform(8, 3);
    const auto h = build_search_hamiltonians(inst);
    CHECK((h.H0.matrix() * inst.amplitudes).norm() <= 1e-14);

    const auto levels = linalg::dense_eigenpairs(h.Hf);
    CHECK(levels.values[0] == doctest::Approx(0.0));
    for (int k = 1; k < 8; ++k) CHECK(levels.values[k] == doctest::Approx(1.0));
    CHECK(std::abs(levels.vectors(3, 0)) == doctest::Approx(1.0));

    const auto two = build_search_hamiltonians(SearchInstance::uniform(2));
    const auto flow = evolution::spectral_flow(two.H0, two.Hf, Schedule::linear(), 101, 2);
    CHECK(flow.min_gap == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(SearchInstance::uniform(1), ValidationError);
    CHECK_THROWS_AS(SearchInstance::uniform(4, 4), ValidationError);
    SearchInstance bad = SearchInstance::uniform(4);
    bad.amplitudes[0] *= 1.001;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("moments depend only on the marked weight") {
    const auto m = search_moments(SearchInstance::uniform(16));
    CHECK(m.mean == doctest::Approx(15.0 / 16.0));
    CHECK(m.spread == doctest::Approx(std::sqrt(1.0 / 16.0 - 1.0 / 256.0)));

    SearchInstance skew;
    skew.M = 4;
    skew.marked = 1;
    skew.amplitudes.resize(4);
    skew.amplitudes << std::sqrt(0.6), cplx(0.0, 0.5), std::sqrt(0.1), std::sqrt(0.05);
    SearchInstance other = skew;
    other.amplitudes << std::sqrt(0.05), -0.5, cplx(0.0, std::sqrt(0.1)), std::sqrt(0.6);
    const auto a = search_moments(skew);
    const auto b = search_moments(other);
    CHECK(a.spread == doctest::Approx(b.spread).epsilon(1e-14));
    CHECK(a.spread == doctest::Approx(std::sqrt(0.25 - 0.0625)));
    const auto direct = bounds::energy_moments(skew.amplitudes, build_search_hamiltonians(skew).Hf);
    CHECK(direct.spread == doctest::Approx(a.spread).epsilon(1e-12));
}

TEST_CASE("search runs") {
    const auto inst = SearchInstance::uniform(8);
    const auto zero = run_search(inst, Schedule::linear(), 0.0, 0.1);
    CHECK(zero.success == doctest::Approx(1.0 / 8.0));

    const auto slow = run_search(inst, Schedule::linear(), 200.0, 0.5);
    CHECK(slow.success >= 0.5);
    CHECK(slow.subspace_leakage <= 1e-10);
    CHECK(slow.max_energy == doctest::Approx(7.0 / 8.0));
    if (slow.first_orthogonal) CHECK(*slow.first_orthogonal >= slow.T_perp - 1.0);
    CHECK_THROWS_AS(run_search(inst, Schedule::linear(), 10.0, 0.0), ValidationError);
}

TEST_CASE("time to half success grows with M") {
    ScalingOptions opt;
    opt.T_max = 2048.0;
    std::vector<double> times;
    for (int M : {4, 16, 64}) {
        const auto t = find_T_half(SearchInstance::uniform(M), family_schedule(SearchFamily::scaled_sqrt_m, M), opt);
        REQUIRE(t);
        times.push_back(*t);
    }
    CHECK(times[1] > times[0]);
    CHECK(times[2] > times[1]);
    // Scaling g by sqrt(M) does not beat linear growth in M.
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double ratio = times[i] / times[i - 1];
        CHECK(ratio > 4.0);
        CHECK(ratio < 6.0);
    }
    MESSAGE("T_half for M = 4, 16, 64: " << times[0] << ", " << times[1] << ", " << times[2]);
}

TEST_CASE("log-log fit") {
    std::vector<double> x{2, 4, 8, 16, 32}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.75));
    const auto fit = loglog_fit(x, y);
    CHECK(fit.exponent == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.stderr_exponent <= 1e-10);
    CHECK(fit.ci_low <= fit.exponent);
    CHECK(fit.ci_high >= fit.exponent);

    y[2] *= 1.1;
    const auto noisy = loglog_fit(x, y);
    CHECK(noisy.stderr_exponent > 0.0);
    CHECK(noisy.ci_low < 0.75);
    CHECK(noisy.ci_high > noisy.exponent);
    CHECK(noisy.residuals.size() == 5);
    CHECK_THROWS_AS(loglog_fit({1}, {1}), ValidationError);
    CHECK_THROWS_AS(loglog_fit({1, 2, 4}, {1, -2, 3}), ValidationError);
}

TEST_CASE("families and study validation") {
    CHECK(family_schedule(SearchFamily::scaled_sqrt_m, 16).g(1.0) == doctest::Approx(4.0));
    CHECK(family_schedule(SearchFamily::quadratic_boost_sqrt_m, 16).g_integral() ==
          doctest::Approx(0.5 + 4.0 / 6.0));
    CHECK(family_schedule(SearchFamily::exponential_boost_e_m, 3).g(1.0) == doctest::Approx(std::exp(3.0)));
    CHECK_THROWS_AS(family_schedule(SearchFamily::linear, 1), ValidationError);
    for (auto f : {SearchFamily::linear, SearchFamily::scaled_sqrt_m, SearchFamily::quadratic_boost_sqrt_m,
                   SearchFamily::exponential_boost_e_m})
        CHECK(parse_search_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_search_family("cubic"), ValidationError);

    CHECK_THROWS_AS(scaling_study({4, 8, 16}, SearchFamily::linear), ValidationError);
    CHECK_THROWS_AS(scaling_study({4, 5, 6, 7}, SearchFamily::linear), ValidationError);
}
