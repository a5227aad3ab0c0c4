#include <doctest.h>

#include <cmath>
#include <complex>

#include "czsim/metrics.hpp"

using namespace czsim;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("initial-state presets") {
    for (const std::string& name : InitialQubitState::preset_names()) {
        const InitialQubitState s = InitialQubitState::preset(name);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(InitialQubitState::preset("10").amps[1] == Complex(1.0, 0.0));
    CHECK(InitialQubitState::preset("plus-y").amps[2].real() ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK_THROWS_WITH_AS(InitialQubitState::preset("bogus"), doctest::Contains("plus-x"),
                         std::invalid_argument);
}

TEST_CASE("phonon trace-out") {
    SUBCASE("product state with phonon vacuum") {
        Mat6 ions = Mat6::Zero();
        ions(0, 0) = 0.25;
        ions(3, 3) = 0.75;
        ions(0, 3) = Complex(0.1, 0.2);
        ions(3, 0) = std::conj(ions(0, 3));
        Mat12 rho = Mat12::Zero();
        rho.topLeftCorner<6, 6>() = ions;
        CHECK((trace_out_phonon(rho) - ions).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SUBCASE("maximally mixed") {
        const Mat12 rho = Mat12::Identity() / 12.0;
        const Mat6 reduced = trace_out_phonon(rho);
        CHECK((reduced - Mat6::Identity() / 6.0).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(reduced.trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("one quantized gate returns the phonon to near-vacuum") {
        const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
        const Superoperator m = gate_superop(proto, {true, true, true, true, true});
        const ApplyResult r = apply_n(m, InitialQubitState::preset("10").density(), 1);
        const double ph0 = r.rho.topLeftCorner<6, 6>().trace().real();
        CHECK(ph0 >= 0.99);
    }
}

TEST_CASE("expected states follow the alternating truth table") {
    const InitialQubitState s00 = InitialQubitState::preset("00");
    for (long long t : {0LL, 1LL, 2LL, 7LL}) {
        const Vec6 e = expected_state(s00, t);
        CHECK(std::abs(e(0) - Complex(1.0, 0.0)) <= 1e-15);
        CHECK(e.norm() == doctest::Approx(1.0));
    }
    const Vec6 e10 = expected_state(InitialQubitState::preset("10"), 1);
    CHECK(std::abs(e10(3) - Complex(1.0, 0.0)) <= 1e-15); // |10> -> |11>
    const Vec6 e10e = expected_state(InitialQubitState::preset("10"), 2);
    CHECK(std::abs(e10e(1) - Complex(1.0, 0.0)) <= 1e-15);

    const Vec6 ex = expected_state(InitialQubitState::preset("plus-x"), 1);
    CHECK(std::abs(ex(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);
    CHECK(std::abs(ex(3) - Complex(1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);
    CHECK_THROWS_AS(expected_state(s00, -1), std::invalid_argument);
}

TEST_CASE("ideal gate never fails") {
    const Protocol proto = Protocol::cz_cnot(100.0, 1e-13);
    const Superoperator m = gate_superop(proto, {false, false, false, false, false});
    for (const std::string& name : InitialQubitState::preset_names())
        for (long long t : {0LL, 1LL, 2LL, 3LL})
            CHECK(std::abs(failure_probability(m, InitialQubitState::preset(name), t)) <= 1e-12);
}

TEST_CASE("failure probability properties at nbar = 1e2") {
    const Protocol proto = Protocol::cz_cnot(100.0, 1e-14);
    const Superoperator m = gate_superop(proto, {true, true, true, true, true});

    SUBCASE("invariant under a global phase of the initial amplitudes") {
        InitialQubitState rotated = InitialQubitState::preset("plus-x");
        const Complex phase = std::exp(Complex(0.0, 0.7));
        for (Complex& a : rotated.amps)
            a *= phase;
        const double p0 = failure_probability(m, InitialQubitState::preset("plus-x"), 3);
        const double p1 = failure_probability(m, rotated, 3);
        CHECK(std::abs(p0 - p1) <= 1e-13);
    }

    SUBCASE("bounded and nondecreasing over the tested horizon") {
        std::vector<long long> ts;
        for (long long t = 1; t <= 60; ++t)
            ts.push_back(t);
        for (const std::string& name : {"10", "00", "11", "01"}) {
            const auto series =
                failure_probability_series(m, InitialQubitState::preset(name), ts);
            double prev = -1e-12;
            for (const FailureResult& r : series) {
                CHECK(r.p_fail >= -1e-8);
                CHECK(r.p_fail <= 1.0 + 1e-8);
                CHECK(r.p_fail >= prev - 1e-10);
                prev = r.p_fail;
            }
        }
    }

    SUBCASE("states with control excitation fail more") {
        const double p10 = failure_probability(m, InitialQubitState::preset("10"), 20);
        const double p00 = failure_probability(m, InitialQubitState::preset("00"), 20);
        const double p11 = failure_probability(m, InitialQubitState::preset("11"), 20);
        const double p01 = failure_probability(m, InitialQubitState::preset("01"), 20);
        CHECK(p10 >= p00);
        CHECK(p11 >= p01);
    }

    SUBCASE("series matches point evaluation") {
        const auto series =
            failure_probability_series(m, InitialQubitState::preset("10"), {1, 5, 9});
        CHECK(series[2].p_fail ==
              doctest::Approx(failure_probability(m, InitialQubitState::preset("10"), 9))
                  .epsilon(1e-12));
        CHECK_THROWS_AS(
            failure_probability_series(m, InitialQubitState::preset("10"), {5, 5}),
            std::invalid_argument);
    }

    SUBCASE("unnormalized input is rejected") {
        InitialQubitState bad;
        bad.amps = {Complex(1.0), Complex(1.0), Complex(0.0), Complex(0.0)};
        CHECK_THROWS_AS(failure_probability(m, bad, 1), std::invalid_argument);
        bad.normalize();
        CHECK(failure_probability(m, bad, 1) >= 0.0);
    }
}

TEST_CASE("through-origin fits") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 4, 6, 8};
    const LinearFit f = fit_through_origin(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f.rel_residual <= 1e-15);
    CHECK_THROWS_AS(fit_through_origin({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_through_origin({}, {}), std::invalid_argument);
}

TEST_CASE("proportionality in operation count and inverse photon number") {
    // nbar low enough to keep the gate builds fast, high enough that p_f
    // stays in the linear regime over the grid
    const std::array<bool, 5> all{true, true, true, true, true};
    const Protocol p4 = Protocol::cz_cnot(1e4, 1e-14);
    const Protocol p6 = Protocol::cz_cnot(1e6, 1e-14);
    const Superoperator m4 = gate_superop(p4, all);
    const Superoperator m6 = gate_superop(p6, all);

    std::vector<long long> grid;
    for (long long t = 5; t <= 50; t += 5)
        grid.push_back(t);
    const auto report = proportionality_report({{1e4, &m4}, {1e6, &m6}},
                                               InitialQubitState::preset("10"), grid);
    CHECK(report.fit_vs_t[0].rel_residual <= 0.05);
    CHECK(report.fit_vs_t[1].rel_residual <= 0.05);
    CHECK(report.consecutive_ratios[0] >= 80.0);
    CHECK(report.consecutive_ratios[0] <= 120.0);
    CHECK(report.fit_vs_inv_nbar.slope > 0.0);

    // the ideal channel has zero slope
    const Superoperator mi = gate_superop(p4, {false, false, false, false, false});
    const auto ideal_rep =
        proportionality_report({{1e4, &mi}}, InitialQubitState::preset("10"), grid);
    CHECK(std::abs(ideal_rep.fit_vs_t[0].slope) <= 1e-13);
    CHECK_THROWS_AS(proportionality_report({}, InitialQubitState::preset("10"), grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(proportionality_report({{1e4, &m4}}, InitialQubitState::preset("10"), {}),
                    std::invalid_argument);
}

TEST_SUITE_END();
