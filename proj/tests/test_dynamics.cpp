#include <doctest.h>

#include <cmath>
#include <numbers>

#include "czsim/dynamics.hpp"

using namespace czsim;

namespace {
const double kPi = std::numbers::pi;

bool approx_c(Complex a, Complex b, double tol = 1e-14) {
    return std::abs(a - b) <= tol;
}
} // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("canonical basis ordering") {
    CHECK(basis_linear({0, 0, 0}) == 0);
    CHECK(basis_linear({1, 0, 0}) == 1);
    CHECK(basis_linear({0, 1, 0}) == 2);
    CHECK(basis_linear({1, 1, 0}) == 3);
    CHECK(basis_linear({0, kAuxLevel, 0}) == 4);
    CHECK(basis_linear({1, kAuxLevel, 0}) == 5);
    CHECK(basis_linear({0, 0, 1}) == 6);
    CHECK(basis_linear({1, kAuxLevel, 1}) == 11);
    for (int i = 0; i < kSystemDim; ++i)
        CHECK(basis_linear(basis_from_linear(i)) == i);
}

TEST_CASE("zero-area pulse acts as the identity") {
    const CoherentField f = CoherentField::with_tail(50.0, 1e-12);
    Pulse p = Pulse::carrier(Ion::y, 0, 1, 0.0, -kPi / 2, f);
    for (int b = 0; b < kSystemDim; ++b) {
        const PulseAction a = pulse_action(p, b, 50);
        CHECK(approx_c(a.hops[0].amp, Complex(1.0, 0.0)));
        CHECK(a.hops[0].state == b);
        if (a.count == 2)
            CHECK(std::abs(a.hops[1].amp) <= 1e-15);
    }
}

TEST_CASE("carrier amplitudes follow the quantized two-level map") {
    const double nbar = 1e4;
    const CoherentField f = CoherentField::with_tail(nbar, 1e-12);
    const Pulse step1 = Pulse::carrier(Ion::y, 0, 1, 0.5, -kPi / 2, f);

    SUBCASE("ground level with an empty field stays put") {
        const PulseAction a = carrier_amplitudes(step1, 0, 0);
        CHECK(a.count == 1);
        CHECK(approx_c(a.hops[0].amp, Complex(1.0, 0.0)));
        CHECK(a.hops[0].fock == 0);
    }
    SUBCASE("excited level at n = nbar emits with a real positive sine") {
        const auto n = static_cast<long long>(nbar);
        const PulseAction a = carrier_amplitudes(step1, 1, n);
        const double theta = (kPi / 4.0) * std::sqrt(static_cast<double>(n + 1)) / std::sqrt(nbar);
        REQUIRE(a.count == 2);
        CHECK(approx_c(a.hops[0].amp, Complex(std::cos(theta), 0.0)));
        CHECK(a.hops[0].state == 1);
        CHECK(a.hops[0].fock == n);
        // -i e^{-i phi} with phi = -pi/2 collapses to +1
        CHECK(approx_c(a.hops[1].amp, Complex(std::sin(theta), 0.0)));
        CHECK(a.hops[1].state == 0);
        CHECK(a.hops[1].fock == n + 1);
    }
    SUBCASE("ground level absorbs with the phase -i e^{i phi} = -1") {
        const auto n = static_cast<long long>(nbar);
        const PulseAction a = carrier_amplitudes(step1, 0, n);
        const double theta = (kPi / 4.0) * std::sqrt(static_cast<double>(n)) / std::sqrt(nbar);
        REQUIRE(a.count == 2);
        CHECK(approx_c(a.hops[1].amp, Complex(-std::sin(theta), 0.0)));
        CHECK(a.hops[1].state == 1);
        CHECK(a.hops[1].fock == n - 1);
    }
    CHECK_THROWS_AS(carrier_amplitudes(step1, 0, -1), std::invalid_argument);
}

TEST_CASE("sideband amplitudes couple exactly one composite pair") {
    const double nbar = 400.0;
    const CoherentField f = CoherentField::with_tail(nbar, 1e-12);
    const Pulse step2 = Pulse::red_sideband(Ion::x, 1, 0, 0, 1.0, 0.0, f);
    const Pulse step3 = Pulse::red_sideband(Ion::y, 0, 1, kAuxLevel, 2.0, 0.0, f);
    const long long n = 400;

    SUBCASE("x excitation with phonon vacuum swaps into the phonon") {
        const PulseAction a = sideband_amplitudes(step2, {1, 0, 0}, n);
        const double theta = (kPi / 2.0) * std::sqrt(static_cast<double>(n + 1)) / std::sqrt(nbar);
        REQUIRE(a.count == 2);
        CHECK(approx_c(a.hops[0].amp, Complex(std::cos(theta), 0.0)));
        CHECK(approx_c(a.hops[1].amp, Complex(0.0, -std::sin(theta))));
        CHECK(a.hops[1].state == basis_linear({0, 0, 1}));
        CHECK(a.hops[1].fock == n + 1);
    }
    SUBCASE("phonon vacuum in the lower level is untouched") {
        const PulseAction a = sideband_amplitudes(step2, {0, 1, 0}, n);
        CHECK(a.count == 1);
        CHECK(approx_c(a.hops[0].amp, Complex(1.0, 0.0)));
    }
    SUBCASE("excited ion with excited phonon is a spectator") {
        const PulseAction a = sideband_amplitudes(step2, {1, 0, 1}, n);
        CHECK(a.count == 1);
        CHECK(approx_c(a.hops[0].amp, Complex(1.0, 0.0)));
        CHECK(a.hops[0].fock == n);
    }
    SUBCASE("auxiliary pulse drives (y=0, ph=1) through the aux level") {
        const PulseAction a = sideband_amplitudes(step3, {0, 0, 1}, n);
        const double theta = kPi * std::sqrt(static_cast<double>(n + 1)) / std::sqrt(nbar);
        REQUIRE(a.count == 2);
        CHECK(approx_c(a.hops[0].amp, Complex(std::cos(theta), 0.0)));
        CHECK(approx_c(a.hops[1].amp, Complex(0.0, -std::sin(theta))));
        CHECK(a.hops[1].state == basis_linear({0, kAuxLevel, 0}));
        CHECK(a.hops[1].fock == n + 1);
    }
    SUBCASE("aux level with phonon vacuum returns to (y=0, ph=1)") {
        const PulseAction a = sideband_amplitudes(step3, {1, kAuxLevel, 0}, n);
        const double theta = kPi * std::sqrt(static_cast<double>(n)) / std::sqrt(nbar);
        REQUIRE(a.count == 2);
        CHECK(approx_c(a.hops[1].amp, Complex(0.0, -std::sin(theta))));
        CHECK(a.hops[1].state == basis_linear({1, 0, 1}));
        CHECK(a.hops[1].fock == n - 1);
    }
    SUBCASE("y qubit levels never feel the aux pulse") {
        for (int y : {0, 1}) {
            const PulseAction a = sideband_amplitudes(step3, {0, y, 0}, n);
            CHECK(a.count == 1);
        }
        const PulseAction a = sideband_amplitudes(step3, {0, 1, 1}, n);
        CHECK(a.count == 1);
    }
}

TEST_CASE("pulse action conserves probability and the photon selection rule") {
    const Protocol proto = Protocol::cz_cnot(200.0, 1e-12);
    for (const Pulse& p : proto.steps) {
        const CouplingTable tab = coupling_table(p);
        for (int b = 0; b < kSystemDim; ++b) {
            for (long long n : {190LL, 200LL, 215LL}) {
                const PulseAction a = pulse_action(p, b, n);
                double prob = 0.0;
                for (int h = 0; h < a.count; ++h) {
                    prob += std::norm(a.hops[h].amp);
                    const long long dn = a.hops[h].fock - n;
                    if (a.hops[h].state == b)
                        CHECK(dn == 0);
                    else
                        CHECK(std::abs(dn) == 1); // photon exchanged iff the state flips
                }
                CHECK(prob == doctest::Approx(1.0).epsilon(1e-14));
                if (tab.role[b] == 0)
                    CHECK(a.count == 1);
            }
        }
    }
}

TEST_CASE("ideal pulses") {
    const CoherentField f = CoherentField::with_tail(100.0, 1e-12);
    SUBCASE("a full 2 pi cycle flips the sign on the coupled span") {
        const Pulse p = Pulse::red_sideband(Ion::y, 0, 1, kAuxLevel, 2.0, 0.0, f);
        const Mat12 u = ideal_pulse(p);
        const CouplingTable tab = coupling_table(p);
        for (int i = 0; i < kSystemDim; ++i) {
            const double expected = tab.role[i] == 0 ? 1.0 : -1.0;
            CHECK(approx_c(u(i, i), Complex(expected, 0.0)));
        }
        CHECK((u.cwiseAbs() - Mat12::Identity().cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-14);
    }
    SUBCASE("the two carrier half-pulses are mutually inverse") {
        const Pulse first = Pulse::carrier(Ion::y, 0, 1, 0.5, -kPi / 2, f);
        const Pulse last = Pulse::carrier(Ion::y, 0, 1, 0.5, kPi / 2, f);
        const Mat12 composed = ideal_pulse(last) * ideal_pulse(first);
        CHECK((composed - Mat12::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("the ideal protocol is an exact controlled flip") {
    const Protocol proto = Protocol::cz_cnot(100.0, 1e-12);
    const Mat12 u = ideal_protocol_unitary(proto);
    // truth table on the qubit pair with phonon 0, global phase +1
    const std::array<std::pair<int, int>, 4> pairs{{{0, 0}, {1, 3}, {2, 2}, {3, 1}}};
    for (const auto& [in, out] : pairs) {
        Vec12 psi = Vec12::Zero();
        psi(in) = 1.0;
        const Vec12 mapped = u * psi;
        CHECK(approx_c(mapped(out), Complex(1.0, 0.0), 1e-13));
        CHECK(mapped.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK((u * u - Mat12::Identity()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((u.adjoint() * u - Mat12::Identity()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("protocol presets resolve by name") {
    const Protocol p = protocol_preset("cz-cnot", 100.0);
    CHECK(p.steps[0].transition == Transition::carrier);
    CHECK(p.steps[2].area_pi == doctest::Approx(2.0));
    CHECK_THROWS_AS(protocol_preset("nope", 100.0), std::invalid_argument);
}

TEST_SUITE_END();
