#include "czsim/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace czsim {

namespace {
constexpr Complex kMinusI{0.0, -1.0};

Complex emit_phase(double phi) { return kMinusI * std::exp(Complex(0.0, -phi)); }
Complex absorb_phase(double phi) { return kMinusI * std::exp(Complex(0.0, phi)); }
} // namespace

double Pulse::rabi_angle(long long n) const {
    return (area_pi * std::numbers::pi / 2.0) * std::sqrt(static_cast<double>(n)) /
           std::sqrt(field.nbar());
}

Pulse Pulse::carrier(Ion target, int absorber_level, int emitter_level, double area_pi,
                     double phase, CoherentField field) {
    return Pulse{Transition::carrier, target, emitter_level, absorber_level,
                 0, area_pi, phase, std::move(field)};
}

Pulse Pulse::red_sideband(Ion target, int emitter_level, int emitter_ph, int absorber_level,
                          double area_pi, double phase, CoherentField field) {
    return Pulse{Transition::red_sideband, target, emitter_level, absorber_level,
                 emitter_ph, area_pi, phase, std::move(field)};
}

CouplingTable coupling_table(const Pulse& pulse) {
    CouplingTable t;
    t.partner.fill(-1);
    for (int i = 0; i < kSystemDim; ++i) {
        const BasisIndex b = basis_from_linear(i);
        const int lvl = (pulse.target == Ion::x) ? b.x : b.y;
        if (pulse.transition == Transition::carrier) {
            // couples the two ion levels at every phonon setting
            if (lvl == pulse.emitter_level) {
                BasisIndex p = b;
                (pulse.target == Ion::x ? p.x : p.y) = pulse.absorber_level;
                t.role[i] = +1;
                t.partner[i] = basis_linear(p);
            } else if (lvl == pulse.absorber_level) {
                BasisIndex p = b;
                (pulse.target == Ion::x ? p.x : p.y) = pulse.emitter_level;
                t.role[i] = -1;
                t.partner[i] = basis_linear(p);
            }
        } else {
            // couples (emitter_level, emitter_ph) <-> (absorber_level, 1 - emitter_ph)
            if (lvl == pulse.emitter_level && b.ph == pulse.emitter_ph) {
                BasisIndex p = b;
                (pulse.target == Ion::x ? p.x : p.y) = pulse.absorber_level;
                p.ph = 1 - pulse.emitter_ph;
                t.role[i] = +1;
                t.partner[i] = basis_linear(p);
            } else if (lvl == pulse.absorber_level && b.ph == 1 - pulse.emitter_ph) {
                BasisIndex p = b;
                (pulse.target == Ion::x ? p.x : p.y) = pulse.emitter_level;
                p.ph = pulse.emitter_ph;
                t.role[i] = -1;
                t.partner[i] = basis_linear(p);
            }
        }
    }
    return t;
}

PulseAction pulse_action(const Pulse& pulse, int basis_state, long long n) {
    if (basis_state < 0 || basis_state >= kSystemDim)
        throw std::invalid_argument("pulse_action: basis_state out of range");
    if (n < 0)
        throw std::invalid_argument("pulse_action: Fock index must be >= 0");

    const CouplingTable tab = coupling_table(pulse);
    PulseAction out;
    if (tab.role[basis_state] == 0) {
        out.count = 1;
        out.hops[0] = {Complex(1.0, 0.0), basis_state, n};
        return out;
    }
    if (tab.role[basis_state] > 0) {
        const double th = pulse.rabi_angle(n + 1);
        out.count = 2;
        out.hops[0] = {Complex(std::cos(th), 0.0), basis_state, n};
        out.hops[1] = {emit_phase(pulse.phase) * std::sin(th), tab.partner[basis_state], n + 1};
        return out;
    }
    const double th = pulse.rabi_angle(n);
    if (n == 0) {
        out.count = 1;
        out.hops[0] = {Complex(1.0, 0.0), basis_state, n};
        return out;
    }
    out.count = 2;
    out.hops[0] = {Complex(std::cos(th), 0.0), basis_state, n};
    out.hops[1] = {absorb_phase(pulse.phase) * std::sin(th), tab.partner[basis_state], n - 1};
    return out;
}

PulseAction carrier_amplitudes(const Pulse& pulse, int ion_level, long long n) {
    if (pulse.transition != Transition::carrier)
        throw std::invalid_argument("carrier_amplitudes: pulse is not a carrier pulse");
    if (n < 0)
        throw std::invalid_argument("carrier_amplitudes: n must be >= 0");
    PulseAction out;
    if (ion_level == pulse.emitter_level) {
        const double th = pulse.rabi_angle(n + 1);
        out.count = 2;
        out.hops[0] = {Complex(std::cos(th), 0.0), ion_level, n};
        out.hops[1] = {emit_phase(pulse.phase) * std::sin(th), pulse.absorber_level, n + 1};
    } else if (ion_level == pulse.absorber_level) {
        const double th = pulse.rabi_angle(n);
        if (n == 0) {
            out.count = 1;
            out.hops[0] = {Complex(1.0, 0.0), ion_level, 0};
        } else {
            out.count = 2;
            out.hops[0] = {Complex(std::cos(th), 0.0), ion_level, n};
            out.hops[1] = {absorb_phase(pulse.phase) * std::sin(th), pulse.emitter_level, n - 1};
        }
    } else {
        out.count = 1;
        out.hops[0] = {Complex(1.0, 0.0), ion_level, n};
    }
    return out;
}

PulseAction sideband_amplitudes(const Pulse& pulse, BasisIndex state, long long n) {
    if (pulse.transition != Transition::red_sideband)
        throw std::invalid_argument("sideband_amplitudes: pulse is not a sideband pulse");
    return pulse_action(pulse, basis_linear(state), n);
}

Mat12 ideal_pulse(const Pulse& pulse) {
    const CouplingTable tab = coupling_table(pulse);
    const double half = pulse.area_pi * std::numbers::pi / 2.0;
    Mat12 u = Mat12::Identity();
    for (int i = 0; i < kSystemDim; ++i) {
        if (tab.role[i] == 0)
            continue;
        u(i, i) = std::cos(half);
        if (tab.role[i] > 0)
            u(tab.partner[i], i) = emit_phase(pulse.phase) * std::sin(half);
        else
            u(tab.partner[i], i) = absorb_phase(pulse.phase) * std::sin(half);
    }
    return u;
}

Protocol Protocol::cz_cnot(double nbar, double tail_eps) {
    const CoherentField f = CoherentField::with_tail(nbar, tail_eps);
    const double pi_half = std::numbers::pi / 2.0;
    return Protocol{{
        Pulse::carrier(Ion::y, 0, 1, 0.5, -pi_half, f),
        Pulse::red_sideband(Ion::x, 1, 0, 0, 1.0, 0.0, f),
        Pulse::red_sideband(Ion::y, 0, 1, kAuxLevel, 2.0, 0.0, f),
        Pulse::red_sideband(Ion::x, 1, 0, 0, 1.0, 0.0, f),
        Pulse::carrier(Ion::y, 0, 1, 0.5, pi_half, f),
    }};
}

Protocol protocol_preset(const std::string& name, double nbar, double tail_eps) {
    if (name == "cz-cnot")
        return Protocol::cz_cnot(nbar, tail_eps);
    throw std::invalid_argument("unknown protocol preset '" + name + "' (available: cz-cnot)");
}

Mat12 ideal_protocol_unitary(const Protocol& protocol) {
    Mat12 u = Mat12::Identity();
    for (const Pulse& p : protocol.steps)
        u = ideal_pulse(p) * u;
    return u;
}

} // namespace czsim
