// Pulse descriptions and the amplitude-level action of quantized carrier and
// red-sideband pulses on the 12-dimensional (control ion x) x (target ion y,
// including the auxiliary level) x (two-level phonon) system joined with one
// driving field mode, plus the semiclassical (ideal) limits.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

#include "czsim/field.hpp"

namespace czsim {

inline constexpr int kSystemDim = 12;

using Complex = std::complex<double>;
using Mat12 = Eigen::Matrix<Complex, kSystemDim, kSystemDim>;
using Vec12 = Eigen::Matrix<Complex, kSystemDim, 1>;

/// y-ion internal levels; the auxiliary level hosts the conditional 2*pi loop.
inline constexpr int kAuxLevel = 2;

struct BasisIndex {
    int x = 0;  // control ion: 0, 1
    int y = 0;  // target ion: 0, 1, 2 (= aux)
    int ph = 0; // phonon: 0, 1
};

/// Canonical linear ordering: phonon-0 block then phonon-1 block, each listed
/// as (x=0,y=0), (1,0), (0,1), (1,1), (0,aux), (1,aux).
constexpr int basis_linear(BasisIndex b) { return b.ph * 6 + b.y * 2 + b.x; }
constexpr BasisIndex basis_from_linear(int i) {
    return BasisIndex{i % 2, (i % 6) / 2, i / 6};
}

enum class Transition : std::uint8_t { carrier, red_sideband };
enum class Ion : std::uint8_t { x, y };

/// A single laser pulse. Hamiltonian constants are absorbed into the
/// dimensionless area: a pulse of area k*pi drives Fock level n through the
/// Rabi angle theta_n = (k*pi/2) * sqrt(n) / sqrt(nbar).
///
/// The pulse couples two (ion level, phonon level) composite states, the
/// "emitter" and the "absorber":
///   |E, n> -> cos(theta_{n+1}) |E, n>  - i e^{-i phi} sin(theta_{n+1}) |A, n+1>
///   |A, n> -> cos(theta_n)     |A, n>  - i e^{+i phi} sin(theta_n)     |E, n-1>
/// Every other basis state is a spectator and evolves trivially; in
/// particular the phonon is a strict two-level system, so sideband pulses
/// leave composite states outside their coupled pair untouched instead of
/// leaking to higher phonon levels.
struct Pulse {
    Transition transition = Transition::carrier;
    Ion target = Ion::y;
    int emitter_level = 1;  // ion level of the emitter composite
    int absorber_level = 0; // ion level of the absorber composite
    int emitter_ph = 0;     // sideband only; the absorber has 1 - emitter_ph
    double area_pi = 0.5;   // pulse area in units of pi
    double phase = 0.0;     // laser phase phi
    CoherentField field;

    double rabi_angle(long long n) const;

    static Pulse carrier(Ion target, int absorber_level, int emitter_level,
                         double area_pi, double phase, CoherentField field);
    static Pulse red_sideband(Ion target, int emitter_level, int emitter_ph,
                              int absorber_level, double area_pi, double phase,
                              CoherentField field);
};

/// Role of each basis state under a pulse: +1 emitter, -1 absorber, 0
/// spectator; partner[i] is the paired state (or -1).
struct CouplingTable {
    std::array<int, kSystemDim> role{};
    std::array<int, kSystemDim> partner{};
};

CouplingTable coupling_table(const Pulse& pulse);

/// One output component of a pulse acting on |state> |n>_field.
struct Hop {
    Complex amp;
    int state = 0; // resulting basis index (carrier_amplitudes: ion level)
    long long fock = 0;
};

struct PulseAction {
    int count = 1;
    std::array<Hop, 2> hops{};
};

/// Action on the full 12-dim basis joined with a field Fock state. Spectators
/// return a single unit hop.
PulseAction pulse_action(const Pulse& pulse, int basis_state, long long n);

/// Two-level carrier action on the bare target ion, per the carrier unitary:
/// level 0 absorbs (n -> n-1), level 1 emits (n -> n+1).
PulseAction carrier_amplitudes(const Pulse& pulse, int ion_level, long long n);

/// Sideband action resolved on the 12-dim basis.
PulseAction sideband_amplitudes(const Pulse& pulse, BasisIndex state, long long n);

/// The nbar -> infinity limit: a rotation by half the pulse area on the
/// coupled pair with the quantized phase convention, identity elsewhere.
Mat12 ideal_pulse(const Pulse& pulse);

/// The five-step gate sequence.
struct Protocol {
    std::array<Pulse, 5> steps;

    /// Canonical CNOT protocol (control x, target y):
    ///  1. carrier on y, area pi/2, phi = -pi/2
    ///  2. red sideband on x qubit pair, area pi, phi = 0
    ///  3. red sideband on the y (0,aux) pair, area 2*pi, phi = 0
    ///  4. = step 2
    ///  5. carrier on y, area pi/2, phi = +pi/2
    /// Each step gets an independent fresh field mode of mean photon number
    /// nbar, truncated to the certified tail_eps window.
    static Protocol cz_cnot(double nbar, double tail_eps = 1e-14);
};

/// Protocol presets by name; currently "cz-cnot".
Protocol protocol_preset(const std::string& name, double nbar, double tail_eps = 1e-14);

/// Product of the five ideal pulses; equals the CNOT truth table on the
/// qubit (x,y) subspace with phonon 0.
Mat12 ideal_protocol_unitary(const Protocol& protocol);

} // namespace czsim
