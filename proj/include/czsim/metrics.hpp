// Reduction to the ion subsystem, expected states under the gate truth table,
// failure probability after repeated gate applications, and the
// proportionality fits (operation count, inverse mean photon number).
#pragma once

#include <array>
#include <string>
#include <vector>

#include "czsim/channel.hpp"

namespace czsim {

using Mat6 = Eigen::Matrix<Complex, 6, 6>;
using Vec6 = Eigen::Matrix<Complex, 6, 1>;

/// Qubit-pair initial state: amplitudes of |00>, |10>, |01>, |11> in (x,y)
/// order, phonon cooled to |0>, auxiliary level unpopulated.
struct InitialQubitState {
    std::array<Complex, 4> amps{};

    double norm() const;
    void normalize();

    /// 12-dim embedding with phonon |0> and zero aux components.
    Vec12 embed() const;
    Mat12 density() const;

    static const std::array<std::string, 6>& preset_names(); // 00 10 01 11 plus-x plus-y
    static InitialQubitState preset(const std::string& name);
};

/// Partial trace over the phonon; rows/columns ordered (x=0,y=0), (1,0),
/// (0,1), (1,1), (0,aux), (1,aux).
Mat6 trace_out_phonon(const Mat12& rho);

/// Semiclassical expectation after t gates: identity on the amplitudes for
/// even t (including t = 0), the truth-table swap alpha2 <-> alpha4 for odd t.
Vec6 expected_state(const InitialQubitState& initial, long long t);

struct FailureResult {
    double p_fail = 0.0;
    double trace_defect = 0.0;
    double hermiticity_defect = 0.0;
};

FailureResult failure_probability_result(const Superoperator& gate,
                                         const InitialQubitState& initial, long long t);
double failure_probability(const Superoperator& gate, const InitialQubitState& initial,
                           long long t);

/// p_fail at each requested t (ascending), sharing one incremental
/// propagation of the straightened density matrix.
std::vector<FailureResult> failure_probability_series(const Superoperator& gate,
                                                      const InitialQubitState& initial,
                                                      const std::vector<long long>& ts);

/// One sweep record.
struct RunResult {
    double nbar = 0.0;
    long long t = 0;
    std::string initial;
    double p_fail = 0.0;
    double trace_defect = 0.0;
};

struct LinearFit {
    double slope = 0.0;        // through-origin least squares
    double rel_residual = 0.0; // ||y - slope x|| / ||y||
};

LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

struct ProportionalityReport {
    // one per supplied gate, same order: p_f vs t
    std::vector<double> nbars;
    std::vector<LinearFit> fit_vs_t;
    // p_f at the largest t vs 1/nbar across gates
    LinearFit fit_vs_inv_nbar;
    // p_f(nbar_i, t_max) / p_f(nbar_j, t_max) for consecutive pairs
    std::vector<double> consecutive_ratios;
    std::vector<std::vector<double>> p_fail; // [gate][t index]
};

ProportionalityReport proportionality_report(
    const std::vector<std::pair<double, const Superoperator*>>& gates,
    const InitialQubitState& initial, const std::vector<long long>& t_grid);

} // namespace czsim
