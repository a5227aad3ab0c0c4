// Kraus families obtained by tracing out each pulse's field mode, assembly of
// the per-step and one-gate superoperators on row-major straightened density
// matrices, channel diagnostics, and repeated application.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "czsim/dynamics.hpp"

namespace czsim {

inline constexpr int kSuperDim = kSystemDim * kSystemDim; // 144

using SuperMatrix = Eigen::MatrixXcd; // 144 x 144
using SuperVector = Eigen::VectorXcd; // 144

/// Row-major straightening: vec(rho)[12 i + j] = rho(i, j), so conjugation
/// channels satisfy vec(E rho E^dag) = (E (x) conj(E)) vec(rho).
SuperVector vec_density(const Mat12& rho);
Mat12 unvec_density(const SuperVector& v);

/// Kraus operators of one quantized pulse, indexed by the final field Fock
/// number (k_lo = window.lo - 1, clamped at 0).
struct KrausFamily {
    std::vector<Mat12> operators;
    long long k_lo = 0;
    double completeness_defect = 0.0; // operator norm of sum E^dag E - I
};

/// Extract the family; throws certification_error when the measured
/// completeness defect exceeds 10x the field's tail_eps.
KrausFamily kraus_from_pulse(const Pulse& pulse);

/// Direct application sum_k E_k rho E_k^dag.
Mat12 apply_kraus(const KrausFamily& family, const Mat12& rho);

struct Superoperator {
    SuperMatrix mat;
};

/// sum_k E_k (x) conj(E_k) under the row-major vec convention.
Superoperator superop_from_kraus(const KrausFamily& family);

/// Same channel built by streaming the Kraus index; never materializes the
/// family, so it stays cheap at large nbar where the window holds ~1e5 Fock
/// states.
Superoperator superop_from_pulse(const Pulse& pulse);

/// Conjugation channel rho -> U rho U^dag.
Superoperator conjugation_superop(const Mat12& u);

/// Ordered product M5 M4 M3 M2 M1. quantized_mask selects per step between
/// the quantized channel and the ideal unitary conjugation; all-true is the
/// fully quantized gate, (0,1,1,1,0) the sideband-limited scenario.
Superoperator gate_superop(const Protocol& protocol, const std::array<bool, 5>& quantized_mask);

/// Independent reconstruction of the same matrix, column by column: each
/// matrix-unit initial condition |i><j| is realized as a complex polarization
/// combination of pure states, propagated through the per-step channels by
/// direct operator sums, and read back as a column. Never forms a Kronecker
/// product, so it cross-checks both the vec convention and the composition.
Superoperator superop_by_coefficient_matching(const Protocol& protocol,
                                              const std::array<bool, 5>& quantized_mask = {
                                                  true, true, true, true, true});

/// Largest deviation of the trace row-vector from being a left fixed point.
double trace_preservation_defect(const Superoperator& m);

/// Choi representation under the declared vec convention; positive
/// semidefiniteness certifies complete positivity, trace = 12 for
/// trace-preserving maps.
SuperMatrix choi_matrix(const Superoperator& m);
double choi_min_eigenvalue(const Superoperator& m);

struct ApplyResult {
    Mat12 rho;
    double hermiticity_defect = 0.0; // max |rho - rho^dag| before symmetrizing
    double trace_defect = 0.0;       // |tr rho - 1| (not renormalized)
};

/// unvec(M^t vec(rho0)) by iterated multiplication; the output is
/// Hermitized (defect recorded) but deliberately not trace-renormalized.
/// rho0 must be Hermitian, positive semidefinite and unit trace within 1e-12.
ApplyResult apply_n(const Superoperator& m, const Mat12& rho0, long long t);

struct StepDiagnostics {
    bool quantized = false;
    double completeness_defect = 0.0; // 0 for ideal steps
    long long window_lo = 0;
    long long window_hi = 0;
    double tail_eps = 0.0;
};

struct ChannelDiagnostics {
    double nbar = 0.0;
    std::array<bool, 5> quantized_mask{};
    double trace_defect = 0.0;
    double choi_min_eigenvalue = 0.0;
    double choi_trace = 0.0;
    std::array<StepDiagnostics, 5> steps{};
};

/// Build the gate and measure every certification quantity in one pass.
ChannelDiagnostics diagnose_gate(const Protocol& protocol,
                                 const std::array<bool, 5>& quantized_mask,
                                 Superoperator* gate_out = nullptr);

} // namespace czsim
