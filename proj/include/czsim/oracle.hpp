// Brute-force ground truth: exact state-vector evolution of the 12-dim system
// jointly with the five truncated field modes, followed by field trace-out.
// Two exact representations of the same evolution are provided: a literal
// dense joint vector (memory-capped) and a factored sum-of-products form that
// exploits the fact that each mode interacts in exactly one step.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "czsim/metrics.hpp"

namespace czsim {

/// Dense amplitudes over (12-dim system) x (five mode windows). Storage
/// windows carry one index of headroom on each side so the single photon
/// exchange per mode stays inside the array.
struct JointState {
    std::array<FockWindow, 5> storage{};
    std::vector<Complex> amps; // index = ((((sys*W0 + m0)*W1 + m1)... ) row-major
    double norm() const;
};

/// Evolves the five pulses as exact unitaries on the joint space.
/// Refuses (std::invalid_argument, reporting the computed size) when the
/// joint dimension exceeds max_amplitudes; the default cap (1.5e8 amplitudes,
/// ~2.4 GB) targets small nbar per mode.
JointState evolve_full(const Protocol& protocol, const InitialQubitState& initial,
                       std::size_t max_amplitudes = 150'000'000);
JointState evolve_full(const Protocol& protocol, const Vec12& initial,
                       std::size_t max_amplitudes = 150'000'000);

/// Partial trace over all five modes.
Mat12 reduced_density(const JointState& joint);

/// Factored exact representation: each system basis state carries a small sum
/// of five-mode product terms (at most 2^5 after the full protocol).
struct BranchTerm {
    Complex coeff{1.0, 0.0};
    std::array<Eigen::VectorXcd, 5> modes;
};

struct BranchState {
    std::array<FockWindow, 5> storage{};
    std::array<std::vector<BranchTerm>, kSystemDim> branches;
};

BranchState evolve_branches(const Protocol& protocol, const InitialQubitState& initial);
BranchState evolve_branches(const Protocol& protocol, const Vec12& initial);

Mat12 reduced_density(const BranchState& state);

/// Convenience: one-gate reduced density matrix through the factored oracle.
Mat12 oracle_gate_output(const Protocol& protocol, const InitialQubitState& initial);

} // namespace czsim
