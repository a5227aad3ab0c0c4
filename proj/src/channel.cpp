#include "czsim/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace czsim {

namespace {

using ComplexL = std::complex<long double>;

constexpr Complex kMinusI{0.0, -1.0};

// Per-pulse Kraus data in sequence form: for every basis state i and final
// field index k, D[i][k] = E_k(i, i) and O[i][k] = E_k(partner(i), i). A pulse
// exchanges at most one photon, so these two sequences are the only nonzero
// matrix elements.
struct KrausSequences {
    long long k_lo = 0;
    long long k_hi = 0;
    CouplingTable tab;
    std::array<std::vector<Complex>, kSystemDim> D;
    std::array<std::vector<Complex>, kSystemDim> O;

    long long count() const { return k_hi - k_lo + 1; }
};

KrausSequences build_sequences(const Pulse& pulse) {
    KrausSequences s;
    const FockWindow w = pulse.field.window();
    s.k_lo = std::max<long long>(0, w.lo - 1);
    s.k_hi = w.hi + 1;
    s.tab = coupling_table(pulse);

    const std::vector<double> amps = pulse.field.amplitudes();
    auto c = [&](long long j) -> double {
        return (j >= w.lo && j <= w.hi) ? amps[static_cast<std::size_t>(j - w.lo)] : 0.0;
    };

    const auto n_k = static_cast<std::size_t>(s.count());
    std::vector<double> cos_k(n_k), sin_k(n_k), cos_k1(n_k), sin_k1(n_k);
    for (long long k = s.k_lo; k <= s.k_hi; ++k) {
        const auto idx = static_cast<std::size_t>(k - s.k_lo);
        const double tk = pulse.rabi_angle(k);
        const double tk1 = pulse.rabi_angle(k + 1);
        cos_k[idx] = std::cos(tk);
        sin_k[idx] = std::sin(tk);
        cos_k1[idx] = std::cos(tk1);
        sin_k1[idx] = std::sin(tk1);
    }

    const Complex emit = kMinusI * std::exp(Complex(0.0, -pulse.phase));
    const Complex absorb = kMinusI * std::exp(Complex(0.0, pulse.phase));
    for (int i = 0; i < kSystemDim; ++i) {
        s.D[i].resize(n_k);
        if (s.tab.role[i] != 0)
            s.O[i].resize(n_k);
        for (long long k = s.k_lo; k <= s.k_hi; ++k) {
            const auto idx = static_cast<std::size_t>(k - s.k_lo);
            if (s.tab.role[i] == 0) {
                s.D[i][idx] = c(k);
            } else if (s.tab.role[i] > 0) {
                s.D[i][idx] = c(k) * cos_k1[idx];
                s.O[i][idx] = emit * (c(k - 1) * sin_k[idx]);
            } else {
                s.D[i][idx] = c(k) * cos_k[idx];
                s.O[i][idx] = absorb * (c(k + 1) * sin_k1[idx]);
            }
        }
    }
    return s;
}

// Operator norm of sum_k E_k^dag E_k - I, assembled from the sequences.
double completeness_defect_of(const KrausSequences& s) {
    Mat12 sum = Mat12::Zero();
    for (int i = 0; i < kSystemDim; ++i) {
        ComplexL diag = 0.0L;
        for (std::size_t k = 0; k < s.D[i].size(); ++k) {
            diag += static_cast<ComplexL>(std::norm(s.D[i][k]));
            if (s.tab.role[i] != 0)
                diag += static_cast<ComplexL>(std::norm(s.O[i][k]));
        }
        sum(i, i) = static_cast<Complex>(diag);
        if (s.tab.role[i] != 0) {
            const int p = s.tab.partner[i];
            ComplexL off = 0.0L;
            for (std::size_t k = 0; k < s.D[i].size(); ++k)
                off += ComplexL(std::conj(s.D[i][k])) * ComplexL(s.O[p][k]) +
                       ComplexL(std::conj(s.O[i][k])) * ComplexL(s.D[p][k]);
            sum(i, p) = static_cast<Complex>(off);
        }
    }
    Mat12 dev = sum - Mat12::Identity();
    Eigen::SelfAdjointEigenSolver<Mat12> es(0.5 * (dev + dev.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Superoperator superop_from_sequences(const KrausSequences& s) {
    Superoperator m;
    m.mat = SuperMatrix::Zero(kSuperDim, kSuperDim);
    const std::size_t n_k = s.D[0].size();
    for (int c1 = 0; c1 < kSystemDim; ++c1) {
        for (int c2 = 0; c2 < kSystemDim; ++c2) {
            const int col = c1 * kSystemDim + c2;
            const int p1 = s.tab.partner[c1];
            const int p2 = s.tab.partner[c2];
            ComplexL dd = 0.0L, od = 0.0L, doo = 0.0L, oo = 0.0L;
            for (std::size_t k = 0; k < n_k; ++k) {
                const ComplexL d1 = s.D[c1][k];
                const ComplexL d2c = std::conj(s.D[c2][k]);
                dd += d1 * d2c;
                if (p1 >= 0)
                    od += ComplexL(s.O[c1][k]) * d2c;
                if (p2 >= 0)
                    doo += d1 * ComplexL(std::conj(s.O[c2][k]));
                if (p1 >= 0 && p2 >= 0)
                    oo += ComplexL(s.O[c1][k]) * ComplexL(std::conj(s.O[c2][k]));
            }
            m.mat(c1 * kSystemDim + c2, col) = static_cast<Complex>(dd);
            if (p1 >= 0)
                m.mat(p1 * kSystemDim + c2, col) = static_cast<Complex>(od);
            if (p2 >= 0)
                m.mat(c1 * kSystemDim + p2, col) = static_cast<Complex>(doo);
            if (p1 >= 0 && p2 >= 0)
                m.mat(p1 * kSystemDim + p2, col) = static_cast<Complex>(oo);
        }
    }
    return m;
}

// Streaming sparse application sum_k E_k rho E_k^dag using the two-nonzeros-
// per-row structure of each E_k.
Mat12 apply_sequences(const KrausSequences& s, const Mat12& rho) {
    Eigen::Matrix<ComplexL, kSystemDim, kSystemDim> acc;
    acc.setZero();
    const std::size_t n_k = s.D[0].size();
    Mat12 t;
    for (std::size_t k = 0; k < n_k; ++k) {
        // t = E_k rho : row r of E_k holds D[r] at column r and O[p(r)] at
        // column p(r).
        for (int r = 0; r < kSystemDim; ++r) {
            const int p = s.tab.partner[r];
            for (int c = 0; c < kSystemDim; ++c) {
                Complex v = s.D[r][k] * rho(r, c);
                if (p >= 0)
                    v += s.O[p][k] * rho(p, c);
                t(r, c) = v;
            }
        }
        for (int r = 0; r < kSystemDim; ++r) {
            for (int c = 0; c < kSystemDim; ++c) {
                Complex v = t(r, c) * std::conj(s.D[c][k]);
                const int p = s.tab.partner[c];
                if (p >= 0)
                    v += t(r, p) * std::conj(s.O[p][k]);
                acc(r, c) += ComplexL(v);
            }
        }
    }
    return acc.cast<Complex>();
}

void check_density_matrix(const Mat12& rho) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw std::invalid_argument("apply_n: rho0 is not Hermitian (defect " +
                                    std::to_string(herm) + ")");
    const double tr = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr > 1e-12)
        throw std::invalid_argument("apply_n: rho0 does not have unit trace (defect " +
                                    std::to_string(tr) + ")");
    Eigen::SelfAdjointEigenSolver<Mat12> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-12)
        throw std::invalid_argument("apply_n: rho0 is not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
}

} // namespace

SuperVector vec_density(const Mat12& rho) {
    SuperVector v(kSuperDim);
    for (int i = 0; i < kSystemDim; ++i)
        for (int j = 0; j < kSystemDim; ++j)
            v(i * kSystemDim + j) = rho(i, j);
    return v;
}

Mat12 unvec_density(const SuperVector& v) {
    Mat12 rho;
    for (int i = 0; i < kSystemDim; ++i)
        for (int j = 0; j < kSystemDim; ++j)
            rho(i, j) = v(i * kSystemDim + j);
    return rho;
}

KrausFamily kraus_from_pulse(const Pulse& pulse) {
    const KrausSequences s = build_sequences(pulse);
    KrausFamily fam;
    fam.k_lo = s.k_lo;
    fam.completeness_defect = completeness_defect_of(s);
    const double threshold = 10.0 * pulse.field.tail_eps() + 1e-15;
    if (fam.completeness_defect > threshold)
        throw certification_error("kraus_from_pulse: completeness defect " +
                                  std::to_string(fam.completeness_defect) +
                                  " exceeds threshold " + std::to_string(threshold) +
                                  "; enlarge the field window");
    fam.operators.reserve(static_cast<std::size_t>(s.count()));
    for (long long k = s.k_lo; k <= s.k_hi; ++k) {
        const auto idx = static_cast<std::size_t>(k - s.k_lo);
        Mat12 e = Mat12::Zero();
        for (int i = 0; i < kSystemDim; ++i) {
            e(i, i) = s.D[i][idx];
            if (s.tab.role[i] != 0)
                e(s.tab.partner[i], i) = s.O[i][idx];
        }
        fam.operators.push_back(e);
    }
    return fam;
}

Mat12 apply_kraus(const KrausFamily& family, const Mat12& rho) {
    Eigen::Matrix<ComplexL, kSystemDim, kSystemDim> acc;
    acc.setZero();
    for (const Mat12& e : family.operators) {
        const Mat12 term = e * rho * e.adjoint();
        acc += term.cast<ComplexL>();
    }
    return acc.cast<Complex>();
}

Superoperator superop_from_kraus(const KrausFamily& family) {
    std::vector<ComplexL> acc(static_cast<std::size_t>(kSuperDim) * kSuperDim, ComplexL(0.0L));
    struct Entry {
        int r, c;
        Complex v;
    };
    std::vector<Entry> nz;
    for (const Mat12& e : family.operators) {
        nz.clear();
        for (int c = 0; c < kSystemDim; ++c)
            for (int r = 0; r < kSystemDim; ++r)
                if (e(r, c) != Complex(0.0, 0.0))
                    nz.push_back({r, c, e(r, c)});
        for (const Entry& a : nz)
            for (const Entry& b : nz) {
                const int row = a.r * kSystemDim + b.r;
                const int col = a.c * kSystemDim + b.c;
                acc[static_cast<std::size_t>(row) * kSuperDim + col] +=
                    ComplexL(a.v) * ComplexL(std::conj(b.v));
            }
    }
    Superoperator m;
    m.mat = SuperMatrix(kSuperDim, kSuperDim);
    for (int r = 0; r < kSuperDim; ++r)
        for (int c = 0; c < kSuperDim; ++c)
            m.mat(r, c) = static_cast<Complex>(acc[static_cast<std::size_t>(r) * kSuperDim + c]);
    return m;
}

Superoperator superop_from_pulse(const Pulse& pulse) {
    const KrausSequences s = build_sequences(pulse);
    const double defect = completeness_defect_of(s);
    const double threshold = 10.0 * pulse.field.tail_eps() + 1e-15;
    if (defect > threshold)
        throw certification_error("superop_from_pulse: completeness defect " +
                                  std::to_string(defect) + " exceeds threshold " +
                                  std::to_string(threshold));
    return superop_from_sequences(s);
}

Superoperator conjugation_superop(const Mat12& u) {
    Superoperator m;
    m.mat = SuperMatrix(kSuperDim, kSuperDim);
    for (int r1 = 0; r1 < kSystemDim; ++r1)
        for (int r2 = 0; r2 < kSystemDim; ++r2)
            for (int c1 = 0; c1 < kSystemDim; ++c1)
                for (int c2 = 0; c2 < kSystemDim; ++c2)
                    m.mat(r1 * kSystemDim + r2, c1 * kSystemDim + c2) =
                        u(r1, c1) * std::conj(u(r2, c2));
    return m;
}

Superoperator gate_superop(const Protocol& protocol, const std::array<bool, 5>& quantized_mask) {
    Superoperator m;
    m.mat = SuperMatrix::Identity(kSuperDim, kSuperDim);
    for (int step = 0; step < 5; ++step) {
        const Superoperator ms = quantized_mask[static_cast<std::size_t>(step)]
                                     ? superop_from_pulse(protocol.steps[static_cast<std::size_t>(step)])
                                     : conjugation_superop(ideal_pulse(protocol.steps[static_cast<std::size_t>(step)]));
        m.mat = ms.mat * m.mat;
    }
    return m;
}

Superoperator superop_by_coefficient_matching(const Protocol& protocol,
                                              const std::array<bool, 5>& quantized_mask) {
    std::array<KrausSequences, 5> seqs;
    std::array<Mat12, 5> ideals;
    for (int step = 0; step < 5; ++step) {
        if (quantized_mask[static_cast<std::size_t>(step)])
            seqs[static_cast<std::size_t>(step)] =
                build_sequences(protocol.steps[static_cast<std::size_t>(step)]);
        else
            ideals[static_cast<std::size_t>(step)] =
                ideal_pulse(protocol.steps[static_cast<std::size_t>(step)]);
    }
    auto propagate = [&](Mat12 rho) {
        for (int step = 0; step < 5; ++step) {
            if (quantized_mask[static_cast<std::size_t>(step)])
                rho = apply_sequences(seqs[static_cast<std::size_t>(step)], rho);
            else
                rho = ideals[static_cast<std::size_t>(step)] * rho *
                      ideals[static_cast<std::size_t>(step)].adjoint();
        }
        return rho;
    };

    Superoperator m;
    m.mat = SuperMatrix(kSuperDim, kSuperDim);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (int i = 0; i < kSystemDim; ++i) {
        Mat12 unit = Mat12::Zero();
        unit(i, i) = 1.0;
        m.mat.col(i * kSystemDim + i) = vec_density(propagate(unit));
        for (int j = i + 1; j < kSystemDim; ++j) {
            // |i><j| from four pure polarization states:
            //   1/2 P(+1) - 1/2 P(-1) + i/2 P(+i) - i/2 P(-i)
            Mat12 out = Mat12::Zero();
            const std::array<std::pair<Complex, Complex>, 4> combos{{
                {Complex(1, 0), Complex(0.5, 0)},
                {Complex(-1, 0), Complex(-0.5, 0)},
                {Complex(0, 1), Complex(0, 0.5)},
                {Complex(0, -1), Complex(0, -0.5)},
            }};
            for (const auto& [a, wgt] : combos) {
                Vec12 psi = Vec12::Zero();
                psi(i) = inv_sqrt2;
                psi(j) = a * inv_sqrt2;
                out += wgt * propagate(psi * psi.adjoint());
            }
            m.mat.col(i * kSystemDim + j) = vec_density(out);
            m.mat.col(j * kSystemDim + i) = vec_density(out.adjoint());
        }
    }
    return m;
}

double trace_preservation_defect(const Superoperator& m) {
    double worst = 0.0;
    for (int col = 0; col < kSuperDim; ++col) {
        Complex s = 0.0;
        for (int i = 0; i < kSystemDim; ++i)
            s += m.mat(i * kSystemDim + i, col);
        const double target = (col % (kSystemDim + 1) == 0) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(s - Complex(target, 0.0)));
    }
    return worst;
}

SuperMatrix choi_matrix(const Superoperator& m) {
    SuperMatrix c(kSuperDim, kSuperDim);
    // C[(i,k),(j,l)] = E(|i><j|)(k,l) = M[(k,l),(i,j)]
    for (int i = 0; i < kSystemDim; ++i)
        for (int k = 0; k < kSystemDim; ++k)
            for (int j = 0; j < kSystemDim; ++j)
                for (int l = 0; l < kSystemDim; ++l)
                    c(i * kSystemDim + k, j * kSystemDim + l) =
                        m.mat(k * kSystemDim + l, i * kSystemDim + j);
    return c;
}

double choi_min_eigenvalue(const Superoperator& m) {
    SuperMatrix c = choi_matrix(m);
    c = 0.5 * (c + c.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<SuperMatrix> es(c, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ApplyResult apply_n(const Superoperator& m, const Mat12& rho0, long long t) {
    if (t < 0)
        throw std::invalid_argument("apply_n: t must be >= 0");
    check_density_matrix(rho0);
    SuperVector v = vec_density(rho0);
    for (long long i = 0; i < t; ++i)
        v = m.mat * v;
    Mat12 rho = unvec_density(v);
    ApplyResult out;
    out.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    out.rho = 0.5 * (rho + rho.adjoint());
    out.trace_defect = std::abs(out.rho.trace() - Complex(1.0, 0.0));
    return out;
}

ChannelDiagnostics diagnose_gate(const Protocol& protocol,
                                 const std::array<bool, 5>& quantized_mask,
                                 Superoperator* gate_out) {
    ChannelDiagnostics d;
    d.nbar = protocol.steps[0].field.nbar();
    d.quantized_mask = quantized_mask;
    Superoperator m;
    m.mat = SuperMatrix::Identity(kSuperDim, kSuperDim);
    for (int step = 0; step < 5; ++step) {
        const Pulse& pulse = protocol.steps[static_cast<std::size_t>(step)];
        StepDiagnostics& sd = d.steps[static_cast<std::size_t>(step)];
        sd.quantized = quantized_mask[static_cast<std::size_t>(step)];
        sd.window_lo = pulse.field.window().lo;
        sd.window_hi = pulse.field.window().hi;
        sd.tail_eps = pulse.field.tail_eps();
        Superoperator ms;
        if (sd.quantized) {
            const KrausSequences s = build_sequences(pulse);
            sd.completeness_defect = completeness_defect_of(s);
            ms = superop_from_sequences(s);
        } else {
            ms = conjugation_superop(ideal_pulse(pulse));
        }
        m.mat = ms.mat * m.mat;
    }
    d.trace_defect = trace_preservation_defect(m);
    SuperMatrix c = choi_matrix(m);
    d.choi_trace = c.trace().real();
    c = 0.5 * (c + c.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<SuperMatrix> es(c, Eigen::EigenvaluesOnly);
    d.choi_min_eigenvalue = es.eigenvalues().minCoeff();
    if (gate_out)
        *gate_out = std::move(m);
    return d;
}

} // namespace czsim
