#include "czsim/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace czsim {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

FockWindow padded(const FockWindow& w) {
    return {std::max<long long>(0, w.lo - 1), w.hi + 1};
}

// Coherent amplitudes of the pulse's field laid out over the padded storage
// window (zero in the headroom indices).
Eigen::VectorXcd coherent_vector(const Pulse& pulse, const FockWindow& storage) {
    const FockWindow w = pulse.field.window();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(storage.size());
    const std::vector<double> amps = pulse.field.amplitudes();
    for (long long n = w.lo; n <= w.hi; ++n)
        v(n - storage.lo) = amps[static_cast<std::size_t>(n - w.lo)];
    return v;
}

} // namespace

double JointState::norm() const {
    long double s = 0.0L;
    for (const Complex& a : amps)
        s += std::norm(a);
    return static_cast<double>(std::sqrt(s));
}

JointState evolve_full(const Protocol& protocol, const InitialQubitState& initial,
                       std::size_t max_amplitudes) {
    return evolve_full(protocol, initial.embed(), max_amplitudes);
}

JointState evolve_full(const Protocol& protocol, const Vec12& initial,
                       std::size_t max_amplitudes) {
    JointState js;
    std::size_t field_dim = 1;
    for (int m = 0; m < 5; ++m) {
        js.storage[static_cast<std::size_t>(m)] =
            padded(protocol.steps[static_cast<std::size_t>(m)].field.window());
        field_dim *= static_cast<std::size_t>(js.storage[static_cast<std::size_t>(m)].size());
    }
    const std::size_t total = static_cast<std::size_t>(kSystemDim) * field_dim;
    if (total > max_amplitudes)
        throw std::invalid_argument("evolve_full: joint dimension " + std::to_string(total) +
                                    " amplitudes exceeds the cap of " +
                                    std::to_string(max_amplitudes) +
                                    "; shrink the windows or use evolve_branches");

    js.amps.assign(total, Complex(0.0, 0.0));

    // strides: layout [sys][m0][m1][m2][m3][m4], m4 fastest
    std::array<std::size_t, 5> w{};
    for (int m = 0; m < 5; ++m)
        w[static_cast<std::size_t>(m)] =
            static_cast<std::size_t>(js.storage[static_cast<std::size_t>(m)].size());
    std::array<std::size_t, 5> stride{};
    stride[4] = 1;
    for (int m = 3; m >= 0; --m)
        stride[static_cast<std::size_t>(m)] =
            stride[static_cast<std::size_t>(m + 1)] * w[static_cast<std::size_t>(m + 1)];
    const std::size_t sys_stride = stride[0] * w[0];

    // initial product state: qubit amplitudes x coherent modes. The first
    // populated system block is filled with the coherent product; the rest
    // are scaled copies of it, so no extra field-sized buffer is needed.
    {
        std::array<Eigen::VectorXcd, 5> coh;
        for (int m = 0; m < 5; ++m)
            coh[static_cast<std::size_t>(m)] =
                coherent_vector(protocol.steps[static_cast<std::size_t>(m)],
                                js.storage[static_cast<std::size_t>(m)]);
        int first = -1;
        for (int s = 0; s < kSystemDim && first < 0; ++s)
            if (initial(s) != Complex(0.0, 0.0))
                first = s;
        if (first < 0)
            throw std::invalid_argument("evolve_full: zero initial state");
        Complex* base = js.amps.data() + static_cast<std::size_t>(first) * sys_stride;
        const Complex a0 = initial(first);
        for (std::size_t idx = 0; idx < field_dim; ++idx) {
            std::size_t rem = idx;
            Complex v = a0;
            for (int m = 0; m < 5; ++m) {
                const std::size_t q = rem / stride[static_cast<std::size_t>(m)];
                rem %= stride[static_cast<std::size_t>(m)];
                v *= coh[static_cast<std::size_t>(m)](static_cast<Eigen::Index>(q));
            }
            base[idx] = v;
        }
        for (int s = first + 1; s < kSystemDim; ++s) {
            const Complex a = initial(s);
            if (a == Complex(0.0, 0.0))
                continue;
            const Complex scale = a / a0;
            Complex* dst = js.amps.data() + static_cast<std::size_t>(s) * sys_stride;
            for (std::size_t idx = 0; idx < field_dim; ++idx)
                dst[idx] = scale * base[idx];
        }
    }

    // apply the five pulses in order; step m acts on (system, mode m)
    for (int m = 0; m < 5; ++m) {
        const Pulse& pulse = protocol.steps[static_cast<std::size_t>(m)];
        const CouplingTable tab = coupling_table(pulse);
        const FockWindow st = js.storage[static_cast<std::size_t>(m)];
        const std::size_t wm = w[static_cast<std::size_t>(m)];
        const std::size_t sm = stride[static_cast<std::size_t>(m)];
        const std::size_t outer = field_dim / (wm * sm); // strides slower than mode m
        const Complex emit = kMinusI * std::exp(Complex(0.0, -pulse.phase));
        const Complex absorb = kMinusI * std::exp(Complex(0.0, pulse.phase));

        for (int e = 0; e < kSystemDim; ++e) {
            if (tab.role[e] <= 0)
                continue;
            const int g = tab.partner[e];
            Complex* base_e = js.amps.data() + static_cast<std::size_t>(e) * sys_stride;
            Complex* base_g = js.amps.data() + static_cast<std::size_t>(g) * sys_stride;
            // rotate the (e, n) <-> (g, n+1) blocks, disjoint in n
            for (long long n = st.lo; n < st.hi; ++n) {
                const double th = pulse.rabi_angle(n + 1);
                const double c = std::cos(th);
                const Complex se = emit * std::sin(th);
                const Complex sa = absorb * std::sin(th);
                const std::size_t off_e = static_cast<std::size_t>(n - st.lo) * sm;
                const std::size_t off_g = static_cast<std::size_t>(n + 1 - st.lo) * sm;
                for (std::size_t o = 0; o < outer; ++o) {
                    const std::size_t block = o * (wm * sm);
                    Complex* pe = base_e + block + off_e;
                    Complex* pg = base_g + block + off_g;
                    for (std::size_t r = 0; r < sm; ++r) {
                        const Complex ae = pe[r];
                        const Complex ag = pg[r];
                        pe[r] = c * ae + sa * ag;
                        pg[r] = se * ae + c * ag;
                    }
                }
            }
        }
    }
    return js;
}

Mat12 reduced_density(const JointState& joint) {
    const std::size_t field_dim = joint.amps.size() / kSystemDim;
    Mat12 rho;
    for (int i = 0; i < kSystemDim; ++i) {
        const Complex* a = joint.amps.data() + static_cast<std::size_t>(i) * field_dim;
        for (int j = i; j < kSystemDim; ++j) {
            const Complex* b = joint.amps.data() + static_cast<std::size_t>(j) * field_dim;
            std::complex<long double> s = 0.0L;
            for (std::size_t idx = 0; idx < field_dim; ++idx)
                s += std::complex<long double>(a[idx]) * std::conj(std::complex<long double>(b[idx]));
            rho(i, j) = static_cast<Complex>(s);
            if (j != i)
                rho(j, i) = std::conj(rho(i, j));
        }
    }
    return rho;
}

BranchState evolve_branches(const Protocol& protocol, const InitialQubitState& initial) {
    return evolve_branches(protocol, initial.embed());
}

BranchState evolve_branches(const Protocol& protocol, const Vec12& initial) {
    BranchState bs;
    std::array<Eigen::VectorXcd, 5> coh;
    for (int m = 0; m < 5; ++m) {
        bs.storage[static_cast<std::size_t>(m)] =
            padded(protocol.steps[static_cast<std::size_t>(m)].field.window());
        coh[static_cast<std::size_t>(m)] =
            coherent_vector(protocol.steps[static_cast<std::size_t>(m)],
                            bs.storage[static_cast<std::size_t>(m)]);
    }
    for (int s = 0; s < kSystemDim; ++s) {
        const Complex a = initial(s);
        if (a == Complex(0.0, 0.0))
            continue;
        BranchTerm term;
        term.coeff = a;
        term.modes = coh;
        bs.branches[static_cast<std::size_t>(s)].push_back(std::move(term));
    }

    for (int m = 0; m < 5; ++m) {
        const Pulse& pulse = protocol.steps[static_cast<std::size_t>(m)];
        const CouplingTable tab = coupling_table(pulse);
        const FockWindow st = bs.storage[static_cast<std::size_t>(m)];
        const auto wm = static_cast<Eigen::Index>(st.size());
        const Complex emit = kMinusI * std::exp(Complex(0.0, -pulse.phase));
        const Complex absorb = kMinusI * std::exp(Complex(0.0, pulse.phase));

        Eigen::VectorXd cos_n(wm), sin_n(wm), cos_n1(wm), sin_n1(wm);
        for (Eigen::Index idx = 0; idx < wm; ++idx) {
            const long long n = st.lo + idx;
            cos_n(idx) = std::cos(pulse.rabi_angle(n));
            sin_n(idx) = std::sin(pulse.rabi_angle(n));
            cos_n1(idx) = std::cos(pulse.rabi_angle(n + 1));
            sin_n1(idx) = std::sin(pulse.rabi_angle(n + 1));
        }

        std::array<std::vector<BranchTerm>, kSystemDim> next;
        for (int j = 0; j < kSystemDim; ++j) {
            for (BranchTerm& term : bs.branches[static_cast<std::size_t>(j)]) {
                if (tab.role[j] == 0) {
                    next[static_cast<std::size_t>(j)].push_back(std::move(term));
                    continue;
                }
                const Eigen::VectorXcd v = term.modes[static_cast<std::size_t>(m)];
                BranchTerm go; // the photon-exchange branch
                go.modes = term.modes;
                if (tab.role[j] > 0) {
                    // emitter: stay with cos theta_{n+1}; partner gets the
                    // n -> n+1 shifted sin theta_{n+1} component
                    term.modes[static_cast<std::size_t>(m)] = v.cwiseProduct(cos_n1.cast<Complex>());
                    Eigen::VectorXcd shifted = Eigen::VectorXcd::Zero(wm);
                    shifted.tail(wm - 1) = v.cwiseProduct(sin_n1.cast<Complex>()).head(wm - 1);
                    go.coeff = term.coeff * emit;
                    go.modes[static_cast<std::size_t>(m)] = std::move(shifted);
                } else {
                    // absorber: stay with cos theta_n; partner gets n -> n-1
                    term.modes[static_cast<std::size_t>(m)] = v.cwiseProduct(cos_n.cast<Complex>());
                    Eigen::VectorXcd shifted = Eigen::VectorXcd::Zero(wm);
                    shifted.head(wm - 1) = v.cwiseProduct(sin_n.cast<Complex>()).tail(wm - 1);
                    go.coeff = term.coeff * absorb;
                    go.modes[static_cast<std::size_t>(m)] = std::move(shifted);
                }
                const int p = tab.partner[j];
                next[static_cast<std::size_t>(p)].push_back(std::move(go));
                next[static_cast<std::size_t>(j)].push_back(std::move(term));
            }
        }
        bs.branches = std::move(next);
    }
    return bs;
}

Mat12 reduced_density(const BranchState& state) {
    Mat12 rho = Mat12::Zero();
    for (int i = 0; i < kSystemDim; ++i) {
        for (int j = i; j < kSystemDim; ++j) {
            Complex s{0.0, 0.0};
            for (const BranchTerm& a : state.branches[static_cast<std::size_t>(i)]) {
                for (const BranchTerm& b : state.branches[static_cast<std::size_t>(j)]) {
                    Complex p = a.coeff * std::conj(b.coeff);
                    for (int m = 0; m < 5 && p != Complex(0.0, 0.0); ++m)
                        p *= b.modes[static_cast<std::size_t>(m)]
                                 .dot(a.modes[static_cast<std::size_t>(m)]);
                    s += p;
                }
            }
            rho(i, j) = s;
            if (j != i)
                rho(j, i) = std::conj(s);
        }
    }
    return rho;
}

Mat12 oracle_gate_output(const Protocol& protocol, const InitialQubitState& initial) {
    return reduced_density(evolve_branches(protocol, initial));
}

} // namespace czsim
