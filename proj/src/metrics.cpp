#include "czsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace czsim {

double InitialQubitState::norm() const {
    double s = 0.0;
    for (const Complex& a : amps)
        s += std::norm(a);
    return std::sqrt(s);
}

void InitialQubitState::normalize() {
    const double n = norm();
    if (n == 0.0)
        throw std::invalid_argument("InitialQubitState: zero state cannot be normalized");
    for (Complex& a : amps)
        a /= n;
}

Vec12 InitialQubitState::embed() const {
    Vec12 psi = Vec12::Zero();
    for (int i = 0; i < 4; ++i)
        psi(i) = amps[static_cast<std::size_t>(i)];
    return psi;
}

Mat12 InitialQubitState::density() const {
    const Vec12 psi = embed();
    return psi * psi.adjoint();
}

const std::array<std::string, 6>& InitialQubitState::preset_names() {
    static const std::array<std::string, 6> names{"00", "10", "01", "11", "plus-x", "plus-y"};
    return names;
}

InitialQubitState InitialQubitState::preset(const std::string& name) {
    const double r = 1.0 / std::sqrt(2.0);
    if (name == "00")
        return {{Complex(1), Complex(0), Complex(0), Complex(0)}};
    if (name == "10")
        return {{Complex(0), Complex(1), Complex(0), Complex(0)}};
    if (name == "01")
        return {{Complex(0), Complex(0), Complex(1), Complex(0)}};
    if (name == "11")
        return {{Complex(0), Complex(0), Complex(0), Complex(1)}};
    if (name == "plus-x")
        return {{Complex(r), Complex(r), Complex(0), Complex(0)}};
    if (name == "plus-y")
        return {{Complex(r), Complex(0), Complex(r), Complex(0)}};
    std::string valid;
    for (const std::string& n : preset_names())
        valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown initial-state preset '" + name + "' (valid: " + valid + ")");
}

Mat6 trace_out_phonon(const Mat12& rho) {
    return rho.topLeftCorner<6, 6>() + rho.bottomRightCorner<6, 6>();
}

Vec6 expected_state(const InitialQubitState& initial, long long t) {
    if (t < 0)
        throw std::invalid_argument("expected_state: t must be >= 0");
    Vec6 e = Vec6::Zero();
    const auto& a = initial.amps;
    if (t % 2 == 0) {
        e(0) = a[0];
        e(1) = a[1];
        e(2) = a[2];
        e(3) = a[3];
    } else {
        e(0) = a[0];
        e(1) = a[3];
        e(2) = a[2];
        e(3) = a[1];
    }
    return e;
}

namespace {

FailureResult failure_from_vec(const SuperVector& v, const InitialQubitState& initial,
                               long long t) {
    Mat12 rho = unvec_density(v);
    FailureResult out;
    out.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    const Mat6 ions = trace_out_phonon(rho);
    const Vec6 e = expected_state(initial, t);
    const double p_success = (e.adjoint() * ions * e)(0, 0).real();
    out.p_fail = 1.0 - p_success;
    return out;
}

} // namespace

FailureResult failure_probability_result(const Superoperator& gate,
                                         const InitialQubitState& initial, long long t) {
    if (t < 0)
        throw std::invalid_argument("failure_probability: t must be >= 0");
    if (std::fabs(initial.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("failure_probability: initial state is not normalized");
    SuperVector v = vec_density(initial.density());
    for (long long i = 0; i < t; ++i)
        v = gate.mat * v;
    return failure_from_vec(v, initial, t);
}

double failure_probability(const Superoperator& gate, const InitialQubitState& initial,
                           long long t) {
    return failure_probability_result(gate, initial, t).p_fail;
}

std::vector<FailureResult> failure_probability_series(const Superoperator& gate,
                                                      const InitialQubitState& initial,
                                                      const std::vector<long long>& ts) {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (ts[i] <= ts[i - 1])
            throw std::invalid_argument("failure_probability_series: ts must be ascending");
    if (!ts.empty() && ts.front() < 0)
        throw std::invalid_argument("failure_probability_series: t must be >= 0");
    std::vector<FailureResult> out;
    out.reserve(ts.size());
    SuperVector v = vec_density(initial.density());
    long long t_now = 0;
    for (const long long t : ts) {
        for (; t_now < t; ++t_now)
            v = gate.mat * v;
        out.push_back(failure_from_vec(v, initial, t));
    }
    return out;
}

LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("fit_through_origin: need matching nonempty samples");
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_through_origin: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - f.slope * x[i];
        r2 += d * d;
    }
    f.rel_residual = (syy > 0.0) ? std::sqrt(r2 / syy) : 0.0;
    return f;
}

ProportionalityReport proportionality_report(
    const std::vector<std::pair<double, const Superoperator*>>& gates,
    const InitialQubitState& initial, const std::vector<long long>& t_grid) {
    if (gates.empty())
        throw std::invalid_argument("proportionality_report: need at least one gate");
    if (t_grid.empty())
        throw std::invalid_argument("proportionality_report: t grid must be nonempty");

    ProportionalityReport rep;
    std::vector<double> td(t_grid.begin(), t_grid.end());
    for (const auto& [nbar, gate] : gates) {
        rep.nbars.push_back(nbar);
        const std::vector<FailureResult> series =
            failure_probability_series(*gate, initial, t_grid);
        std::vector<double> pf;
        pf.reserve(series.size());
        for (const FailureResult& r : series)
            pf.push_back(r.p_fail);
        rep.fit_vs_t.push_back(fit_through_origin(td, pf));
        rep.p_fail.push_back(std::move(pf));
    }
    std::vector<double> inv_nbar, pf_at_tmax;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        inv_nbar.push_back(1.0 / rep.nbars[g]);
        pf_at_tmax.push_back(rep.p_fail[g].back());
    }
    rep.fit_vs_inv_nbar = fit_through_origin(inv_nbar, pf_at_tmax);
    for (std::size_t g = 0; g + 1 < gates.size(); ++g)
        rep.consecutive_ratios.push_back(pf_at_tmax[g] / pf_at_tmax[g + 1]);
    return rep;
}

} // namespace czsim
