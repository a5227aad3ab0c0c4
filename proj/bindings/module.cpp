#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <stdexcept>
#include <variant>

#include "czsim/oracle.hpp"

namespace py = pybind11;
using namespace czsim;

namespace {

std::array<bool, 5> mask_from_str(const std::string& spec) {
    if (spec == "full")
        return {true, true, true, true, true};
    if (spec == "ideal")
        return {false, false, false, false, false};
    if (spec == "sideband-limited")
        return {false, true, true, true, false};
    if (spec.size() != 5 || spec.find_first_not_of("01") != std::string::npos)
        throw std::invalid_argument("mask must be five 0/1 characters or one of: full, ideal, "
                                    "sideband-limited");
    std::array<bool, 5> m{};
    for (int i = 0; i < 5; ++i)
        m[static_cast<std::size_t>(i)] = spec[static_cast<std::size_t>(i)] == '1';
    return m;
}

InitialQubitState state_from_object(const py::object& obj) {
    if (py::isinstance<py::str>(obj))
        return InitialQubitState::preset(obj.cast<std::string>());
    const auto amps = obj.cast<std::vector<Complex>>();
    if (amps.size() != 4)
        throw std::invalid_argument("initial state needs a preset name or 4 amplitudes");
    InitialQubitState s;
    std::copy(amps.begin(), amps.end(), s.amps.begin());
    if (std::abs(s.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("initial amplitudes are not normalized");
    s.normalize();
    return s;
}

/// One-gate channel at fixed nbar/mask, wrapping the superoperator.
class Gate {
public:
    Gate(double nbar, const std::string& mask = "11111", double tail_eps = 1e-14)
        : nbar_(nbar), mask_(mask_from_str(mask)),
          protocol_(Protocol::cz_cnot(nbar, tail_eps)) {
        diagnostics_ = diagnose_gate(protocol_, mask_, &super_);
    }

    double nbar() const { return nbar_; }
    SuperMatrix matrix() const { return super_.mat; }

    double failure_probability(const py::object& initial, long long t) const {
        return czsim::failure_probability(super_, state_from_object(initial), t);
    }

    std::vector<double> failure_probabilities(const py::object& initial,
                                              const std::vector<long long>& ts) const {
        const auto rs = failure_probability_series(super_, state_from_object(initial), ts);
        std::vector<double> out;
        out.reserve(rs.size());
        for (const FailureResult& r : rs)
            out.push_back(r.p_fail);
        return out;
    }

    Mat12 apply(const Eigen::MatrixXcd& rho, long long t) const {
        if (rho.rows() != kSystemDim || rho.cols() != kSystemDim)
            throw std::invalid_argument("rho must be 12x12");
        return apply_n(super_, Mat12(rho), t).rho;
    }

    py::dict diagnostics() const {
        py::dict d;
        d["nbar"] = nbar_;
        d["trace_preservation_defect"] = diagnostics_.trace_defect;
        d["choi_min_eigenvalue"] = diagnostics_.choi_min_eigenvalue;
        d["choi_trace"] = diagnostics_.choi_trace;
        py::list steps;
        for (const StepDiagnostics& s : diagnostics_.steps) {
            py::dict sd;
            sd["quantized"] = s.quantized;
            sd["completeness_defect"] = s.completeness_defect;
            sd["window"] = py::make_tuple(s.window_lo, s.window_hi);
            sd["tail_eps"] = s.tail_eps;
            steps.append(std::move(sd));
        }
        d["steps"] = std::move(steps);
        return d;
    }

    const Protocol& protocol() const { return protocol_; }

private:
    double nbar_;
    std::array<bool, 5> mask_;
    Protocol protocol_;
    Superoperator super_;
    ChannelDiagnostics diagnostics_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantized-field trapped-ion CNOT gate simulator (C++ core)";

    py::register_exception<certification_error>(m, "CertificationError", PyExc_RuntimeError);

    m.def("poisson_weight", &poisson_weight, py::arg("nbar"), py::arg("n"),
          "e^{-nbar} nbar^n / n!, evaluated in log space");
    m.def(
        "choose_window",
        [](double nbar, double tail_eps) {
            const FockWindow w = choose_window(nbar, tail_eps);
            return py::make_tuple(w.lo, w.hi);
        },
        py::arg("nbar"), py::arg("tail_eps"),
        "Smallest certified Fock window (lo, hi) around the Poisson mode");
    m.def(
        "s_sums",
        [](double nbar, int k, double abs_err) {
            const auto a = s_sums(nbar, k, abs_err);
            return std::vector<double>(a.begin(), a.end());
        },
        py::arg("nbar"), py::arg("k") = 2, py::arg("abs_err") = 1e-13,
        "The sums S1..S10, each certified to abs_err");
    m.def(
        "s_sums_extended",
        [](double nbar, int k, int digits) {
            const auto a = s_sums_extended(nbar, k, digits);
            return std::vector<std::string>(a.begin(), a.end());
        },
        py::arg("nbar"), py::arg("k") = 2, py::arg("digits") = 30,
        "S1..S10 as correctly rounded decimal strings");

    m.def("preset_names", [] {
        const auto& n = InitialQubitState::preset_names();
        return std::vector<std::string>(n.begin(), n.end());
    });
    m.def(
        "ideal_gate_unitary",
        [](double nbar) { return Mat12(ideal_protocol_unitary(Protocol::cz_cnot(nbar))); },
        py::arg("nbar") = 1e4,
        "Product of the five ideal pulses (the exact controlled flip)");
    m.def(
        "expected_state",
        [](const py::object& initial, long long t) {
            return Vec6(expected_state(state_from_object(initial), t));
        },
        py::arg("initial"), py::arg("t"));
    m.def(
        "trace_out_phonon",
        [](const Eigen::MatrixXcd& rho) {
            if (rho.rows() != kSystemDim || rho.cols() != kSystemDim)
                throw std::invalid_argument("rho must be 12x12");
            return Mat6(trace_out_phonon(Mat12(rho)));
        },
        py::arg("rho"), "Partial trace over the phonon of a 12x12 density matrix");
    m.def(
        "oracle_gate_output",
        [](double nbar, const py::object& initial, double tail_eps) {
            return Mat12(oracle_gate_output(Protocol::cz_cnot(nbar, tail_eps),
                                            state_from_object(initial)));
        },
        py::arg("nbar"), py::arg("initial"), py::arg("tail_eps") = 1e-14,
        "One-gate reduced density matrix from the exact joint-state oracle");

    py::class_<Gate>(m, "Gate",
                     "One-gate quantum channel at fixed mean photon number and "
                     "per-step quantization mask")
        .def(py::init<double, const std::string&, double>(), py::arg("nbar"),
             py::arg("mask") = "11111", py::arg("tail_eps") = 1e-14)
        .def_property_readonly("nbar", &Gate::nbar)
        .def("matrix", &Gate::matrix, "144x144 superoperator on row-major straightened rho")
        .def("failure_probability", &Gate::failure_probability, py::arg("initial"),
             py::arg("t"))
        .def("failure_probabilities", &Gate::failure_probabilities, py::arg("initial"),
             py::arg("ts"))
        .def("apply", &Gate::apply, py::arg("rho"), py::arg("t") = 1,
             "rho after t gate applications (Hermitized, not renormalized)")
        .def("diagnostics", &Gate::diagnostics);

    m.attr("__version__") = "0.1.0";
}
