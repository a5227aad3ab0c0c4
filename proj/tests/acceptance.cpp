// Acceptance suite: runs every top-level acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
//
// Note on C5: the floor check covers all six preset initial states. Initial
// states without control-ion excitation (00, 01, plus-y) are exactly
// preserved by the sideband-limited channel (they only ever occupy spectator
// states of the quantized steps), so the 1e-4 floor is unattainable for them;
// those sub-checks report FAIL by design and the measured values are printed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "czsim/oracle.hpp"
#include "test_reference_values.hpp"

using namespace czsim;
using czsim_test::kSumRefs;
using czsim_test::kSumRefs30;
using czsim_test::matching_fraction_digits;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::array<double, 10> s = s_sums(1e4, 2);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
        worst = std::max(worst, std::abs(s[static_cast<std::size_t>(i)] -
                                         kSumRefs[static_cast<std::size_t>(i)]));
    const std::array<std::string, 10> ext = s_sums_extended(1e4, 2, 30);
    int min_digits = 30;
    for (int i = 0; i < 10; ++i)
        min_digits = std::min(min_digits,
                              matching_fraction_digits(ext[static_cast<std::size_t>(i)],
                                                       kSumRefs30[static_cast<std::size_t>(i)], 30));
    const double dt = seconds_since(t0);
    report(worst <= 1e-12 && min_digits >= 28 && dt < 5.0, "C1 sums regression",
           "max |S_i - ref| = " + sci(worst) + ", extended digits >= " +
               std::to_string(min_digits) + "/30, " + sci(dt) + " s");
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const Protocol proto = Protocol::cz_cnot(4.0, 1e-14);
    const Superoperator m = gate_superop(proto, {true, true, true, true, true});
    double worst = 0.0;
    std::string worst_name;
    for (const std::string& name : InitialQubitState::preset_names()) {
        const InitialQubitState init = InitialQubitState::preset(name);
        const Mat12 via_oracle = oracle_gate_output(proto, init);
        const Mat12 via_channel = unvec_density(m.mat * vec_density(init.density()));
        const double d = (via_oracle - via_channel).cwiseAbs().maxCoeff();
        if (d > worst) {
            worst = d;
            worst_name = name;
        }
    }
    const double dt = seconds_since(t0);
    report(worst <= 1e-10 && dt < 120.0, "C2 oracle equivalence (nbar = 4)",
           "max elementwise diff = " + sci(worst) + " (worst preset " + worst_name + "), " +
               sci(dt) + " s");
}

void criterion_3() {
    bool ok = true;
    std::string detail;
    for (double nbar : {1e2, 1e4}) {
        const Protocol proto = Protocol::cz_cnot(nbar, 1e-14);
        const std::array<bool, 5> all{true, true, true, true, true};
        const double diff = (gate_superop(proto, all).mat -
                             superop_by_coefficient_matching(proto, all).mat)
                                .cwiseAbs()
                                .maxCoeff();
        ok = ok && diff <= 1e-12;
        detail += "nbar=" + sci(nbar) + ": " + sci(diff) + "  ";
    }
    report(ok, "C3 construction equivalence", detail + "(tolerance 1e-12)");
}

void criterion_4() {
    const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
    const ChannelDiagnostics d = diagnose_gate(proto, {true, true, true, true, true}, nullptr);
    double worst_completeness = 0.0;
    for (const StepDiagnostics& s : d.steps)
        worst_completeness = std::max(worst_completeness, s.completeness_defect);
    const bool ok = d.trace_defect <= 1e-10 && d.choi_min_eigenvalue >= -1e-10 &&
                    worst_completeness <= 10.0 * 1e-14;
    report(ok, "C4 channel sanity (nbar = 1e4)",
           "trace defect = " + sci(d.trace_defect) +
               ", Choi min eig = " + sci(d.choi_min_eigenvalue) +
               ", worst completeness defect = " + sci(worst_completeness));
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
    const Superoperator m = gate_superop(proto, {false, true, true, true, false});

    for (const std::string& name : {"10", "11"}) {
        const double pf = failure_probability(m, InitialQubitState::preset(name), 100);
        report(pf >= 3e-3 && pf <= 3e-2, "C5 sideband-limited p_f, initial " + name,
               "p_f(t=100) = " + sci(pf) + ", window [3e-3, 3e-2]");
    }
    for (const std::string& name : {"00", "01", "plus-x", "plus-y"}) {
        const double pf = failure_probability(m, InitialQubitState::preset(name), 100);
        report(pf >= 1e-4, "C5 sideband-limited p_f floor, initial " + name,
               "p_f(t=100) = " + sci(pf) + ", floor 1e-4");
    }
    const double dt = seconds_since(t0);
    report(dt < 300.0, "C5 runtime", sci(dt) + " s (budget 300 s including gate build)");
}

void criterion_6() {
    const std::array<bool, 5> all{true, true, true, true, true};
    const Protocol p6 = Protocol::cz_cnot(1e6, 1e-14);
    const Protocol p8 = Protocol::cz_cnot(1e8, 1e-14);
    const Superoperator m6 = gate_superop(p6, all);
    const Superoperator m8 = gate_superop(p8, all);
    std::vector<long long> grid;
    for (long long t = 10; t <= 100; t += 10)
        grid.push_back(t);
    const auto rep = proportionality_report({{1e6, &m6}, {1e8, &m8}},
                                            InitialQubitState::preset("10"), grid);
    const double resid = rep.fit_vs_t[0].rel_residual;
    const double ratio = rep.consecutive_ratios[0];
    report(resid <= 0.05, "C6 linearity in t (nbar = 1e6)",
           "through-origin fit relative residual = " + sci(resid) + " (tolerance 5e-2)");
    report(ratio >= 80.0 && ratio <= 120.0, "C6 inverse proportionality in nbar",
           "p_f(1e6,100) / p_f(1e8,100) = " + sci(ratio) + ", window [80, 120]");
}

void criterion_7() {
    const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
    const Superoperator m = gate_superop(proto, {false, false, false, false, false});
    double worst_pf = 0.0;
    double worst_restore = 0.0;
    for (const std::string& name : InitialQubitState::preset_names()) {
        const InitialQubitState init = InitialQubitState::preset(name);
        for (long long t : {1LL, 2LL, 3LL})
            worst_pf = std::max(worst_pf, std::abs(failure_probability(m, init, t)));
        const ApplyResult twice = apply_n(m, init.density(), 2);
        worst_restore =
            std::max(worst_restore, (twice.rho - init.density()).cwiseAbs().maxCoeff());
    }
    report(worst_pf <= 1e-12 && worst_restore <= 1e-12, "C7 ideal-limit truth table",
           "max p_f = " + sci(worst_pf) + ", max double-application deviation = " +
               sci(worst_restore));
}

void criterion_8() {
    const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
    const Superoperator m = gate_superop(proto, {true, true, true, true, true});
    const double p10 = failure_probability(m, InitialQubitState::preset("10"), 50);
    const double p00 = failure_probability(m, InitialQubitState::preset("00"), 50);
    const double p11 = failure_probability(m, InitialQubitState::preset("11"), 50);
    const double p01 = failure_probability(m, InitialQubitState::preset("01"), 50);
    report(p10 >= p00 && p11 >= p01, "C8 initial-state ordering (nbar = 1e4, t = 50)",
           "p_f(10) = " + sci(p10) + " >= p_f(00) = " + sci(p00) + "; p_f(11) = " + sci(p11) +
               " >= p_f(01) = " + sci(p01));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("%d check(s) failed; total %.1f s\n", g_failures, seconds_since(t0));
    return g_failures;
}
