// Command-line front end: reproduce the S-sum table, build and diagnose the
// gate channel, run failure-probability sweeps, and run verification suites.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "czsim/oracle.hpp"

using namespace czsim;
using nlohmann::json;

namespace {

constexpr int kExitInvalidInput = 1;
constexpr int kExitVerifyFailure = 2;
constexpr int kExitCertification = 3;

// 30-digit S-sum reference values at nbar = 1e4, k = 2, used by `verify`.
const std::array<double, 10> kSumRefs1e4{
    0.500009817401897928264355667147, 0.499997963670545683314749144417,
    0.499990182422436977119909877501, 0.499978328996648238077753901338,
    0.499990182598102071735644332853, 0.499978328996648238077753901338,
    0.499984817654121934189482133164, 0.499970548214032003626335555500,
    0.499958694533432311848321647856, 0.500029451785967996373664444500,
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

std::array<bool, 5> parse_mask(const std::string& spec) {
    if (spec == "full")
        return {true, true, true, true, true};
    if (spec == "ideal")
        return {false, false, false, false, false};
    if (spec == "sideband-limited")
        return {false, true, true, true, false};
    if (spec.size() != 5 || spec.find_first_not_of("01") != std::string::npos)
        throw std::invalid_argument("mask must be five 0/1 characters (e.g. 01110) or one of: "
                                    "full, ideal, sideband-limited");
    std::array<bool, 5> m{};
    for (int i = 0; i < 5; ++i)
        m[static_cast<std::size_t>(i)] = spec[static_cast<std::size_t>(i)] == '1';
    return m;
}

std::string mask_to_string(const std::array<bool, 5>& m) {
    std::string s(5, '0');
    for (int i = 0; i < 5; ++i)
        if (m[static_cast<std::size_t>(i)])
            s[static_cast<std::size_t>(i)] = '1';
    return s;
}

// Preset name or eight comma-separated reals re1,im1,...,re4,im4.
std::pair<InitialQubitState, std::string> parse_initial(const std::string& spec) {
    const auto& names = InitialQubitState::preset_names();
    if (std::find(names.begin(), names.end(), spec) != names.end())
        return {InitialQubitState::preset(spec), spec};
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            vals.push_back(std::stod(tok));
    if (vals.size() != 8) {
        std::string valid;
        for (const std::string& n : names)
            valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("initial state must be a preset (" + valid +
                                    ") or eight comma-separated reals re1,im1,...,re4,im4");
    }
    InitialQubitState s;
    for (int i = 0; i < 4; ++i)
        s.amps[static_cast<std::size_t>(i)] =
            Complex(vals[static_cast<std::size_t>(2 * i)], vals[static_cast<std::size_t>(2 * i + 1)]);
    if (std::abs(s.norm() - 1.0) > 1e-6)
        std::cerr << "warning: initial amplitudes normalized (norm was "
                  << fmt("%.9g", s.norm()) << ")\n";
    s.normalize();
    std::string label = spec;
    std::replace(label.begin(), label.end(), ',', ';');
    return {s, label};
}

// ---------------------------------------------------------------- sums ----

int cmd_sums(double nbar, int k, const std::string& precision, int digits, double abs_err,
             const std::string& format, const std::string& out) {
    std::string content;
    if (precision == "extended") {
        const std::array<std::string, 10> s = s_sums_extended(nbar, k, digits);
        if (format == "csv") {
            content = "sum,value\n";
            for (int i = 0; i < 10; ++i)
                content += "S" + std::to_string(i + 1) + "," + s[static_cast<std::size_t>(i)] + "\n";
        } else if (format == "json") {
            json j{{"nbar", nbar}, {"k", k}, {"precision", "extended"}, {"digits", digits}};
            for (int i = 0; i < 10; ++i)
                j["sums"]["S" + std::to_string(i + 1)] = s[static_cast<std::size_t>(i)];
            content = j.dump(2) + "\n";
        } else {
            content = "S sums at nbar = " + fmt("%.17g", nbar) + ", k = " + std::to_string(k) +
                      " (extended precision, " + std::to_string(digits) + " digits)\n";
            for (int i = 0; i < 10; ++i)
                content += "S" + std::to_string(i + 1) + (i + 1 < 10 ? "  = " : " = ") +
                           s[static_cast<std::size_t>(i)] + "\n";
        }
        write_output(out, content);
        return 0;
    }

    const CoherentField field = CoherentField::with_tail(nbar, abs_err / 2.0);
    std::array<SumResult, 10> s;
    for (int i = 1; i <= 10; ++i) {
        s[static_cast<std::size_t>(i - 1)] = evaluate_sum_certified(SumSpec::s(i, k), field);
        if (s[static_cast<std::size_t>(i - 1)].error_bound > abs_err)
            throw certification_error("sums: certified bound exceeds requested abs-err");
    }
    if (format == "csv") {
        content = "sum,value,error_bound\n";
        for (int i = 0; i < 10; ++i)
            content += "S" + std::to_string(i + 1) + "," +
                       fmt("%.17g", s[static_cast<std::size_t>(i)].value) + "," +
                       fmt("%.3e", s[static_cast<std::size_t>(i)].error_bound) + "\n";
    } else if (format == "json") {
        json j{{"nbar", nbar}, {"k", k}, {"precision", "double"}, {"abs_err", abs_err}};
        for (int i = 0; i < 10; ++i) {
            j["sums"]["S" + std::to_string(i + 1)] = {
                {"value", s[static_cast<std::size_t>(i)].value},
                {"error_bound", s[static_cast<std::size_t>(i)].error_bound}};
        }
        j["identities"] = {{"s1_plus_s5", s[0].value + s[4].value},
                           {"s8_plus_s10", s[7].value + s[9].value}};
        content = j.dump(2) + "\n";
    } else {
        content = "S sums at nbar = " + fmt("%.17g", nbar) + ", k = " + std::to_string(k) +
                  " (double precision, certified to " + fmt("%.1e", abs_err) + ")\n";
        for (int i = 0; i < 10; ++i)
            content += "S" + std::to_string(i + 1) + (i + 1 < 10 ? "  = " : " = ") +
                       fmt("%.15f", s[static_cast<std::size_t>(i)].value) + "  (+/- " +
                       fmt("%.1e", s[static_cast<std::size_t>(i)].error_bound) + ")\n";
        content += "S1 + S5  = " + fmt("%.15f", s[0].value + s[4].value) + "\n";
        content += "S8 + S10 = " + fmt("%.15f", s[7].value + s[9].value) + "\n";
    }
    write_output(out, content);
    return 0;
}

// ---------------------------------------------------------------- gate ----

int cmd_gate(const std::string& protocol, double nbar, const std::string& mask_spec,
             double tail_eps, const std::string& out) {
    const std::array<bool, 5> mask = parse_mask(mask_spec);
    const Protocol proto = protocol_preset(protocol, nbar, tail_eps);
    const ChannelDiagnostics d = diagnose_gate(proto, mask, nullptr);
    json j{
        {"protocol", protocol},
        {"nbar", nbar},
        {"tail_eps", tail_eps},
        {"mask", mask_to_string(mask)},
        {"trace_preservation_defect", d.trace_defect},
        {"choi_min_eigenvalue", d.choi_min_eigenvalue},
        {"choi_trace", d.choi_trace},
    };
    for (int i = 0; i < 5; ++i) {
        const StepDiagnostics& s = d.steps[static_cast<std::size_t>(i)];
        const Pulse& p = proto.steps[static_cast<std::size_t>(i)];
        json step{
            {"step", i + 1},
            {"mode", s.quantized ? "quantized" : "ideal"},
            {"transition", p.transition == Transition::carrier ? "carrier" : "red_sideband"},
            {"target_ion", p.target == Ion::x ? "x" : "y"},
            {"area_pi", p.area_pi},
            {"phase", p.phase},
            {"window_lo", s.window_lo},
            {"window_hi", s.window_hi},
            {"tail_eps", s.tail_eps},
        };
        if (s.quantized)
            step["completeness_defect"] = s.completeness_defect;
        j["steps"].push_back(std::move(step));
    }
    write_output(out, j.dump(2) + "\n");
    return 0;
}

// ----------------------------------------------------------- run/sweep ----

std::string csv_rows(const std::vector<RunResult>& rows) {
    std::string content = "nbar,t,initial,p_fail,trace_defect\n";
    for (const RunResult& r : rows) {
        content += fmt("%.17g", r.nbar);
        content += "," + std::to_string(r.t) + "," + r.initial;
        content += "," + fmt("%.12e", r.p_fail) + "," + fmt("%.12e", r.trace_defect) + "\n";
    }
    return content;
}

std::string json_rows(const std::vector<RunResult>& rows) {
    json j = json::array();
    for (const RunResult& r : rows)
        j.push_back({{"nbar", r.nbar},
                     {"t", r.t},
                     {"initial", r.initial},
                     {"p_fail", r.p_fail},
                     {"trace_defect", r.trace_defect}});
    return j.dump(2) + "\n";
}

std::vector<RunResult> sweep_rows(const std::string& protocol,
                                  const std::vector<double>& nbars,
                                  const std::vector<std::string>& initial_specs,
                                  const std::vector<long long>& ts,
                                  const std::array<bool, 5>& mask, double tail_eps) {
    std::vector<double> nb = nbars;
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());

    std::vector<std::pair<std::string, InitialQubitState>> inits;
    for (const std::string& spec : initial_specs) {
        auto [state, label] = parse_initial(spec);
        inits.emplace_back(label, state);
    }
    std::sort(inits.begin(), inits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    inits.erase(std::unique(inits.begin(), inits.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                inits.end());

    std::vector<long long> tt = ts;
    std::sort(tt.begin(), tt.end());
    tt.erase(std::unique(tt.begin(), tt.end()), tt.end());
    if (!tt.empty() && tt.front() < 0)
        throw std::invalid_argument("t must be >= 0");

    std::vector<RunResult> rows;
    for (const double nbar : nb) {
        const Protocol proto = protocol_preset(protocol, nbar, tail_eps);
        const Superoperator gate = gate_superop(proto, mask);
        for (const auto& [label, state] : inits) {
            const std::vector<FailureResult> series =
                failure_probability_series(gate, state, tt);
            for (std::size_t i = 0; i < tt.size(); ++i) {
                rows.push_back(RunResult{nbar, tt[i], label, series[i].p_fail,
                                         series[i].trace_defect});
                if (series[i].p_fail < -1e-8 || series[i].p_fail > 1.0 + 1e-8)
                    throw std::runtime_error("p_fail out of range at nbar=" + fmt("%.3e", nbar));
            }
        }
    }
    return rows;
}

// -------------------------------------------------------------- verify ----

struct VerifyState {
    int failures = 0;
    void check(bool ok, const std::string& name, const std::string& detail) {
        std::printf("[%s] %s: %s\n", ok ? "ok" : "FAIL", name.c_str(), detail.c_str());
        if (!ok)
            ++failures;
    }
};

int cmd_verify(const std::string& level) {
    VerifyState v;

    {
        const std::array<double, 10> s = s_sums(1e4, 2);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
            worst = std::max(worst, std::abs(s[static_cast<std::size_t>(i)] -
                                             kSumRefs1e4[static_cast<std::size_t>(i)]));
        v.check(worst <= 1e-12, "sum regression (nbar = 1e4)",
                "max deviation from 30-digit references " + fmt("%.3e", worst));
        v.check(std::abs(s[0] + s[4] - 1.0) <= 2e-13 && std::abs(s[7] + s[9] - 1.0) <= 2e-13,
                "sum identities", "S1+S5, S8+S10 within 2e-13 of 1");
    }
    {
        const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
        const Superoperator m = gate_superop(proto, parse_mask("ideal"));
        double worst = 0.0;
        double restore = 0.0;
        for (const std::string& name : InitialQubitState::preset_names()) {
            const InitialQubitState init = InitialQubitState::preset(name);
            for (long long t : {1LL, 2LL, 3LL})
                worst = std::max(worst, std::abs(failure_probability(m, init, t)));
            const ApplyResult twice = apply_n(m, init.density(), 2);
            restore = std::max(restore, (twice.rho - init.density()).cwiseAbs().maxCoeff());
        }
        v.check(worst <= 1e-12 && restore <= 1e-12, "ideal-limit truth table",
                "max p_f " + fmt("%.3e", worst) + ", involution defect " + fmt("%.3e", restore));
    }

    if (level == "full") {
        {
            const Protocol proto = Protocol::cz_cnot(4.0, 1e-14);
            const Superoperator m = gate_superop(proto, parse_mask("full"));
            double worst = 0.0;
            for (const std::string& name : InitialQubitState::preset_names()) {
                const InitialQubitState init = InitialQubitState::preset(name);
                const Mat12 a = oracle_gate_output(proto, init);
                const Mat12 b = unvec_density(m.mat * vec_density(init.density()));
                worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            }
            v.check(worst <= 1e-10, "oracle equivalence (nbar = 4)",
                    "max elementwise diff " + fmt("%.3e", worst));
        }
        {
            const Protocol proto = Protocol::cz_cnot(1e2, 1e-14);
            const double diff = (gate_superop(proto, parse_mask("full")).mat -
                                 superop_by_coefficient_matching(proto).mat)
                                    .cwiseAbs()
                                    .maxCoeff();
            v.check(diff <= 1e-12, "coefficient-matching equivalence (nbar = 1e2)",
                    "max elementwise diff " + fmt("%.3e", diff));
        }
        {
            const Protocol proto = Protocol::cz_cnot(1e4, 1e-14);
            const ChannelDiagnostics d = diagnose_gate(proto, parse_mask("full"), nullptr);
            double worst_cd = 0.0;
            for (const StepDiagnostics& s : d.steps)
                worst_cd = std::max(worst_cd, s.completeness_defect);
            v.check(d.trace_defect <= 1e-10 && d.choi_min_eigenvalue >= -1e-10 &&
                        worst_cd <= 1e-13,
                    "channel sanity (nbar = 1e4)",
                    "trace defect " + fmt("%.3e", d.trace_defect) + ", Choi min eig " +
                        fmt("%.3e", d.choi_min_eigenvalue) + ", completeness " +
                        fmt("%.3e", worst_cd));
        }
    }

    std::printf("%s\n", v.failures == 0 ? "verification passed" : "verification FAILED");
    return v.failures == 0 ? 0 : kExitVerifyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator of the five-pulse trapped-ion controlled-NOT gate driven by "
                 "quantized coherent fields"};
    app.require_subcommand(1);

    // sums
    double nbar = 0.0;
    int k = 2;
    std::string precision = "double";
    int digits = 30;
    double abs_err = 1e-13;
    std::string format = "table";
    std::string out;
    auto* sums = app.add_subcommand("sums", "Evaluate the sums S1..S10 with certified error");
    sums->add_option("--nbar", nbar, "mean photon number")->required()
        ->check(CLI::PositiveNumber);
    sums->add_option("--k", k, "pulse-area multiplier for S4/S6 (default 2)");
    sums->add_option("--precision", precision, "double | extended")
        ->check(CLI::IsMember({"double", "extended"}));
    sums->add_option("--digits", digits, "fractional digits in extended mode")
        ->check(CLI::Range(1, 120));
    sums->add_option("--abs-err", abs_err, "certified absolute error (double mode)")
        ->check(CLI::PositiveNumber);
    sums->add_option("--format", format, "table | csv | json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sums->add_option("--out", out, "output path (default stdout)");

    // gate
    double g_nbar = 0.0, g_tail = 1e-14;
    std::string g_mask = "11111", g_out;
    auto* gate = app.add_subcommand("gate", "Build the one-gate channel and write diagnostics");
    gate->add_option("--nbar", g_nbar, "mean photon number")->required()
        ->check(CLI::PositiveNumber);
    std::string g_protocol = "cz-cnot";
    gate->add_option("--protocol", g_protocol, "protocol preset (default cz-cnot)");
    gate->add_option("--mask", g_mask, "per-step quantization mask (e.g. 01110, full, ideal, "
                                       "sideband-limited)");
    gate->add_option("--tail-eps", g_tail, "certified field truncation tail")
        ->check(CLI::PositiveNumber);
    gate->add_option("--out", g_out, "output path (default stdout)");

    // run
    double r_nbar = 0.0, r_tail = 1e-14;
    std::string r_mask = "11111", r_initial = "10", r_out;
    std::vector<long long> r_ts{1};
    auto* run = app.add_subcommand("run", "Failure probability for one configuration");
    run->add_option("--nbar", r_nbar, "mean photon number")->required()
        ->check(CLI::PositiveNumber);
    std::string r_protocol = "cz-cnot";
    run->add_option("--protocol", r_protocol, "protocol preset (default cz-cnot)");
    run->add_option("--initial", r_initial, "preset or eight comma-separated reals");
    run->add_option("--mask", r_mask, "per-step quantization mask");
    run->add_option("--t", r_ts, "operation count(s)")->expected(-1);
    run->add_option("--tail-eps", r_tail, "certified field truncation tail")
        ->check(CLI::PositiveNumber);
    std::string r_format = "csv";
    run->add_option("--format", r_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--out", r_out, "output path (default stdout)");

    // sweep
    std::vector<double> s_nbars;
    std::vector<std::string> s_initials;
    std::vector<long long> s_ts;
    long long s_tmin = 1, s_tmax = 100, s_tstep = 1;
    double s_tail = 1e-14;
    std::string s_mask = "11111", s_out;
    auto* sweep = app.add_subcommand("sweep", "Failure-probability grid over nbar, initial "
                                              "state and operation count");
    sweep->add_option("--nbar", s_nbars, "mean photon numbers")->required()->expected(-1);
    std::string s_protocol = "cz-cnot";
    sweep->add_option("--protocol", s_protocol, "protocol preset (default cz-cnot)");
    sweep->add_option("--initial", s_initials, "initial states (default: all presets)")
        ->expected(-1);
    sweep->add_option("--t", s_ts, "explicit operation counts (overrides the range)")
        ->expected(-1);
    sweep->add_option("--t-min", s_tmin, "range start (default 1)");
    sweep->add_option("--t-max", s_tmax, "range end (default 100)");
    sweep->add_option("--t-step", s_tstep, "range step (default 1)")->check(CLI::PositiveNumber);
    sweep->add_option("--mask", s_mask, "per-step quantization mask");
    sweep->add_option("--tail-eps", s_tail, "certified field truncation tail")
        ->check(CLI::PositiveNumber);
    std::string s_format = "csv";
    sweep->add_option("--format", s_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", s_out, "output path (default stdout)");

    // verify
    std::string v_level = "fast";
    auto* verify = app.add_subcommand("verify", "Run the internal verification suites");
    verify->add_option("--level", v_level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (sums->parsed())
            return cmd_sums(nbar, k, precision, digits, abs_err, format, out);
        if (gate->parsed())
            return cmd_gate(g_protocol, g_nbar, g_mask, g_tail, g_out);
        if (run->parsed()) {
            const auto rows = sweep_rows(r_protocol, {r_nbar}, {r_initial}, r_ts,
                                         parse_mask(r_mask), r_tail);
            write_output(r_out, r_format == "json" ? json_rows(rows) : csv_rows(rows));
            return 0;
        }
        if (sweep->parsed()) {
            std::vector<long long> ts = s_ts;
            if (ts.empty())
                for (long long t = s_tmin; t <= s_tmax; t += s_tstep)
                    ts.push_back(t);
            std::vector<std::string> inits = s_initials;
            if (inits.empty())
                inits.assign(InitialQubitState::preset_names().begin(),
                             InitialQubitState::preset_names().end());
            const auto rows = sweep_rows(s_protocol, s_nbars, inits, ts, parse_mask(s_mask),
                                         s_tail);
            write_output(s_out, s_format == "json" ? json_rows(rows) : csv_rows(rows));
            return 0;
        }
        if (verify->parsed())
            return cmd_verify(v_level);
    } catch (const certification_error& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
