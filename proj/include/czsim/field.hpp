// Coherent-field amplitudes, certified Fock truncation, and high-precision
// evaluation of the Poisson-weighted trigonometric sums produced by quantized
// carrier and sideband pulses.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace czsim {

/// Thrown when a requested numeric guarantee cannot be certified
/// (truncation window too small, completeness defect above threshold, ...).
struct certification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inclusive range of retained Fock indices.
struct FockWindow {
    long long lo = 0;
    long long hi = 0;
    long long size() const { return hi - lo + 1; }
};

/// log P(N >= a) bound for a Poisson(nbar) variable, valid for a > nbar.
double poisson_log_tail_upper(double nbar, double a);
/// log P(N <= a) bound, valid for 0 <= a < nbar.
double poisson_log_tail_lower(double nbar, double a);

/// Smallest window around floor(nbar) whose complementary Poisson mass is
/// certified <= tail_eps (<= tail_eps/2 on each side; the lower side is exact
/// zero when the window reaches 0).
FockWindow choose_window(double nbar, double tail_eps);

/// e^{-nbar} nbar^n / n!, evaluated in log space. Underflow returns 0.
double poisson_weight(double nbar, long long n);

/// A coherent driving field truncated to a certified Fock window.
///
/// Weights over the window are generated from a single extended-precision
/// anchor at the mode followed by the exact ratio recurrence, so their
/// relative accuracy is ~1 ulp even for nbar = 1e8 where direct log-space
/// evaluation loses ~10 digits to cancellation.
class CoherentField {
public:
    CoherentField(double nbar, FockWindow window, double tail_eps);

    /// Window from choose_window(nbar, tail_eps), padded by one index on each
    /// side so that prefactor-carrying sums stay certified at the same level.
    static CoherentField with_tail(double nbar, double tail_eps);

    double nbar() const { return nbar_; }
    FockWindow window() const { return window_; }
    double tail_eps() const { return tail_eps_; }

    /// Poisson weights w_n for n in the window, ascending.
    std::vector<double> weights() const;
    /// c_n = sqrt(w_n) (positive real convention), ascending.
    std::vector<double> amplitudes() const;

    /// Certified bounds on P(N <= lo) and P(N >= hi), edges inclusive.
    double lower_edge_mass_bound() const;
    double upper_edge_mass_bound() const;

private:
    double nbar_;
    FockWindow window_;
    double tail_eps_;
};

enum class Prefactor : std::uint8_t {
    unit,               // 1
    sqrt_n_over_nbar,   // sqrt(n/nbar)
    sqrt_nbar_over_np1, // sqrt(nbar/(n+1))
    sqrt_n_over_np1,    // sqrt(n/(n+1))
};

enum class Trig : std::uint8_t { cos, sin };

/// One factor trig(c * sqrt(n + offset)) with c = quarter_pi_mult * pi/(4 sqrt(nbar)).
struct TrigFactor {
    Trig trig = Trig::cos;
    int quarter_pi_mult = 1;
    int offset = 0; // 0 or 1
};

/// A member of the closed family of Poisson-weighted trigonometric sums:
///   scale * sum_n w_n * prefactor(n) * prod_j trig_j(c_j sqrt(n + a_j)).
struct SumSpec {
    double scale = 1.0;
    Prefactor prefactor = Prefactor::unit;
    std::vector<TrigFactor> factors; // empty list = constant 1

    /// The ten sums S1..S10 that appear in the one-gate reduced density
    /// matrix. k scales the S4/S6 angles (k = 2 is the protocol value).
    static SumSpec s(int index, int k = 2);
};

struct SumResult {
    double value = 0.0;
    double error_bound = 0.0; // certified |value - exact|
};

/// Compensated fixed-order evaluation over the field's window with a
/// certified truncation bound.
SumResult evaluate_sum_certified(const SumSpec& spec, const CoherentField& field);

/// As above but enforcing the bound: throws certification_error when the
/// field's window cannot guarantee abs_err.
double evaluate_sum(const SumSpec& spec, const CoherentField& field, double abs_err);

/// S1..S10 at the given nbar, each certified to abs_err.
std::array<double, 10> s_sums(double nbar, int k = 2, double abs_err = 1e-13);

/// Extended-precision evaluation (MPFR); returns the value rounded correctly
/// to `digits` fractional decimal digits, e.g. "0.500009817401897928264355667147".
std::string evaluate_sum_extended(const SumSpec& spec, double nbar, int digits);
std::array<std::string, 10> s_sums_extended(double nbar, int k = 2, int digits = 30);

/// Sum of Poisson weights over [window.lo, window.hi] in extended precision;
/// used to validate windows far beyond double resolution.
double poisson_window_mass_defect(double nbar, FockWindow window);

} // namespace czsim
