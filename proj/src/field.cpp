#include "czsim/field.hpp"

#include <mpfr.h>

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace czsim {

namespace {

// Minimal RAII handle for an mpfr value.
class MpReal {
public:
    explicit MpReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~MpReal() { mpfr_clear(v_); }
    MpReal(const MpReal&) = delete;
    MpReal& operator=(const MpReal&) = delete;
    mpfr_t& get() { return v_; }

private:
    mpfr_t v_;
};

// log w_mode = -nbar + mode*log(nbar) - lgamma(mode+1), computed in extended
// precision: the three terms reach ~2e9 at nbar = 1e8 while the result is
// O(10), so double arithmetic loses the digits the channel entries need.
long double mode_log_weight(double nbar, long long mode) {
    constexpr mpfr_prec_t prec = 192;
    MpReal t(prec), acc(prec), g(prec);
    mpfr_set_d(acc.get(), -nbar, MPFR_RNDN);
    mpfr_set_d(t.get(), nbar, MPFR_RNDN);
    mpfr_log(t.get(), t.get(), MPFR_RNDN);
    mpfr_mul_si(t.get(), t.get(), mode, MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    mpfr_set_si(g.get(), mode + 1, MPFR_RNDN);
    mpfr_lngamma(g.get(), g.get(), MPFR_RNDN);
    mpfr_sub(acc.get(), acc.get(), g.get(), MPFR_RNDN);
    return mpfr_get_ld(acc.get(), MPFR_RNDN);
}

// Neumaier-compensated accumulator.
struct Compensated {
    long double sum = 0.0L;
    long double c = 0.0L;
    void add(long double x) {
        long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + c; }
};

double prefactor_value(Prefactor p, long long n, double nbar) {
    switch (p) {
        case Prefactor::unit: return 1.0;
        case Prefactor::sqrt_n_over_nbar: return std::sqrt(static_cast<double>(n) / nbar);
        case Prefactor::sqrt_nbar_over_np1: return std::sqrt(nbar / static_cast<double>(n + 1));
        case Prefactor::sqrt_n_over_np1:
            return std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1));
    }
    return 1.0;
}

} // namespace

double poisson_log_tail_upper(double nbar, double a) {
    // Chernoff: P(N >= a) <= exp(-nbar) (e nbar / a)^a for a > nbar.
    return -nbar + a * (1.0 + std::log(nbar) - std::log(a));
}

double poisson_log_tail_lower(double nbar, double a) {
    // Mirror bound P(N <= a) <= exp(-nbar) (e nbar / a)^a for a < nbar;
    // at a = 0 the bound is exact: P(N <= 0) = exp(-nbar).
    if (a <= 0.0)
        return -nbar;
    return -nbar + a * (1.0 + std::log(nbar) - std::log(a));
}

FockWindow choose_window(double nbar, double tail_eps) {
    if (!(nbar > 0.0))
        throw std::invalid_argument("choose_window: nbar must be > 0");
    if (!(tail_eps > 0.0) || !(tail_eps < 1.0))
        throw std::invalid_argument("choose_window: tail_eps must lie in (0, 1)");

    const auto mode = static_cast<long long>(std::floor(nbar));
    const double side = std::log(tail_eps / 2.0);

    // P(N > hi) = P(N >= hi+1) <= side budget.
    long long hi = std::max<long long>(mode, static_cast<long long>(std::ceil(nbar)));
    while (poisson_log_tail_upper(nbar, static_cast<double>(hi + 1)) > side)
        ++hi;

    // P(N < lo) = P(N <= lo-1) <= side budget; exact zero once lo hits 0.
    long long lo = mode;
    while (lo > 0 && poisson_log_tail_lower(nbar, static_cast<double>(lo - 1)) > side)
        --lo;

    return {lo, hi};
}

double poisson_weight(double nbar, long long n) {
    if (!(nbar > 0.0))
        throw std::invalid_argument("poisson_weight: nbar must be > 0");
    if (n < 0)
        throw std::invalid_argument("poisson_weight: n must be >= 0");
    const long double lw = -static_cast<long double>(nbar) +
                           static_cast<long double>(n) * std::log(static_cast<long double>(nbar)) -
                           std::lgamma(static_cast<long double>(n) + 1.0L);
    return static_cast<double>(std::exp(lw));
}

CoherentField::CoherentField(double nbar, FockWindow window, double tail_eps)
    : nbar_(nbar), window_(window), tail_eps_(tail_eps) {
    if (!(nbar > 0.0))
        throw std::invalid_argument("CoherentField: nbar must be > 0");
    if (!(tail_eps > 0.0))
        throw std::invalid_argument("CoherentField: tail_eps must be > 0");
    const auto mode = static_cast<long long>(std::floor(nbar));
    if (window.lo < 0 || window.lo > mode || window.hi < mode)
        throw std::invalid_argument("CoherentField: window must satisfy 0 <= lo <= floor(nbar) <= hi");
    // Retained mass must cover 1 - tail_eps. The edge bounds certify the
    // complement, so this never trips for windows made by with_tail.
    const double outside = (window.lo > 0 ? std::exp(poisson_log_tail_lower(nbar, static_cast<double>(window.lo - 1))) : 0.0) +
                           std::exp(poisson_log_tail_upper(nbar, static_cast<double>(window.hi + 1)));
    if (outside > tail_eps)
        throw certification_error("CoherentField: window mass outside exceeds tail_eps (bound " +
                                  std::to_string(outside) + ")");
}

CoherentField CoherentField::with_tail(double nbar, double tail_eps) {
    FockWindow w = choose_window(nbar, tail_eps);
    w.lo = std::max<long long>(0, w.lo - 1);
    w.hi += 1;
    return CoherentField(nbar, w, tail_eps);
}

std::vector<double> CoherentField::weights() const {
    const long long lo = window_.lo, hi = window_.hi;
    long long mode = static_cast<long long>(std::floor(nbar_));
    mode = std::clamp(mode, lo, hi);
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
    const long double nb = nbar_;
    long double x = std::exp(mode_log_weight(nbar_, mode));
    w[static_cast<std::size_t>(mode - lo)] = static_cast<double>(x);
    long double up = x;
    for (long long n = mode; n < hi; ++n) {
        up *= nb / static_cast<long double>(n + 1);
        w[static_cast<std::size_t>(n + 1 - lo)] = static_cast<double>(up);
    }
    long double down = x;
    for (long long n = mode; n > lo; --n) {
        down *= static_cast<long double>(n) / nb;
        w[static_cast<std::size_t>(n - 1 - lo)] = static_cast<double>(down);
    }
    return w;
}

std::vector<double> CoherentField::amplitudes() const {
    std::vector<double> a = weights();
    for (double& x : a)
        x = std::sqrt(x);
    return a;
}

double CoherentField::lower_edge_mass_bound() const {
    if (window_.lo == 0)
        return 0.0; // nothing exists below the window
    return std::exp(poisson_log_tail_lower(nbar_, static_cast<double>(window_.lo)));
}

double CoherentField::upper_edge_mass_bound() const {
    return std::exp(poisson_log_tail_upper(nbar_, static_cast<double>(window_.hi)));
}

SumSpec SumSpec::s(int index, int k) {
    // Angles are multiples of pi/(4 sqrt(nbar)): 1 for the pi/2-pulse sums,
    // k for the S4/S6 family (k = 2 reproduces the pi-pulse angle).
    switch (index) {
        case 1: return {1.0, Prefactor::unit, {{Trig::cos, 1, 0}, {Trig::cos, 1, 0}}};
        case 2: return {1.0, Prefactor::sqrt_nbar_over_np1, {{Trig::cos, 1, 0}, {Trig::sin, 1, 1}}};
        case 3: return {1.0, Prefactor::unit, {{Trig::cos, 1, 0}, {Trig::cos, 1, 1}}};
        case 4: return {0.5, Prefactor::sqrt_n_over_nbar, {{Trig::sin, k, 0}}};
        case 5: return {1.0, Prefactor::unit, {{Trig::sin, 1, 0}, {Trig::sin, 1, 0}}};
        case 6: return {0.5, Prefactor::sqrt_nbar_over_np1, {{Trig::sin, k, 1}}};
        case 7: return {1.0, Prefactor::sqrt_n_over_np1, {{Trig::sin, 1, 0}, {Trig::sin, 1, 1}}};
        case 8: return {1.0, Prefactor::unit, {{Trig::cos, 1, 1}, {Trig::cos, 1, 1}}};
        case 9: return {1.0, Prefactor::sqrt_n_over_nbar, {{Trig::cos, 1, 1}, {Trig::sin, 1, 0}}};
        case 10: return {1.0, Prefactor::unit, {{Trig::sin, 1, 1}, {Trig::sin, 1, 1}}};
        default: throw std::invalid_argument("SumSpec::s: index must be 1..10");
    }
}

SumResult evaluate_sum_certified(const SumSpec& spec, const CoherentField& field) {
    const double nbar = field.nbar();
    const FockWindow w = field.window();
    const std::vector<double> weights = field.weights();
    const double base = std::numbers::pi / (4.0 * std::sqrt(nbar));

    Compensated acc;
    for (long long n = w.lo; n <= w.hi; ++n) {
        long double term = weights[static_cast<std::size_t>(n - w.lo)];
        term *= prefactor_value(spec.prefactor, n, nbar);
        for (const TrigFactor& f : spec.factors) {
            const long double angle = static_cast<long double>(f.quarter_pi_mult) * base *
                                      std::sqrt(static_cast<long double>(n + f.offset));
            term *= (f.trig == Trig::cos) ? std::cos(angle) : std::sin(angle);
        }
        acc.add(term);
    }
    const double value = static_cast<double>(spec.scale * acc.value());

    // |w_n * prefactor(n)| <= (w_{n-1} + w_n + w_{n+1}) / 2 for every family
    // member, so the neglected tail is bounded by 3/2 of the edge-inclusive
    // Poisson tails; trig factors are <= 1 in magnitude.
    const double tail = 1.5 * (field.lower_edge_mass_bound() + field.upper_edge_mass_bound());
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(value) + 1.0);
    return {value, std::fabs(spec.scale) * tail + rounding};
}

double evaluate_sum(const SumSpec& spec, const CoherentField& field, double abs_err) {
    if (!(abs_err > 0.0))
        throw std::invalid_argument("evaluate_sum: abs_err must be > 0");
    const SumResult r = evaluate_sum_certified(spec, field);
    if (r.error_bound > abs_err) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "evaluate_sum: window certifies only %.3e > requested %.3e",
                      r.error_bound, abs_err);
        throw certification_error(msg);
    }
    return r.value;
}

std::array<double, 10> s_sums(double nbar, int k, double abs_err) {
    const CoherentField field = CoherentField::with_tail(nbar, abs_err / 2.0);
    std::array<double, 10> out{};
    for (int i = 1; i <= 10; ++i)
        out[static_cast<std::size_t>(i - 1)] = evaluate_sum(SumSpec::s(i, k), field, abs_err);
    return out;
}

std::string evaluate_sum_extended(const SumSpec& spec, double nbar, int digits) {
    if (digits < 1 || digits > 120)
        throw std::invalid_argument("evaluate_sum_extended: digits must be 1..120");
    // ~3.33 bits per digit plus generous guard bits.
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 4 + 96);
    const double tail_eps = std::pow(10.0, -(digits + 8));
    FockWindow w = choose_window(nbar, tail_eps);
    w.lo = std::max<long long>(0, w.lo - 1);
    w.hi += 1;

    MpReal nb(prec), lognb(prec), base(prec), weight(prec), term(prec), angle(prec),
        tmp(prec), acc(prec), g(prec);
    mpfr_set_d(nb.get(), nbar, MPFR_RNDN);
    mpfr_log(lognb.get(), nb.get(), MPFR_RNDN);
    // base = pi / (4 sqrt(nbar))
    mpfr_const_pi(base.get(), MPFR_RNDN);
    mpfr_sqrt(tmp.get(), nb.get(), MPFR_RNDN);
    mpfr_mul_ui(tmp.get(), tmp.get(), 4, MPFR_RNDN);
    mpfr_div(base.get(), base.get(), tmp.get(), MPFR_RNDN);

    // anchor weight at w.lo: exp(-nbar + lo log nbar - lngamma(lo+1))
    mpfr_mul_si(weight.get(), lognb.get(), w.lo, MPFR_RNDN);
    mpfr_sub(weight.get(), weight.get(), nb.get(), MPFR_RNDN);
    mpfr_set_si(g.get(), w.lo + 1, MPFR_RNDN);
    mpfr_lngamma(g.get(), g.get(), MPFR_RNDN);
    mpfr_sub(weight.get(), weight.get(), g.get(), MPFR_RNDN);
    mpfr_exp(weight.get(), weight.get(), MPFR_RNDN);

    mpfr_set_zero(acc.get(), 1);
    for (long long n = w.lo; n <= w.hi; ++n) {
        mpfr_set(term.get(), weight.get(), MPFR_RNDN);
        switch (spec.prefactor) {
            case Prefactor::unit:
                break;
            case Prefactor::sqrt_n_over_nbar:
                mpfr_set_si(tmp.get(), n, MPFR_RNDN);
                mpfr_div(tmp.get(), tmp.get(), nb.get(), MPFR_RNDN);
                mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDN);
                mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDN);
                break;
            case Prefactor::sqrt_nbar_over_np1:
                mpfr_set_si(tmp.get(), n + 1, MPFR_RNDN);
                mpfr_div(tmp.get(), nb.get(), tmp.get(), MPFR_RNDN);
                mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDN);
                mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDN);
                break;
            case Prefactor::sqrt_n_over_np1:
                mpfr_set_si(tmp.get(), n, MPFR_RNDN);
                mpfr_div_si(tmp.get(), tmp.get(), n + 1, MPFR_RNDN);
                mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDN);
                mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDN);
                break;
        }
        for (const TrigFactor& f : spec.factors) {
            mpfr_set_si(angle.get(), n + f.offset, MPFR_RNDN);
            mpfr_sqrt(angle.get(), angle.get(), MPFR_RNDN);
            mpfr_mul(angle.get(), angle.get(), base.get(), MPFR_RNDN);
            mpfr_mul_si(angle.get(), angle.get(), f.quarter_pi_mult, MPFR_RNDN);
            if (f.trig == Trig::cos)
                mpfr_cos(tmp.get(), angle.get(), MPFR_RNDN);
            else
                mpfr_sin(tmp.get(), angle.get(), MPFR_RNDN);
            mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDN);
        }
        mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        // weight ratio: w_{n+1} = w_n * nbar / (n+1)
        mpfr_mul(weight.get(), weight.get(), nb.get(), MPFR_RNDN);
        mpfr_div_si(weight.get(), weight.get(), n + 1, MPFR_RNDN);
    }
    mpfr_set_d(tmp.get(), spec.scale, MPFR_RNDN);
    mpfr_mul(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);

    std::string fmt = "%." + std::to_string(digits) + "Rf";
    char buf[256];
    mpfr_snprintf(buf, sizeof buf, fmt.c_str(), acc.get());
    return std::string(buf);
}

std::array<std::string, 10> s_sums_extended(double nbar, int k, int digits) {
    std::array<std::string, 10> out;
    for (int i = 1; i <= 10; ++i)
        out[static_cast<std::size_t>(i - 1)] = evaluate_sum_extended(SumSpec::s(i, k), nbar, digits);
    return out;
}

double poisson_window_mass_defect(double nbar, FockWindow window) {
    constexpr mpfr_prec_t prec = 256;
    MpReal nb(prec), weight(prec), acc(prec), g(prec), tmp(prec);
    mpfr_set_d(nb.get(), nbar, MPFR_RNDN);
    mpfr_log(tmp.get(), nb.get(), MPFR_RNDN);
    mpfr_mul_si(weight.get(), tmp.get(), window.lo, MPFR_RNDN);
    mpfr_sub(weight.get(), weight.get(), nb.get(), MPFR_RNDN);
    mpfr_set_si(g.get(), window.lo + 1, MPFR_RNDN);
    mpfr_lngamma(g.get(), g.get(), MPFR_RNDN);
    mpfr_sub(weight.get(), weight.get(), g.get(), MPFR_RNDN);
    mpfr_exp(weight.get(), weight.get(), MPFR_RNDN);
    mpfr_set_zero(acc.get(), 1);
    for (long long n = window.lo; n <= window.hi; ++n) {
        mpfr_add(acc.get(), acc.get(), weight.get(), MPFR_RNDN);
        mpfr_mul(weight.get(), weight.get(), nb.get(), MPFR_RNDN);
        mpfr_div_si(weight.get(), weight.get(), n + 1, MPFR_RNDN);
    }
    mpfr_ui_sub(acc.get(), 1, acc.get(), MPFR_RNDN);
    return mpfr_get_d(acc.get(), MPFR_RNDN);
}

} // namespace czsim
