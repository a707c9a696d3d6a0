#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recmeth/cfrac.hpp"
#include "recmeth/coeff_sequence.hpp"
#include "recmeth/jet.hpp"
#include "recmeth/numerics.hpp"

namespace recmeth {

template <class Real>
struct GreenJet {
    long n = 0;
    Jet<Complex<Real>> g;  // Taylor coefficients of G(z; 2n) at z = 0
    // max over k of |wrong-parity part| / |c_k|: even k should be imaginary, odd k real
    double parity_violation = 0.0;

    // k! c_k, as the real number it structurally is (Im for even k, Re for odd k)
    Real derivative(int k) const {
        Real f = 1;
        for (int j = 2; j <= k; ++j) f *= j;
        return f * (k % 2 == 0 ? g[k].imag() : g[k].real());
    }
};

namespace detail {

template <class Real>
Jet<Complex<Real>> combine_minus_i(const Jet<Real>& a, const Jet<Real>& b) {
    Jet<Complex<Real>> r(a.order());
    for (int k = 0; k <= a.order(); ++k) r[k] = Complex<Real>(a[k], -b[k]);
    return r;
}

template <class Real>
GreenJet<Real> green_jet_from(const JetRecurrence<Real>& rec) {
    require(rec.index() % 2 == 0, "jet recurrence must sit at an even index");
    GreenJet<Real> out;
    out.n = rec.index() / 2;
    const auto num = combine_minus_i(rec.q(), rec.q_prev());
    const auto den = combine_minus_i(rec.p(), rec.p_prev());
    if (den[0] == Complex<Real>{}) throw ValidationError("p_2n(0) vanished");
    out.g = num / den;
    for (int k = 0; k <= out.g.order(); ++k) {
        const Real mag = std::abs(out.g[k]);
        if (mag == 0) continue;
        const Real wrong = k % 2 == 0 ? std::fabs(out.g[k].real()) : std::fabs(out.g[k].imag());
        out.parity_violation = std::max(out.parity_violation, static_cast<double>(wrong / mag));
    }
    return out;
}

}  // namespace detail

// G(z; 2n) = (q_2n - i q_2n-1) / (p_2n - i p_2n-1) expanded at z = 0 through order K.
template <class Real>
GreenJet<Real> approx_green_jet(const CoeffSequence& seq, long n, int K) {
    require(n >= 1 && K >= 0, "approx_green_jet needs n >= 1 and K >= 0");
    JetRecurrence<Real> rec(seq, K);
    while (rec.index() < 2 * n) rec.step();
    return detail::green_jet_from(rec);
}

enum class Dimension { One, Higher };

struct ExperimentSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

enum class ScalingModel { LogPower, LogLog, Plateau, PowerLaw };
std::string to_string(ScalingModel m);

struct ScalingFit {
    ScalingModel model = ScalingModel::PowerLaw;
    double exponent = 0.0;   // p for LogPower / PowerLaw
    double amplitude = 0.0;  // A in y = A g(x) + B (or y = A x^p)
    double offset = 0.0;     // B, zero for pure power fits
    double r2 = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    bool non_monotone = false;
};

enum class RateFamily { PowerLaw, LogPower };

// Least squares of log|y| against log x (PowerLaw) or log log x (LogPower).
ScalingFit rate_fit(const ExperimentSeries& series, RateFamily family);

// y = A (log x)^p + B with p scanned for the best R^2.
ScalingFit log_power_offset_fit(const ExperimentSeries& series, double p_lo = 0.05, double p_hi = 4.0);

// n_grid points evenly spaced in log n.
std::vector<long> log_grid(double lo, double hi, int points);

struct DerivativeScaling {
    int k = 1;
    ExperimentSeries series;  // n vs G^(k)(0; 2n)
    double max_parity_violation = 0.0;
    std::vector<ScalingFit> candidates;
    ScalingFit best;
    bool ambiguous = false;  // log log n vs plateau not resolvable on this window
    std::string note;
};

// One streaming pass of the jet recurrence; extended precision on request. The log-power
// candidate is y = A (log n)^p + B + D (log n)^(m(k-1)), m = 2 for d = 1 and 1 otherwise.
DerivativeScaling derivative_scaling(const CoeffSequence& seq, int k, const std::vector<long>& n_grid,
                                     bool extended = true, Dimension dim = Dimension::Higher);
// Candidate fits on an existing n vs G^(k) series.
DerivativeScaling fit_derivative_series(const ExperimentSeries& series, int k, Dimension dim = Dimension::Higher);

enum class SmoothnessVerdict { Holds, Inconsistent, Indeterminate };
std::string to_string(SmoothnessVerdict v);

struct SmoothnessReport {
    SmoothnessVerdict verdict = SmoothnessVerdict::Indeterminate;
    int k = 1;
    Growth kth = Growth::Indeterminate;       // prefactor^(k-1) x double integral
    Growth previous = Growth::Indeterminate;  // same with k-1
    std::vector<double> checkpoints_t;        // t = log n at each checkpoint
    std::vector<double> kth_values;
    std::vector<double> previous_values;
};

// Staggering amplitude as a function of t = log n.
using StaggerProfile = std::function<double(double)>;

StaggerProfile log_power_profile(double a, double scale = 1.0);

SmoothnessReport smoothness_criterion(const StaggerProfile& s, Dimension dim, int k);
// Fits s_n ~ C (log n)^-a on the numerical split, then applies the closed form.
SmoothnessReport smoothness_criterion(const StaggerDecomposition& split, Dimension dim, int k,
                                      double* fitted_a = nullptr);

// Smallest k with a Holds verdict, up to k_max.
std::optional<int> first_divergent_order(const StaggerProfile& s, Dimension dim, int k_max = 10);

// Closed-form ranges for s_n = (log n)^-a.
std::optional<int> predicted_order(double a, Dimension dim);

struct SmoothnessCase {
    std::string name;
    CoeffSequence seq;
    Dimension dimension;
    double a;
    std::optional<int> predicted_k;
};

std::vector<SmoothnessCase> builtin_smoothness_cases();

// Relative residual of the m-th derivative Christoffel-Darboux identity at x = 0.
double christoffel_darboux_check(const CoeffSequence& seq, long n, int m);

}  // namespace recmeth
