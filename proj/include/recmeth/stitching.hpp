#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "recmeth/cfrac.hpp"
#include "recmeth/coeff_sequence.hpp"

namespace recmeth {

struct MpTerminator {
    double alpha = 1.0;
    double eta = 1.0;
};
struct ConstantTerminator {};
using Terminator = std::variant<MpTerminator, ConstantTerminator>;

struct StitchPlan {
    long N = 1;
    Terminator terminator = ConstantTerminator{};
    DescentOptions depth;
    std::string match_report;

    static StitchPlan mp(long N, double alpha, double eta);
    static StitchPlan constant(long N);
    // alpha from a linear growth fit of b on [first, last], then eta from the intercept.
    static StitchPlan mp_matched(const CoeffSequence& b, long N, long first, long last);
};

struct GreenEvaluation {
    std::complex<double> value;
    std::string method;
    long N = 0;
    long depth = 0;
    double achieved_tol = 0.0;
    std::optional<double> error_bound;
    std::string note;
};

// Fixed point of g = 1/(z - b^2 g) with Im(g) Im(z) < 0.
template <class Real>
Complex<Real> constant_tail_green(Complex<Real> z, Real b) {
    require(z.imag() != 0, "constant tail needs Im z != 0");
    const Complex<Real> root = std::sqrt(z * z - Real(4) * b * b);
    const Real d = Real(2) * b * b;
    Complex<Real> g1 = (z - root) / d, g2 = (z + root) / d;
    return g1.imag() * z.imag() < 0 ? g1 : g2;
}

template <class Real>
DescentResult<Real> stitched_green_t(const CoeffSequence& b, const StitchPlan& plan, Complex<Real> z) {
    require(plan.N >= 1, "stitch level must be >= 1");
    require(z.imag() != 0, "stitched_green needs Im z != 0");
    if (auto nmax = b.n_max()) require(*nmax >= plan.N, "coefficient table shorter than the stitch level");
    DescentResult<Real> r;
    Complex<Real> g;
    if (auto* mp = std::get_if<MpTerminator>(&plan.terminator)) {
        const CoeffSequence tail = CoeffSequence::meixner_pollaczek(mp->alpha, mp->eta);
        r = descent_green<Real>(tail, z, plan.N, plan.depth);
        g = r.value;
    } else {
        g = constant_tail_green<Real>(z, b.at<Real>(plan.N));
    }
    for (long n = plan.N - 1; n >= 0; --n) g = mobius_apply(z, b.at<Real>(n + 1), g, n);
    r.value = g;
    return r;
}

GreenEvaluation stitched_green(const CoeffSequence& b, const StitchPlan& plan, std::complex<double> z,
                               bool extended = false);
GreenEvaluation truncated_evaluation(const CoeffSequence& b, long N, std::complex<double> z, bool extended = false);

// Zero-frequency value of the stitched approximant via the parity formula.
std::complex<double> zero_freq_stitched(const CoeffSequence& b, const StitchPlan& plan);

enum class BoundKind { FiniteIm, ZeroFreq };

struct ErrorBoundReport {
    BoundKind kind = BoundKind::FiniteIm;
    double value = 0.0;
    double m_constant = 0.0;
    double partial_sum = 0.0;  // sum over (N, horizon] without the 2M prefactor
    double tail = 0.0;
    bool sufficiency_holds = true;
    std::string decay_class;
    std::string inputs_summary;
};

// 2/|Im z|^2 sup_{N < n <= horizon} |b_s - b|; throws when the envelope is not monotone on the horizon tail.
ErrorBoundReport error_bound_finite_im(const CoeffSequence& b, const CoeffSequence& b_s, std::complex<double> z,
                                       long N, long horizon = 0);

// 2M sum_{n > N} |b_s - b|/b with a fitted tail beyond the horizon.
ErrorBoundReport error_bound_zero_freq(const CoeffSequence& b, const CoeffSequence& b_s, long N, long horizon,
                                       double M);

// M such that the bound at this point equals the measured error.
double calibrate_zero_freq_m(const ErrorBoundReport& unit_bound, double measured_error);

struct ErrorSeries {
    double estimate = 0.0;  // sum_{n > N} (b - b_s)(-1)^n / b including the tail
    double tail = 0.0;
    bool alternating = true;  // false: tail from a power-law fit, control downgraded
    double fitted_c = std::numeric_limits<double>::quiet_NaN();
};

ErrorSeries stitch_error_series(const CoeffSequence& b, const CoeffSequence& b_s, long N, long horizon = 0);
// c with |measured| = c |estimate|.
double calibrate_error_series(ErrorSeries& s, double measured_error);

}  // namespace recmeth
