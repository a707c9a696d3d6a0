#include "recmeth/stitching.hpp"

#include <cmath>
#include <sstream>

#include "recmeth/numerics.hpp"
#include "recmeth/products.hpp"

namespace recmeth {

StitchPlan StitchPlan::mp(long N, double alpha, double eta) {
    require(N >= 1 && alpha > 0 && eta > 0, "MP stitch needs N >= 1, alpha > 0, eta > 0");
    StitchPlan p;
    p.N = N;
    p.terminator = MpTerminator{alpha, eta};
    std::ostringstream os;
    os << "mp alpha=" << alpha << " eta=" << eta;
    p.match_report = os.str();
    return p;
}

StitchPlan StitchPlan::constant(long N) {
    require(N >= 1, "stitch level must be >= 1");
    StitchPlan p;
    p.N = N;
    p.terminator = ConstantTerminator{};
    p.match_report = "constant tail b_n = b_N";
    return p;
}

StitchPlan StitchPlan::mp_matched(const CoeffSequence& b, long N, long first, long last) {
    const GrowthFit g = fit_growth(b.tabulate(last + 1), GrowthModel::Linear, first, last);
    require(g.eta_matched > 0, "matched eta is not positive; MP terminator unavailable");
    StitchPlan p = mp(N, g.alpha, g.eta_matched);
    std::ostringstream os;
    os << "matched to O(1) on [" << first << "," << last << "]: alpha=" << g.alpha << " gamma=" << g.gamma
       << " eta=" << g.eta_matched;
    p.match_report = os.str();
    return p;
}

GreenEvaluation stitched_green(const CoeffSequence& b, const StitchPlan& plan, std::complex<double> z,
                               bool extended) {
    GreenEvaluation e;
    e.method = std::holds_alternative<MpTerminator>(plan.terminator) ? "mp-stitch" : "constant-stitch";
    e.N = plan.N;
    e.note = plan.match_report;
    if (extended) {
        auto r = stitched_green_t<long double>(b, plan, {z.real(), z.imag()});
        e.value = {static_cast<double>(r.value.real()), static_cast<double>(r.value.imag())};
        e.depth = r.depth;
        e.achieved_tol = r.achieved_tol;
    } else {
        auto r = stitched_green_t<double>(b, plan, z);
        e.value = r.value;
        e.depth = r.depth;
        e.achieved_tol = r.achieved_tol;
    }
    return e;
}

GreenEvaluation truncated_evaluation(const CoeffSequence& b, long N, std::complex<double> z, bool extended) {
    GreenEvaluation e;
    e.method = "truncation";
    e.N = N;
    if (extended) {
        auto v = truncated_green<long double>(b, {z.real(), z.imag()}, N);
        e.value = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    } else {
        e.value = truncated_green<double>(b, z, N);
    }
    return e;
}

std::complex<double> zero_freq_stitched(const CoeffSequence& b, const StitchPlan& plan) {
    require(plan.N >= 2, "zero_freq_stitched needs N >= 2");
    const double log_pi = log_pi_product(b, plan.N);
    if (std::holds_alternative<ConstantTerminator>(plan.terminator)) return {0.0, std::exp(log_pi)};
    const auto& mp = std::get<MpTerminator>(plan.terminator);
    const CoeffSequence s = CoeffSequence::meixner_pollaczek(mp.alpha, mp.eta);
    const double log_pi_s = log_pi_product(s, plan.N);
    const double ratio = static_cast<double>(std::log(b.value_ext(plan.N)) - std::log(s.value_ext(plan.N)));
    const double parity = plan.N % 2 == 0 ? 1.0 : -1.0;
    const double gs = mp_pi_limit(mp.alpha, mp.eta).imag();
    return {0.0, gs * std::exp(parity * ratio - log_pi_s + log_pi)};
}

ErrorBoundReport error_bound_finite_im(const CoeffSequence& b, const CoeffSequence& b_s, std::complex<double> z,
                                       long N, long horizon) {
    require(z.imag() != 0, "finite-Im bound needs Im z != 0");
    require(N >= 1, "bound needs N >= 1");
    if (horizon == 0) horizon = 64 * N;
    require(horizon >= N + 4, "horizon must exceed N");
    const long mid = N + (horizon - N) / 2;
    double first = 0, second = 0;
    for (long n = N + 1; n <= horizon; ++n) {
        const double d = static_cast<double>(std::fabs(b_s.value_ext(n) - b.value_ext(n)));
        (n <= mid ? first : second) = std::max(n <= mid ? first : second, d);
    }
    const double slack = 1e-13 * static_cast<double>(b.value_ext(horizon));
    if (second > first + slack)
        throw ValidationError("horizon too short to certify the sup of |b_s - b| (still growing at n=" +
                              std::to_string(horizon) + ")");
    ErrorBoundReport r;
    r.kind = BoundKind::FiniteIm;
    r.partial_sum = first;
    r.value = 2.0 / (z.imag() * z.imag()) * first;
    std::ostringstream os;
    os << "N=" << N << " horizon=" << horizon << " sup|db|=" << first << " Im z=" << z.imag();
    r.inputs_summary = os.str();
    return r;
}

namespace {

// Log-spaced sample of the pair envelope max(t_n, t_{n+1}) of a summand on [lo, hi].
template <class F>
void envelope_samples(F&& term, long lo, long hi, std::vector<double>& ns, std::vector<double>& ts) {
    const int points = 48;
    const double a = std::log(static_cast<double>(lo)), c = std::log(static_cast<double>(hi - 1));
    long last = -1;
    for (int i = 0; i <= points; ++i) {
        long n = std::lround(std::exp(a + (c - a) * i / points));
        if (n == last) continue;
        last = n;
        const double e = std::max(std::fabs(term(n)), std::fabs(term(n + 1)));
        if (e > 0) {
            ns.push_back(static_cast<double>(n));
            ts.push_back(e);
        }
    }
}

struct TailFit {
    bool power = true;  // else log-power
    double exponent = 0.0;
    bool convergent = false;
    double tail = 0.0;
    std::string label;
};

// Fits the envelope as C n^-p or C (log n)^-q / n and integrates the tail from `from`.
TailFit fit_tail(const std::vector<double>& ns, const std::vector<double>& ts, double from) {
    TailFit f;
    if (ns.size() < 4) {
        f.convergent = true;
        f.label = "zero";
        return f;
    }
    std::vector<double> ln, lt, lln, ltn;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ln.push_back(std::log(ns[i]));
        lt.push_back(std::log(ts[i]));
        lln.push_back(std::log(std::log(ns[i])));
        ltn.push_back(std::log(ts[i] * ns[i]));
    }
    const LineFit a = fit_line(ln, lt), b = fit_line(lln, ltn);
    const double p = -a.slope, q = -b.slope;
    const double t_end = ts.back(), n_end = ns.back();
    if (b.r2 >= a.r2 && std::fabs(p - 1.0) < 0.25) {
        f.power = false;
        f.exponent = q;
        f.convergent = q > 1.02;
        std::ostringstream os;
        os << "(log n)^-" << q << " / n";
        f.label = os.str();
        if (f.convergent) {
            const double c = t_end * n_end * std::pow(std::log(n_end), q);
            f.tail = c * std::pow(std::log(from), 1.0 - q) / (q - 1.0);
        } else {
            f.tail = INFINITY;
        }
    } else {
        f.exponent = p;
        f.convergent = p > 1.02;
        std::ostringstream os;
        os << "n^-" << p;
        f.label = os.str();
        f.tail = f.convergent ? t_end * n_end / (p - 1.0) * std::pow(n_end / from, p - 1.0) : INFINITY;
    }
    return f;
}

}  // namespace

ErrorBoundReport error_bound_zero_freq(const CoeffSequence& b, const CoeffSequence& b_s, long N, long horizon,
                                       double M) {
    require(horizon > N && N >= 1, "zero-frequency bound needs horizon > N >= 1");
    require(M > 0, "M must be positive");
    auto term = [&](long n) {
        return static_cast<double>(std::fabs(b_s.value_ext(n) - b.value_ext(n)) / b.value_ext(n));
    };
    long double sum = 0;
    bool all_zero = true;
    for (long n = N + 1; n <= horizon; ++n) {
        const double t = term(n);
        sum += t;
        all_zero &= t == 0;
    }
    ErrorBoundReport r;
    r.kind = BoundKind::ZeroFreq;
    r.m_constant = M;
    r.partial_sum = static_cast<double>(sum);
    if (all_zero) {
        r.decay_class = "identical";
        r.sufficiency_holds = true;
    } else {
        std::vector<double> ns, ts;
        envelope_samples(term, std::max(N + 1, horizon / 10), horizon, ns, ts);
        const TailFit f = fit_tail(ns, ts, static_cast<double>(horizon));
        r.decay_class = f.label;
        r.sufficiency_holds = f.convergent;
        r.tail = f.tail;
    }
    r.value = r.sufficiency_holds ? 2.0 * M * (r.partial_sum + r.tail) : INFINITY;
    std::ostringstream os;
    os << "N=" << N << " horizon=" << horizon << " M=" << M;
    r.inputs_summary = os.str();
    return r;
}

double calibrate_zero_freq_m(const ErrorBoundReport& unit_bound, double measured_error) {
    const double s = unit_bound.partial_sum + unit_bound.tail;
    require(s > 0 && std::isfinite(s), "cannot calibrate M against a zero or divergent sum");
    return std::fabs(measured_error) / (2.0 * s);
}

ErrorSeries stitch_error_series(const CoeffSequence& b, const CoeffSequence& b_s, long N, long horizon) {
    require(N >= 1, "error series needs N >= 1");
    if (horizon == 0) horizon = 64 * N;
    require(horizon > N + 8, "horizon must be well beyond N");
    auto term = [&](long n) {
        const long double sign = n % 2 == 0 ? 1.0L : -1.0L;
        return static_cast<double>((b.value_ext(n) - b_s.value_ext(n)) * sign / b.value_ext(n));
    };
    long double sum = 0;
    for (long n = N + 1; n <= horizon; ++n) sum += term(n);

    ErrorSeries out;
    // Alternating with shrinking magnitude over the last stretch: remainder below the first omitted term.
    const long check_from = std::max(N + 1, horizon - 64);
    bool alt = true;
    for (long n = check_from; n < horizon; ++n) {
        const double a = term(n), c = term(n + 1);
        if (!(a * c < 0 && std::fabs(c) <= std::fabs(a))) {
            alt = false;
            break;
        }
    }
    if (alt) {
        out.alternating = true;
        out.tail = term(horizon + 1) / 2;  // midpoint of the remainder bracket
    } else {
        out.alternating = false;
        // Pair sums are smooth; fit C n^-p and integrate.
        std::vector<double> ns, us;
        const double a = std::log(static_cast<double>(std::max(N + 1, horizon / 10)));
        const double c = std::log(static_cast<double>(horizon - 2));
        for (int i = 0; i <= 40; ++i) {
            long n = std::lround(std::exp(a + (c - a) * i / 40));
            const double u = term(n) + term(n + 1);
            if (u != 0) {
                ns.push_back(static_cast<double>(n));
                us.push_back(u);
            }
        }
        bool same_sign = !us.empty();
        for (double u : us) same_sign &= (u > 0) == (us.front() > 0);
        if (same_sign && us.size() >= 4) {
            std::vector<double> lx, ly;
            for (std::size_t i = 0; i < ns.size(); ++i) {
                lx.push_back(std::log(ns[i]));
                ly.push_back(std::log(std::fabs(us[i])));
            }
            const double p = -fit_line(lx, ly).slope;
            if (p > 1.0) {
                // sum over pairs of u(n) ~ (1/2) integral
                const double u_end = us.back(), n_end = ns.back();
                out.tail = 0.5 * u_end * n_end / (p - 1.0) * std::pow(n_end / horizon, p - 1.0);
            }
        }
    }
    out.estimate = static_cast<double>(sum) + out.tail;
    return out;
}

double calibrate_error_series(ErrorSeries& s, double measured_error) {
    require(s.estimate != 0, "cannot calibrate against a zero estimate");
    s.fitted_c = std::fabs(measured_error) / std::fabs(s.estimate);
    return s.fitted_c;
}

}  // namespace recmeth
