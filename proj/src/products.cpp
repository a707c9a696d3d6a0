#include "recmeth/products.hpp"

#include <cmath>

#include "recmeth/errors.hpp"

namespace recmeth {

double ProductTrace::value(long n) const { return std::exp(log_value(n)); }

long double pair_log(const CoeffSequence& seq, long k) {
    const long double odd = seq.value_ext(2 * k - 1), even = seq.value_ext(2 * k);
    return 2.0L * std::log1p((even - odd) / odd);
}

namespace {

std::vector<long> dyadic_points(long n_max) {
    std::vector<long> pts;
    for (long n = 2; n <= n_max; n *= 2) pts.push_back(n);
    return pts;
}

Convergence verdict_from(const IncrementReport& r) {
    if (r.growth == Growth::Bounded) return Convergence::FiniteNonzero;
    if (r.growth == Growth::Divergent) return r.sign > 0 ? Convergence::Divergent : Convergence::Vanishing;
    return Convergence::Marginal;
}

}  // namespace

ProductTrace pi_trace(const CoeffSequence& seq, long n_max) {
    require(n_max >= 1, "pi_trace needs n >= 1");
    ProductTrace t;
    t.log_values.resize(n_max);
    long double acc = 0;
    for (long n = 1; n <= n_max; ++n) {
        if (n % 2 == 0) acc += pair_log(seq, n / 2);
        t.log_values[n - 1] = static_cast<double>(acc - std::log(seq.value_ext(n)));
    }
    return t;
}

double log_pi_product(const CoeffSequence& seq, long n) {
    require(n >= 1, "pi_product needs n >= 1");
    long double acc = 0;
    for (long k = 1; k <= n / 2; ++k) acc += pair_log(seq, k);
    return static_cast<double>(acc - std::log(seq.value_ext(n)));
}

double pi_product(const CoeffSequence& seq, long n) { return std::exp(log_pi_product(seq, n)); }

std::complex<double> mp_pi_limit(double alpha, double eta) {
    require(alpha > 0 && eta > 0, "mp_pi_limit needs alpha > 0 and eta > 0");
    const double lg = (eta - 2.0) * std::log(2.0) + 2.0 * std::lgamma(eta / 2.0) - std::lgamma(eta);
    return {0.0, std::exp(lg) / alpha};
}

std::string to_string(Convergence c) {
    switch (c) {
        case Convergence::FiniteNonzero: return "finite-nonzero";
        case Convergence::Divergent: return "divergent";
        case Convergence::Vanishing: return "vanishing";
        case Convergence::Marginal: return "marginal";
    }
    return "?";
}

CriterionResult convergence_criterion(const std::function<double(double)>& f, const std::function<double(double)>& s,
                                      double n_max) {
    require(n_max >= 64, "convergence_criterion needs n_max >= 64");
    CriterionResult r;
    std::vector<double> inc;
    double acc = 0;
    auto integrand = [&](double t) {
        const double n = std::exp(t);
        return s(n) / f(n) * n;
    };
    for (double lo = 2; lo * 2 <= n_max; lo *= 2) {
        const double d = simpson(integrand, std::log(lo), std::log(2 * lo), 64);
        acc += d;
        inc.push_back(d);
        r.checkpoints.push_back(2 * lo);
        r.accumulated.push_back(acc);
    }
    r.report = classify_increments(inc, 1);
    r.verdict = verdict_from(r.report);
    return r;
}

CriterionResult convergence_criterion(const StaggerDecomposition& split) {
    CriterionResult r;
    std::vector<double> inc;
    double acc = 0;
    const long lo = split.first_index, hi = lo + static_cast<long>(split.f.size()) - 1;
    for (long a = 2; 2 * a - 1 <= hi; a *= 2) {
        if (a < lo) continue;
        double block = 0;
        for (long n = a; n < 2 * a; ++n) block += split.s[n - lo] / split.f[n - lo];
        acc += block;
        inc.push_back(block);
        r.checkpoints.push_back(static_cast<double>(2 * a));
        r.accumulated.push_back(acc);
    }
    r.report = classify_increments(inc, 1);
    r.verdict = verdict_from(r.report);
    return r;
}

SpectralOrigin spectral_origin(const CoeffSequence& seq, long N) {
    require(N >= 2, "spectral_origin needs N >= 2");
    const ProductTrace t = pi_trace(seq, N + 1);
    SpectralOrigin o;
    const double a = t.value(N), b = t.value(N + 1);
    o.raw_n = {0, a};
    o.raw_next = {0, b};
    o.averaged = {0, (a + b) / 2};
    o.spread = std::fabs(a - b) / 2;

    std::vector<double> dlog, davg;
    double prev_log = 0, prev_avg = 0;
    bool first = true;
    for (long n : dyadic_points(N)) {
        const double lg = t.log_value(n);
        const double avg = std::log((t.value(n) + t.value(n + 1)) / 2);
        if (!first) {
            dlog.push_back(lg - prev_log);
            davg.push_back(avg - prev_avg);
        }
        prev_log = lg;
        prev_avg = avg;
        first = false;
    }
    o.trend = verdict_from(classify_increments(dlog, 2));
    o.averaged_cauchy = classify_increments(davg, 2).growth == Growth::Bounded;
    return o;
}

double DiffusionEstimate::averaged_two_d(int steps) const {
    const long n = static_cast<long>(d.size());
    require(steps >= 1 && n >= steps + 1, "not enough diffusion steps to average");
    double s = 0;
    for (long m = n - steps; m < n; ++m) s += (d[m - 1] + d[m]) / 2;
    return 2.0 * s / steps;
}

DiffusionEstimate diffusion_estimate(const CoeffSequence& b, long N, double norm_ratio) {
    require(norm_ratio >= 0, "norm ratio must be nonnegative");
    require(N >= 1, "diffusion_estimate needs N >= 1");
    const ProductTrace t = pi_trace(b, N);
    DiffusionEstimate e;
    e.norm_ratio = norm_ratio;
    e.d.resize(N);
    for (long n = 1; n <= N; ++n) e.d[n - 1] = norm_ratio * t.value(n);
    return e;
}

DiracDeltaResult dirac_delta_test(const CoeffSequence& seq, long N) {
    require(N >= 10, "dirac_delta_test needs N >= 10");
    const ProductTrace t = pi_trace(seq, N);
    DiracDeltaResult r;
    double s = 1.0;  // p_0(0)^2
    r.partial_sums.push_back(s);
    for (long m = 1; 2 * m <= N; ++m) {
        s += std::exp(-t.log_value(2 * m) - std::log(seq(2 * m)));
        r.partial_sums.push_back(s);
    }
    std::vector<double> inc;
    double prev = r.partial_sums[1];
    for (long m = 2; m < static_cast<long>(r.partial_sums.size()); m *= 2) {
        inc.push_back(r.partial_sums[m] - prev);
        prev = r.partial_sums[m];
    }
    r.report = classify_increments(inc, 1);
    r.delta_present = r.report.growth == Growth::Bounded && std::isfinite(s);
    if (r.delta_present) r.weight = 1.0 / s;
    return r;
}

}  // namespace recmeth
