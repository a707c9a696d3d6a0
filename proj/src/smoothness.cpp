#include "recmeth/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace recmeth {

std::string to_string(ScalingModel m) {
    switch (m) {
        case ScalingModel::LogPower: return "log-power";
        case ScalingModel::LogLog: return "log-log";
        case ScalingModel::Plateau: return "plateau";
        case ScalingModel::PowerLaw: return "power-law";
    }
    return "?";
}

std::string to_string(SmoothnessVerdict v) {
    switch (v) {
        case SmoothnessVerdict::Holds: return "holds";
        case SmoothnessVerdict::Inconsistent: return "inconsistent";
        case SmoothnessVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

void check_series(const ExperimentSeries& s) {
    require(s.x.size() == s.y.size(), "series x and y differ in length");
    require(s.x.size() >= 6, "rate fit needs at least 6 points");
    const auto [lo, hi] = std::minmax_element(s.x.begin(), s.x.end());
    require(*lo > 0 && std::log10(*hi / *lo) >= 1.5, "rate fit needs at least 1.5 decades in x");
}

bool monotone(const std::vector<double>& y) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < y.size(); ++i) {
        up &= y[i] >= y[i - 1];
        down &= y[i] <= y[i - 1];
    }
    return up || down;
}

struct LinearLsq {
    Eigen::VectorXd coef;
    double r2 = 0.0;
};

LinearLsq least_squares(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    const Eigen::Index m = static_cast<Eigen::Index>(y.size()), k = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd A(m, k);
    Eigen::VectorXd Y(m), scale(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) A(i, j) = cols[j][i];
        scale(j) = A.col(j).norm();
        if (scale(j) == 0) scale(j) = 1;
        A.col(j) /= scale(j);
    }
    for (Eigen::Index i = 0; i < m; ++i) Y(i) = y[i];
    LinearLsq out;
    out.coef = A.colPivHouseholderQr().solve(Y).cwiseQuotient(scale);
    const Eigen::VectorXd resid = Y - A * out.coef.cwiseProduct(scale);
    const double mean = Y.mean();
    const double tot = (Y.array() - mean).square().sum();
    out.r2 = tot > 0 ? std::clamp(1.0 - resid.squaredNorm() / tot, 0.0, 1.0) : 1.0;
    return out;
}

}  // namespace

ScalingFit rate_fit(const ExperimentSeries& series, RateFamily family) {
    check_series(series);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        require(series.y[i] != 0, "rate fit cannot take log of a zero value");
        const double x = std::log(series.x[i]);
        lx.push_back(family == RateFamily::PowerLaw ? x : std::log(x));
        ly.push_back(std::log(std::fabs(series.y[i])));
    }
    const LineFit f = fit_line(lx, ly);
    ScalingFit out;
    out.model = family == RateFamily::PowerLaw ? ScalingModel::PowerLaw : ScalingModel::LogPower;
    out.exponent = f.slope;
    out.amplitude = std::exp(f.intercept);
    out.r2 = std::clamp(f.r2, 0.0, 1.0);
    out.x_lo = *std::min_element(series.x.begin(), series.x.end());
    out.x_hi = *std::max_element(series.x.begin(), series.x.end());
    std::vector<double> mags;
    for (double v : series.y) mags.push_back(std::fabs(v));
    out.non_monotone = !monotone(mags);
    return out;
}

namespace {

// y = A t^p + B + [D t^c], t = log x, with p scanned on a coarse grid then refined.
ScalingFit offset_fit(const ExperimentSeries& s, double p_lo, double p_hi, double correction) {
    std::vector<double> t;
    for (double x : s.x) t.push_back(std::log(x));
    auto fit_at = [&](double p) {
        std::vector<std::vector<double>> cols(2);
        for (double v : t) {
            cols[0].push_back(std::pow(v, p));
            cols[1].push_back(1.0);
        }
        if (correction > 0 && correction < p - 0.05) {
            cols.emplace_back();
            for (double v : t) cols.back().push_back(std::pow(v, correction));
        }
        return least_squares(cols, s.y);
    };
    double best_p = p_lo, best_r2 = -1;
    const int coarse = 400;
    for (int i = 0; i <= coarse; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / coarse;
        const double r2 = fit_at(p).r2;
        if (r2 > best_r2) {
            best_r2 = r2;
            best_p = p;
        }
    }
    // golden-section refinement in the neighbouring cells
    double a = std::max(p_lo, best_p - (p_hi - p_lo) / coarse), b = std::min(p_hi, best_p + (p_hi - p_lo) / coarse);
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 40 && b - a > 1e-7; ++it) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (fit_at(c).r2 >= fit_at(d).r2)
            b = d;
        else
            a = c;
    }
    const double p = p_hi > p_lo ? (a + b) / 2 : p_lo;
    const LinearLsq f = fit_at(p);
    ScalingFit out;
    out.model = ScalingModel::LogPower;
    out.exponent = p;
    out.amplitude = f.coef(0);
    out.offset = f.coef(1);
    out.r2 = f.r2;
    out.x_lo = s.x.front();
    out.x_hi = s.x.back();
    out.non_monotone = !monotone(s.y);
    return out;
}

}  // namespace

ScalingFit log_power_offset_fit(const ExperimentSeries& series, double p_lo, double p_hi) {
    check_series(series);
    require(p_lo <= p_hi, "empty exponent range");
    return offset_fit(series, p_lo, p_hi, 0.0);
}

std::vector<long> log_grid(double lo, double hi, int points) {
    require(lo >= 1 && hi > lo && points >= 2, "log grid needs 1 <= lo < hi and >= 2 points");
    std::vector<long> out;
    for (int i = 0; i < points; ++i) {
        const long n = std::lround(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

namespace {

template <class Real>
void stream_jets(const CoeffSequence& seq, int k, const std::vector<long>& grid, DerivativeScaling& out) {
    JetRecurrence<Real> rec(seq, k);
    for (long n : grid) {
        while (rec.index() < 2 * n) rec.step();
        const GreenJet<Real> j = detail::green_jet_from(rec);
        out.series.x.push_back(static_cast<double>(n));
        out.series.y.push_back(static_cast<double>(j.derivative(k)));
        out.max_parity_violation = std::max(out.max_parity_violation, j.parity_violation);
    }
}

}  // namespace

DerivativeScaling derivative_scaling(const CoeffSequence& seq, int k, const std::vector<long>& n_grid, bool extended,
                                     Dimension dim) {
    require(k >= 0 && k <= 8, "derivative order must be in [0, 8]");
    require(!n_grid.empty() && std::is_sorted(n_grid.begin(), n_grid.end()) && n_grid.front() >= 1,
            "n_grid must be sorted and positive");
    DerivativeScaling out;
    out.series.name = "G^(" + std::to_string(k) + ")(0;2n)";
    if (extended)
        stream_jets<long double>(seq, k, n_grid, out);
    else
        stream_jets<double>(seq, k, n_grid, out);
    DerivativeScaling fitted = fit_derivative_series(out.series, k, dim);
    fitted.max_parity_violation = out.max_parity_violation;
    return fitted;
}

DerivativeScaling fit_derivative_series(const ExperimentSeries& series, int k, Dimension dim) {
    DerivativeScaling out;
    out.k = k;
    out.series = series;
    if (out.series.x.size() < 6 || std::log10(out.series.x.back() / out.series.x.front()) < 1.5) {
        out.note = "window too short for a scaling fit";
        return out;
    }

    const auto& y = out.series.y;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    const double spread = (*hi - *lo) / std::max(std::fabs(mean), 1e-300);

    // the prefactor's lower-limit constant leaves a (log n)^(m(k-1)) term
    const double correction = (dim == Dimension::One ? 2.0 : 1.0) * (k - 1);
    ScalingFit lp = offset_fit(out.series, -2.0, 4.0, correction);
    out.candidates.push_back(lp);

    std::vector<double> llx;
    for (double x : out.series.x) llx.push_back(std::log(std::log(x)));
    const LineFit ll = fit_line(llx, y);
    ScalingFit llf;
    llf.model = ScalingModel::LogLog;
    llf.exponent = 1.0;
    llf.amplitude = ll.slope;
    llf.offset = ll.intercept;
    llf.r2 = std::clamp(ll.r2, 0.0, 1.0);
    llf.x_lo = out.series.x.front();
    llf.x_hi = out.series.x.back();
    llf.non_monotone = !monotone(y);
    out.candidates.push_back(llf);

    ScalingFit plateau;
    plateau.model = ScalingModel::Plateau;
    plateau.exponent = 0.0;
    plateau.offset = mean;
    plateau.r2 = std::clamp(1.0 - spread, 0.0, 1.0);
    plateau.x_lo = llf.x_lo;
    plateau.x_hi = llf.x_hi;
    plateau.non_monotone = llf.non_monotone;
    out.candidates.push_back(plateau);

    bool signs_agree = true;
    for (double v : y) signs_agree &= v != 0 && (v > 0) == (y.front() > 0);
    if (signs_agree) out.candidates.push_back(rate_fit(out.series, RateFamily::PowerLaw));

    if (spread < 1e-2) {
        out.best = plateau;
        out.note = "bounded: relative spread " + std::to_string(spread);
    } else if (lp.exponent < 0.3) {
        out.best = llf;
        out.ambiguous = true;
        out.note = "slow sub-logarithmic growth; log log n and plateau not resolved on this window";
    } else {
        out.best = lp;
        for (const auto& c : out.candidates)
            if (c.r2 > out.best.r2 && c.model != ScalingModel::Plateau) out.best = c;
        if (out.best.model == ScalingModel::LogPower && lp.exponent > 4.0 - 1e-3)
            out.note = "log-power exponent pinned at the scan bound 4; window likely pre-asymptotic";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criterion on the double integral, in t = log n.

StaggerProfile log_power_profile(double a, double scale) {
    return [a, scale](double t) { return scale * std::pow(t, -a); };
}

namespace {

constexpr int kPerOctave = 64;  // grid nodes per doubling of t
constexpr int kOctaves = 64;    // checkpoints t = 2^1 .. 2^64
constexpr int kMargin = 8;      // extra octaves so the tail seed does not reach the checkpoints

// One level of integration in t on the log-uniform grid u = log t.
// Integrable integrands are replaced by minus their tail integral, otherwise integrated from t = 1.
std::vector<double> integrate_level(const std::vector<double>& t, const std::vector<double>& f, double h) {
    const std::size_t m = t.size();
    std::vector<double> g(m);  // integrand in u: f(t) t
    for (std::size_t i = 0; i < m; ++i) g[i] = f[i] * t[i];

    const std::size_t back = m - m / 10;
    bool integrable = false;
    double kappa = 0;
    if (g[back] != 0 && g[m - 1] != 0 && (g[back] > 0) == (g[m - 1] > 0)) {
        // |f| ~ t^-kappa over the last tenth
        kappa = 1.0 - std::log(std::fabs(g[m - 1] / g[back])) / std::log(t[m - 1] / t[back]);
        integrable = kappa > 1.0 + 1e-3;
    }
    std::vector<double> out(m);
    if (integrable) {
        // geometric continuation of the last ratio, summed with the same trapezoid rule
        const double r = g[m - 1] / g[m - 2];
        double acc = 0.5 * h * g[m - 1] * (1.0 + r) / (1.0 - r);
        out[m - 1] = -acc;
        for (std::size_t i = m - 1; i-- > 0;) {
            acc += 0.5 * h * (g[i] + g[i + 1]);
            out[i] = -acc;
        }
    } else {
        double acc = 0;
        out[0] = 0;
        for (std::size_t i = 1; i < m; ++i) {
            acc += 0.5 * h * (g[i - 1] + g[i]);
            out[i] = acc;
        }
    }
    return out;
}

struct DoubleIntegral {
    std::vector<double> t;
    std::vector<double> F;
};

DoubleIntegral double_integral(const StaggerProfile& s, Dimension dim) {
    const std::size_t m = static_cast<std::size_t>(kPerOctave) * (kOctaves + kMargin) + 1;
    const double h = std::log(2.0) / kPerOctave;
    DoubleIntegral d;
    d.t.resize(m);
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) {
        d.t[i] = std::exp(h * static_cast<double>(i));
        const double w = dim == Dimension::One ? d.t[i] : 1.0;
        f[i] = s(d.t[i]) * w;
    }
    std::vector<double> inner = integrate_level(d.t, f, h);
    if (dim == Dimension::One)
        for (std::size_t i = 0; i < m; ++i) inner[i] *= d.t[i];
    d.F = integrate_level(d.t, inner, h);
    return d;
}

Growth classify_values(const std::vector<double>& v) {
    // first entry counts from zero so the increment floor scales with the values themselves
    std::vector<double> inc{v.front()};
    for (std::size_t j = 1; j < v.size(); ++j) inc.push_back(v[j] - v[j - 1]);
    return classify_increments(inc, 1).growth;
}

}  // namespace

SmoothnessReport smoothness_criterion(const StaggerProfile& s, Dimension dim, int k) {
    require(k >= 1, "derivative order must be >= 1");
    const DoubleIntegral d = double_integral(s, dim);
    const double m = dim == Dimension::One ? 2.0 : 1.0;
    SmoothnessReport r;
    r.k = k;
    for (int j = 1; j <= kOctaves; ++j) {
        const std::size_t i = static_cast<std::size_t>(j) * kPerOctave;
        const double t = d.t[i];
        r.checkpoints_t.push_back(t);
        r.kth_values.push_back(std::pow(t, m * (k - 1)) * d.F[i]);
        r.previous_values.push_back(std::pow(t, m * (k - 2)) * d.F[i]);
    }
    // increments are taken in |value| so the sign of the lower-limit choice does not matter
    std::vector<double> a, b;
    for (double v : r.kth_values) a.push_back(std::fabs(v));
    for (double v : r.previous_values) b.push_back(std::fabs(v));
    r.kth = classify_values(a);
    r.previous = classify_values(b);
    if (r.kth == Growth::Divergent && r.previous == Growth::Bounded)
        r.verdict = SmoothnessVerdict::Holds;
    else if (r.kth == Growth::Bounded || r.previous == Growth::Divergent)
        r.verdict = SmoothnessVerdict::Inconsistent;
    else
        r.verdict = SmoothnessVerdict::Indeterminate;
    return r;
}

SmoothnessReport smoothness_criterion(const StaggerDecomposition& split, Dimension dim, int k, double* fitted_a) {
    std::vector<double> x, y;
    const long lo = split.first_index;
    for (std::size_t i = 0; i < split.s.size(); ++i) {
        const double n = static_cast<double>(lo + static_cast<long>(i));
        if (n < 16 || split.s[i] == 0) continue;
        x.push_back(std::log(std::log(n)));
        y.push_back(std::log(std::fabs(split.s[i])));
    }
    require(x.size() >= 8, "stagger split too short to fit a log-power decay");
    const LineFit f = fit_line(x, y);
    const double a = -f.slope;
    if (fitted_a) *fitted_a = a;
    return smoothness_criterion(log_power_profile(a, std::exp(f.intercept)), dim, k);
}

std::optional<int> first_divergent_order(const StaggerProfile& s, Dimension dim, int k_max) {
    for (int k = 1; k <= k_max; ++k)
        if (smoothness_criterion(s, dim, k).verdict == SmoothnessVerdict::Holds) return k;
    return std::nullopt;
}

std::optional<int> predicted_order(double a, Dimension dim) {
    if (dim == Dimension::Higher) {
        if (a <= 1) return std::nullopt;
        if (a <= 2) return 1;
        if (a < 3) return 2;
        return static_cast<int>(std::floor(a));
    }
    if (a <= 2) return std::nullopt;
    if (a <= 4) return 1;
    if (a < 6) return 2;
    return static_cast<int>(std::floor(a / 2));
}

std::vector<SmoothnessCase> builtin_smoothness_cases() {
    return {
        {"d1-case1", CoeffSequence(OghOneD{1.0, 1.0, 0.1, 3.0}), Dimension::One, 3.0, predicted_order(3.0, Dimension::One)},
        {"d1-case2", CoeffSequence(OghOneD{1.0, 0.0, 1.0 / 12, 5.0}), Dimension::One, 5.0,
         predicted_order(5.0, Dimension::One)},
        {"dn-case1", CoeffSequence(OghLinear{1.0, 1.0, 0.25, 2.0}), Dimension::Higher, 2.0,
         predicted_order(2.0, Dimension::Higher)},
        {"dn-case2", CoeffSequence(OghLinear{1.0, 1.0, 0.1, 1.5}), Dimension::Higher, 1.5,
         predicted_order(1.5, Dimension::Higher)},
        {"freud", CoeffSequence::freud_like(), Dimension::Higher, 2.0, predicted_order(2.0, Dimension::Higher)},
    };
}

double christoffel_darboux_check(const CoeffSequence& seq, long n, int m) {
    require(n >= 2 && m >= 0, "christoffel_darboux_check needs n >= 2 and m >= 0");
    const auto jets = poly_jets<long double>(seq, n + 1, m + 1);
    long double fact_m = 1;
    for (int j = 2; j <= m; ++j) fact_m *= j;
    const long double fact_m1 = fact_m * (m + 1);
    const long double fact_mm = m >= 1 ? fact_m / m : 1;
    auto u = [&](long j) { return fact_m * jets.p[j][m]; };
    auto du = [&](long j) { return fact_m1 * jets.p[j][m + 1]; };
    auto v = [&](long j) { return m >= 1 ? fact_mm * jets.p[j][m - 1] : 0.0L; };

    const long double lhs = seq.value_ext(n + 1) * (du(n + 1) * u(n) - u(n + 1) * du(n));
    long double rhs = 0;
    for (long j = 0; j <= n; ++j) rhs += (m + 1) * u(j) * u(j) - m * v(j) * du(j);
    const long double scale = std::max(std::fabs(lhs), std::fabs(rhs));
    if (scale == 0) return 0.0;
    return static_cast<double>(std::fabs(lhs - rhs) / scale);
}

}  // namespace recmeth
