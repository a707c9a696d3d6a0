// End-to-end acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [work_dir]

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "recmeth/cfrac.hpp"
#include "recmeth/experiments.hpp"
#include "recmeth/numerics.hpp"
#include "recmeth/products.hpp"
#include "recmeth/smoothness.hpp"
#include "recmeth/stitching.hpp"

using namespace recmeth;
using cd = std::complex<double>;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Report {
    std::vector<std::string> details;
    bool pass = true;
    void check(bool ok, const std::string& what) {
        pass &= ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int failures = 0;

void emit(int id, const std::string& title, const Report& r) {
    std::cout << "criterion " << id << ' ' << (r.pass ? "PASS" : "FAIL") << ": " << title << "\n";
    for (const auto& d : r.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    failures += !r.pass;
}

template <class F>
void guarded(int id, const std::string& title, F&& body) {
    Report r;
    try {
        body(r);
    } catch (const std::exception& e) {
        r.check(false, std::string("threw: ") + e.what());
    }
    emit(id, title, r);
}

ExperimentResult run(const std::string& name, const fs::path& dir, std::map<std::string, std::string> params = {}) {
    ExperimentSpec s;
    s.name = name;
    s.params = std::move(params);
    s.output_dir = dir.string();
    s.cache_dir = (dir / "cache").string();
    return run_experiment(s);
}

// MP weight, independent of the recurrence: |Gamma(eta/2 + i x/(2 alpha))|^2 in closed form for integer eta
double mp_density(double alpha, int eta, double x) {
    const double b = x / (2 * alpha);
    double a, v;
    if (eta % 2) {
        a = 0.5;
        v = kPi / std::cosh(kPi * b);
    } else {
        a = 1.0;
        v = b == 0 ? 1.0 : kPi * b / std::sinh(kPi * b);
    }
    for (; a < eta / 2.0; a += 1) v *= a * a + b * b;
    return std::pow(2.0, eta - 2) / (kPi * alpha * std::tgamma(eta)) * v;
}

cd quadrature_green(double alpha, int eta, cd z) {
    boost::math::quadrature::sinh_sinh<double> q;
    auto re = [&](double x) { return (mp_density(alpha, eta, x) / (z - x)).real(); };
    auto im = [&](double x) { return (mp_density(alpha, eta, x) / (z - x)).imag(); };
    return {q.integrate(re, 1e-13), q.integrate(im, 1e-13)};
}

template <class Real>
double wronskian_relative(const PolyPair<Real>& pp, long n) {
    const Real scale = pp.b[n + 1] * std::ldexp(Real(1), pp.exponent[n] + pp.exponent[n + 1]) *
                       (std::abs(pp.q[n + 1] * pp.p[n]) + std::abs(pp.q[n] * pp.p[n + 1]));
    return static_cast<double>(std::abs(pp.wronskian(n) - Real(1)) / scale);
}

const SmoothnessCase& find_case(const std::vector<SmoothnessCase>& cs, const std::string& name) {
    for (const auto& c : cs)
        if (c.name == name) return c;
    throw ValidationError("no smoothness case " + name);
}

const json& case_summary(const json& s, const std::string& name) {
    for (const auto& c : s["cases"])
        if (c["case"] == name) return c;
    throw ValidationError("no case " + name + " in summary");
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "recmeth_acceptance";
    fs::create_directories(dir);
    std::cout << "work directory: " << dir.string() << "\n";
    double relevant_limit = NAN;

    guarded(1, "irrelevant toy, MP(1,1) zero-frequency stitching", [&](Report& r) {
        const auto res = run("fig1a", dir);
        const auto& s = res.summary;
        const double err = s["error_at_n_max"], p = s["fit"]["exponent"];
        r.check(err < 1e-4, "|G_N(-i0+)| - pi^2/8 at N = 1e4: " + num(err, 3) + " < 1e-4");
        r.check(std::fabs(p + 2) <= 0.2, "error exponent on [1e2, 1e4]: " + num(p, 4) + " (want -2 +- 0.2)");
    });

    guarded(2, "relevant toy, constant and MP(1,3) stitching", [&](Report& r) {
        const auto res = run("fig1b", dir);
        const auto& s = res.summary;
        const double c = s["const_stitch_at_n_max"], p = s["fit"]["exponent"];
        relevant_limit = s["limit_estimate"];
        r.check(std::fabs(c - 2.8071) <= 1e-3, "constant stitch at N = 1e7: " + num(c, 8) + " (want 2.8071 +- 1e-3)");
        r.check(std::fabs(p + 2.0 / 3) <= 0.1, "MP(1,3) stitch error exponent: " + num(p, 4) + " (want -2/3 +- 0.1)");
        r.details.push_back("     extrapolated limit " + num(relevant_limit, 10));
    });

    guarded(3, "MP product limit", [&](Report& r) {
        for (double alpha : {1.0, 2.0})
            for (int eta : {1, 2, 3}) {
                const double closed = std::pow(2.0, eta - 2) * std::pow(std::tgamma(eta / 2.0), 2) / (alpha * std::tgamma(eta));
                const double pn = pi_product(CoeffSequence::meixner_pollaczek(alpha, eta), 100000);
                const double dev = std::fabs(pn / closed - 1);
                r.check(dev < 1e-3, "alpha=" + num(alpha) + " eta=" + std::to_string(eta) + ": |ratio - 1| = " + num(dev, 3));
            }
    });

    guarded(4, "truncation asymptotics for MP(1,2)", [&](Report& r) {
        const auto res = run("fig3", dir);
        for (const auto& sc : res.summary["scans"]) {
            const double y = sc["im_z"], beta = sc["fit"]["exponent"];
            r.check(std::fabs(beta / -std::fabs(y) - 1) <= 0.1,
                    "Im z = " + num(y) + ": beta = " + num(beta, 5) + " (want " + num(-std::fabs(y)) + " +- 10%)");
        }
        const double slope = res.summary["cross_fit"]["slope"], icpt = res.summary["cross_fit"]["intercept"];
        r.check(std::fabs(slope + 1) <= 0.1, "cross-fit slope " + num(slope, 5) + " (want -1 +- 0.1)");
        r.check(std::fabs(icpt) <= 0.1, "cross-fit intercept " + num(icpt, 3) + " (want 0 +- 0.1)");
    });

    json fig2;
    guarded(5, "Ising coefficients against exact diagonalization", [&](Report& r) {
        const auto res = run("fig2", dir, {{"ed_sites", "12"}});
        fig2 = res.summary;
        const double diff = fig2["ed"]["max_abs_diff"];
        const long window = fig2["ed"]["reliable_window"], steps = fig2["steps_available"];
        r.check(diff <= 1e-10, "max |b_n - b_n(ED, L=12)| over the reliable window: " + num(diff, 3));
        r.check(window >= 5, "reliable window " + std::to_string(window) + " coefficients (want >= 5)");
        IsingModel m;
        const auto entry = cache_coeffs(m, (dir / "cache").string());
        const double gib = double(m.memory_budget) / double(std::size_t{1} << 30);
        r.check(steps >= 20 && entry.metadata.at("status") == "completed",
                std::to_string(steps) + " coefficients, status " + entry.metadata.at("status") + ", budget " + num(gib, 3) +
                    " GiB (want >= 20 within 16 GiB)");
        r.check(gib <= 16, "memory budget within 16 GiB");
    });

    guarded(6, "Ising diffusion consistency band (conjectural)", [&](Report& r) {
        if (fig2.is_null()) throw ValidationError("fig2 did not run");
        const double avg = fig2["averaged_2D"];
        r.check(std::fabs(avg / 3.35 - 1) <= 0.2,
                "two-parity averaged 2D over the last " + std::to_string(int(fig2["average_steps"])) +
                    " steps: " + num(avg, 5) + " (band 3.35 +- 20%)");
        r.details.push_back("     conjectural: assumes the zero-frequency product limit exists");
    });

    guarded(7, "property suite", [&](Report& r) {
        const std::vector<CoeffSequence> seqs = {CoeffSequence::meixner_pollaczek(1, 2), CoeffSequence::toy_irrelevant(),
                                                 CoeffSequence::toy_relevant(), CoeffSequence::freud_like(),
                                                 parse_sequence_spec("ogh1d:alpha=1,gamma=1,stagger=0.1,decay=3")};
        {
            double abs_w = 0, rel_w = 0;
            const cd mild[] = {{0, -1}, {0.7, -0.3}, {-3, -1}, {0, -0.05}, {0, -0.5}};
            for (int i = 0; i < 3; ++i)
                for (cd z : mild) {
                    auto pp = poly_eval<double>(seqs[i], z, 200);
                    for (long n = 0; n < 200; ++n) abs_w = std::max(abs_w, std::abs(pp.wronskian(n) - 1.0));
                }
            for (const auto& s : seqs)
                for (cd z : {cd(0, -1), cd(0, -2), cd(0.7, -0.3), cd(-3, -1), cd(0, -0.05)}) {
                    auto pp = poly_eval<double>(s, z, 200);
                    for (long n = 0; n < 200; ++n) rel_w = std::max(rel_w, wronskian_relative(pp, n));
                }
            r.check(abs_w < 1e-12, "Wronskian |W - 1| for N <= 200 where |p_N| = O(1): " + num(abs_w, 3));
            r.check(rel_w < 1e-12, "Wronskian residual relative to the cancelling products: " + num(rel_w, 3));
        }
        {
            double worst = 0;
            int columns = 0;
            DescentOptions loose;
            loose.tol = 1e-7;
            for (std::size_t i = 0; i < 4; ++i)
                for (double y : {0.1, 0.5, 1.0, 3.0}) {
                    // staggered tails make the small-y descent too slow; see the notes in the README
                    if (i >= 2 && y < 1) continue;
                    auto col = cauchy_column_stable<double>(seqs[i], cd(0, -y), 150, i >= 2 ? loose : DescentOptions{});
                    worst = std::max({worst, col.max_imag_violation, col.max_sign_violation});
                    ++columns;
                }
            r.check(worst <= 1e-8, "Cauchy phase over " + std::to_string(columns) + " (sequence, y) columns, n <= 150: worst " +
                                       num(worst, 3));
        }
        {
            double worst = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                const auto jets = poly_jets<double>(seqs[i], 1000, 0);
                const auto t = pi_trace(seqs[i], 1000);
                for (long n = 1; 2 * n <= 1000; ++n) {
                    const double p = jets.p[2 * n][0];
                    worst = std::max(worst, std::fabs(seqs[i](2 * n) * t.value(2 * n) * p * p - 1));
                }
            }
            r.check(worst < 1e-10, "b_2n Pi_2n p_2n(0)^2 = 1 for 2n <= 1000: " + num(worst, 3));
        }
        {
            double worst = 0;
            for (std::size_t i = 0; i < 4; ++i)
                for (int m = 1; m <= 4; ++m)
                    for (long n : {2L, 3L, 10L, 57L, 200L}) worst = std::max(worst, christoffel_darboux_check(seqs[i], n, m));
            r.check(worst < 1e-8, "generalized Christoffel-Darboux, m <= 4, n <= 200: " + num(worst, 3));
        }
        {
            struct Toy {
                const char* name;
                CoeffSequence b, s;
                double eta;
                double limit;
            };
            const double rel = std::isfinite(relevant_limit) ? relevant_limit : 2.8071034011;
            const Toy toys[] = {{"irrelevant toy vs MP(1,1)", CoeffSequence::toy_irrelevant(),
                                 CoeffSequence::meixner_pollaczek(1, 1), 1.0, kPi * kPi / 8},
                                {"relevant toy vs MP(1,3)", CoeffSequence::toy_relevant(),
                                 CoeffSequence::meixner_pollaczek(1, 3), 3.0, rel}};
            for (const auto& toy : toys) {
                auto err = [&](long N) { return std::fabs(std::abs(zero_freq_stitched(toy.b, StitchPlan::mp(N, 1, toy.eta))) - toy.limit); };
                const long n0 = 100;
                const double M = calibrate_zero_freq_m(error_bound_zero_freq(toy.b, toy.s, n0, 64 * n0, 1.0), err(n0));
                double worst_ratio = INFINITY;
                long worst_n = 0;
                for (long N : {100L, 300L, 1000L, 3000L, 10000L}) {
                    const double ratio = error_bound_zero_freq(toy.b, toy.s, N, 64 * N, M).value / err(N);
                    if (ratio < worst_ratio) {
                        worst_ratio = ratio;
                        worst_n = N;
                    }
                }
                r.check(worst_ratio >= 1 - 1e-9, std::string("zero-frequency bound, M calibrated at N = 100, ") + toy.name +
                                                     ": min bound/error " + num(worst_ratio, 4) + " at N = " +
                                                     std::to_string(worst_n));
            }
        }
        {
            struct Pt {
                double alpha;
                int eta;
                cd z;
            };
            const Pt pts[] = {{1, 2, {0, -1}},   {1, 2, {0, -2}},   {1, 2, {0, -0.5}},  {1, 2, {1, -1}},  {1, 2, {-2, -0.7}},
                              {1, 1, {0, -1}},   {1, 1, {0.5, -0.3}}, {2, 3, {0, -1}}, {2, 3, {3, -2}}, {0.5, 4, {1, -0.5}}};
            double worst = 0;
            for (const auto& p : pts)
                worst = std::max(worst, std::abs(descent_green<double>(CoeffSequence::meixner_pollaczek(p.alpha, p.eta), p.z).value -
                                                 quadrature_green(p.alpha, p.eta, p.z)));
            r.check(worst < 1e-8, "descent vs MP quadrature at 10 points: " + num(worst, 3));
        }
    });

    guarded(8, "smoothness at the origin", [&](Report& r) {
        const auto cases = builtin_smoothness_cases();
        {
            const auto& c = find_case(cases, "d1-case1");
            const auto d = derivative_scaling(c.seq, 1, log_grid(1e3, 1e6, 19), true, c.dimension);
            std::vector<double> t;
            for (double x : d.series.x) t.push_back(std::log(x));
            const LineFit lf = fit_line(t, d.series.y);
            r.check(lf.r2 > 0.99, "d=1 case 1: G^(1) against log n on [1e3, 1e6], R^2 = " + num(lf.r2, 8));
            r.check(d.best.model == ScalingModel::LogPower && std::fabs(d.best.exponent - 1) <= 0.15,
                    "d=1 case 1: G^(1) classified " + to_string(d.best.model) + " p = " + num(d.best.exponent, 4));
        }
        const json f4 = run("fig4", dir).summary, f5 = run("fig5", dir).summary;
        {
            const auto& a = case_summary(f4, "d1-case2");
            r.check(a["best"]["model"] == "plateau", "d=1 case 2: G^(1) classified " + a["best"]["model"].get<std::string>());
            const auto& b = case_summary(f5, "d1-case2");
            const double p = b["best"]["exponent"];
            r.check(b["best"]["model"] == "log-power" && std::fabs(p - 1) <= 0.15,
                    "d=1 case 2: G^(2) classified " + b["best"]["model"].get<std::string>() + " p = " + num(p, 4) +
                        " on [1e4, 1e7] (want log n)");
            r.details.push_back("     d=1 case 2 G^(2): dlog-slope " + num(b["tail"]["log_slope_previous_decade"], 5) + " then " +
                                num(b["tail"]["log_slope_last_decade"], 5) + " over the last two decades");
        }
        for (const auto& [fig, k, want] : {std::tuple{&f4, 1, 0.5}, std::tuple{&f5, 2, 1.5}}) {
            const auto& c = case_summary(*fig, "dn-case2");
            const double p = c["best"]["exponent"];
            const double tol = k == 1 ? 0.1 : 0.15;
            r.check(c["best"]["model"] == "log-power" && std::fabs(p - want) <= tol,
                    "d>1 case 2: G^(" + std::to_string(k) + ") exponent " + num(p, 4) + " (want " + num(want) + " +- " +
                        num(tol) + ")");
        }
        {
            const auto direct = smoothness_criterion(log_power_profile(2.0, 0.25), Dimension::Higher, 1);
            r.check(direct.verdict == SmoothnessVerdict::Holds && first_divergent_order(log_power_profile(2.0, 0.25), Dimension::Higher) == 1,
                    "Freud staggering (2 log n)^-2: criterion holds at k = 1");
            std::vector<double> v;
            const auto fr = CoeffSequence::freud_like();
            for (long n = 1; n <= 1 << 18; ++n) v.push_back(fr(n));
            double a = 0;
            const auto numeric = smoothness_criterion(decompose_stagger(v, 1), Dimension::Higher, 1, &a);
            r.check(numeric.verdict == SmoothnessVerdict::Holds,
                    "Freud from the numerical split: fitted decay " + num(a, 4) + ", verdict " + to_string(numeric.verdict));
        }
    });

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failures ? 1 : 0;
}
