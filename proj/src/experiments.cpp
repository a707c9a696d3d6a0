#include "recmeth/experiments.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "recmeth/ed_oracle.hpp"
#include "recmeth/products.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace recmeth {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t w = std::min<std::size_t>(std::max(workers, 1), count);
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::string IsingModel::canonical() const {
    return "mixed-field-ising;gz=" + fmt17(gz) + ";gx=" + fmt17(gx) + ";steps=" + std::to_string(steps) +
           ";prune=" + fmt17(prune);
}

IsingSeed ising_seed(const IsingModel& m) {
    const SpinHamiltonian h = m.hamiltonian();
    const EnergyCurrent cur = energy_current(h);
    IsingSeed s;
    s.norm_ratio = current_norm_ratio(h, cur.j);
    s.o0 = cur.j.scaled(1.0 / std::sqrt(cur.j.norm2()));
    return s;
}

std::string cache_key(const IsingModel& m) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(m.canonical()));
    return buf;
}

CoeffCacheEntry cache_coeffs(const IsingModel& m, const std::string& cache_dir) {
    require(m.steps >= 1, "steps must be >= 1");
    CoeffCacheEntry e;
    e.key = cache_key(m);
    fs::create_directories(cache_dir);
    e.path = (fs::path(cache_dir) / (e.key + ".coeffs")).string();
    if (fs::exists(e.path)) {
        try {
            CoeffTable t = read_coeff_table(e.path);
            if (t.header["model"] != m.canonical()) throw ValidationError("metadata does not match the requested model");
            e.b = std::move(t.values);
            e.metadata = std::move(t.header);
            e.cache_hit = true;
            return e;
        } catch (const std::exception& ex) {
            e.warning = std::string("rejected cache file ") + e.path + ": " + ex.what() + "; recomputing";
            std::cerr << "warning: " << e.warning << "\n";
        }
    }
    const IsingSeed seed = ising_seed(m);
    LanczosOptions opt;
    opt.prune_threshold = m.prune;
    opt.memory_budget = m.memory_budget;
    const LanczosRun run = lanczos_run(m.hamiltonian(), seed.o0, m.steps, opt);
    require(!run.b.empty(), "Lanczos produced no coefficients: " + run.message);
    CoeffTable t;
    t.values = run.b;
    t.header["model"] = m.canonical();
    t.header["key"] = e.key;
    t.header["status"] = to_string(run.status);
    t.header["approximate"] = run.approximate ? "true" : "false";
    t.header["norm_ratio"] = fmt17(seed.norm_ratio);
    t.header["max_overlap"] = fmt17(run.max_overlap);
    write_coeff_table(e.path, t);
    e.b = run.b;
    e.metadata = read_coeff_table(e.path).header;
    return e;
}

ZeroFreqSeries zero_freq_series(const CoeffSequence& b, const Terminator& t, const std::vector<long>& grid) {
    require(!grid.empty() && std::is_sorted(grid.begin(), grid.end()) && grid.front() >= 2,
            "grid must be sorted with N >= 2");
    const auto* mp = std::get_if<MpTerminator>(&t);
    const CoeffSequence s = mp ? CoeffSequence::meixner_pollaczek(mp->alpha, mp->eta) : b;
    const double gs = mp ? mp_pi_limit(mp->alpha, mp->eta).imag() : 0.0;
    ZeroFreqSeries out;
    long double acc_b = 0, acc_s = 0;
    long k = 0;
    for (long N : grid) {
        for (; k < N / 2; ++k) {
            acc_b += pair_log(b, k + 1);
            if (mp) acc_s += pair_log(s, k + 1);
        }
        const long double log_b = std::log(b.value_ext(N));
        const long double log_pi = acc_b - log_b;
        double v;
        if (mp) {
            const long double log_s = std::log(s.value_ext(N));
            const long double parity = N % 2 == 0 ? 1.0L : -1.0L;
            v = gs * static_cast<double>(std::exp(parity * (log_b - log_s) - (acc_s - log_s) + log_pi));
        } else {
            v = static_cast<double>(std::exp(log_pi));
        }
        out.N.push_back(N);
        out.value.push_back(v);
    }
    return out;
}

TruncationScan truncation_scan(const CoeffSequence& seq, double im_z, const std::vector<long>& grid, int workers) {
    require(im_z < 0, "truncation scan uses Im z < 0");
    TruncationScan out;
    out.im_z = im_z;
    const Complex<long double> z(0, im_z);
    DescentOptions opt;
    opt.tol = 1e-17;
    opt.max_depth = 1L << 24;
    const auto ref = descent_green<long double>(seq, z, 0, opt).value;
    out.reference_imag = static_cast<double>(ref.imag());
    out.N = grid;
    out.error.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        out.error[i] = static_cast<double>(std::abs(truncated_green<long double>(seq, z, grid[i]) - ref));
    });
    ExperimentSeries s{"truncation error", {}, out.error};
    for (long n : grid) s.x.push_back(static_cast<double>(n));
    out.fit = rate_fit(s, RateFamily::PowerLaw);
    return out;
}

double aitken_limit(double a, double b, double c) {
    const double den = (c - b) - (b - a);
    if (den == 0) return c;
    return c - (c - b) * (c - b) / den;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    require(header.size() == columns.size(), "csv header and column count differ");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << fmt17(columns[j][i]);
        out << "\n";
    }
}

// ---------------------------------------------------------------------------

namespace {

struct Params {
    const std::map<std::string, std::string>& p;
    double num(const std::string& k, double def) const {
        auto it = p.find(k);
        if (it == p.end()) return def;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(k);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("parameter " + k + " is not a number: " + it->second);
        }
    }
    long integer(const std::string& k, long def) const { return std::lround(num(k, static_cast<double>(def))); }
    std::string str(const std::string& k, const std::string& def) const {
        auto it = p.find(k);
        return it == p.end() ? def : it->second;
    }
};

json fit_json(const ScalingFit& f) {
    return {{"model", to_string(f.model)}, {"exponent", f.exponent}, {"amplitude", f.amplitude},
            {"offset", f.offset},          {"r2", f.r2},             {"x_lo", f.x_lo},
            {"x_hi", f.x_hi},              {"non_monotone", f.non_monotone}};
}

ExperimentSeries window(const std::vector<long>& n, const std::vector<double>& y, double lo, double hi) {
    ExperimentSeries s;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] >= lo && n[i] <= hi) {
            s.x.push_back(static_cast<double>(n[i]));
            s.y.push_back(y[i]);
        }
    return s;
}

std::string out_path(const ExperimentSpec& spec, const std::string& file) {
    return (fs::path(spec.output_dir) / file).string();
}

ExperimentResult fig1a(const ExperimentSpec& spec) {
    const Params P{spec.params};
    const long n_max = P.integer("n_max", 10000);
    const auto grid = log_grid(P.num("n_min", 100), static_cast<double>(n_max), P.integer("points", 21));
    const CoeffSequence b = CoeffSequence::toy_irrelevant();
    const double ref = M_PI * M_PI / 8;
    const auto mp = zero_freq_series(b, MpTerminator{P.num("alpha", 1), P.num("eta", 1)}, grid);
    const auto cst = zero_freq_series(b, ConstantTerminator{}, grid);
    std::vector<double> n, emp, ecst;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        n.push_back(static_cast<double>(grid[i]));
        emp.push_back(std::fabs(mp.value[i] - ref));
        ecst.push_back(std::fabs(cst.value[i] - ref));
    }
    ExperimentResult r;
    r.name = "fig1a";
    r.files.push_back(out_path(spec, "fig1a.csv"));
    write_csv(r.files.back(), {"N", "mp_stitch", "const_stitch", "mp_error", "const_error"},
              {n, mp.value, cst.value, emp, ecst});
    const ScalingFit f = rate_fit(ExperimentSeries{"mp error", n, emp}, RateFamily::PowerLaw);
    const double last_err = emp.back();
    r.pass = std::fabs(f.exponent + 2) <= 0.2 && last_err < 1e-4;
    r.summary = {{"sequence", b.describe()},
                 {"terminator", "mp alpha=1 eta=1"},
                 {"reference", ref},
                 {"reference_note", "pi^2/8 closed form"},
                 {"error_at_n_max", last_err},
                 {"fit", fit_json(f)},
                 {"expected_exponent", -2.0},
                 {"tolerance", 0.2}};
    return r;
}

ExperimentResult fig1b(const ExperimentSpec& spec) {
    const Params P{spec.params};
    const long n_max = P.integer("n_max", 10000000);
    require(n_max >= 1000, "fig1b needs n_max >= 1000");
    const double fit_lo = P.num("fit_lo", 100), fit_hi = P.num("fit_hi", 10000);
    std::vector<long> grid = log_grid(100, static_cast<double>(n_max), P.integer("points", 26));
    // the three Aitken points and the parity partner of the last
    for (long extra : {n_max / 100, n_max / 10, n_max, n_max + 1}) grid.push_back(extra);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const CoeffSequence b = CoeffSequence::toy_relevant();
    const MpTerminator term{P.num("alpha", 1), P.num("eta", 3)};
    const auto mp = zero_freq_series(b, term, grid);
    const auto cst = zero_freq_series(b, ConstantTerminator{}, grid);
    auto at = [&](const ZeroFreqSeries& s, long N) {
        return s.value[std::lower_bound(s.N.begin(), s.N.end(), N) - s.N.begin()];
    };
    const double limit = aitken_limit(at(mp, n_max / 100), at(mp, n_max / 10), at(mp, n_max));
    const double cst_last = at(cst, n_max), cst_avg = (cst_last + at(cst, n_max + 1)) / 2;

    std::vector<double> n, emp, ecst;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        n.push_back(static_cast<double>(grid[i]));
        emp.push_back(std::fabs(mp.value[i] - limit));
        ecst.push_back(std::fabs(cst.value[i] - limit));
    }
    ExperimentResult r;
    r.name = "fig1b";
    r.files.push_back(out_path(spec, "fig1b.csv"));
    write_csv(r.files.back(), {"N", "mp_stitch", "const_stitch", "mp_error", "const_error"},
              {n, mp.value, cst.value, emp, ecst});
    std::vector<long> gl(grid.begin(), grid.end());
    const ScalingFit f = rate_fit(window(gl, emp, fit_lo, fit_hi), RateFamily::PowerLaw);
    r.pass = std::fabs(cst_last - 2.8071) <= 1e-3 && std::fabs(f.exponent + 2.0 / 3) <= 0.1;
    r.summary = {{"sequence", b.describe()},
                 {"terminator", "mp alpha=" + fmt17(term.alpha) + " eta=" + fmt17(term.eta)},
                 {"const_stitch_at_n_max", cst_last},
                 {"const_stitch_two_parity_mean", cst_avg},
                 {"reference_magnitude", 2.8071},
                 {"limit_estimate", limit},
                 {"limit_method", "Aitken delta-squared on MP-stitched values at n_max/100, n_max/10, n_max"},
                 {"fit", fit_json(f)},
                 {"expected_exponent", -2.0 / 3},
                 {"tolerance", 0.1}};
    return r;
}

ExperimentResult fig2(const ExperimentSpec& spec) {
    const Params P{spec.params};
    IsingModel m;
    m.gz = P.num("gz", m.gz);
    m.gx = P.num("gx", m.gx);
    m.steps = static_cast<int>(P.integer("steps", m.steps));
    m.prune = P.num("prune", 0.0);
    if (spec.params.count("memory_gib"))
        m.memory_budget = static_cast<std::size_t>(P.num("memory_gib", 2.5) * double(std::size_t{1} << 30));
    const std::string cache_dir = spec.cache_dir.empty() ? out_path(spec, "cache") : spec.cache_dir;
    const CoeffCacheEntry c = cache_coeffs(m, cache_dir);
    const IsingSeed seed = ising_seed(m);
    const CoeffSequence b = CoeffSequence::tabulated(c.b);
    const long N = static_cast<long>(c.b.size());
    const DiffusionEstimate d = diffusion_estimate(b, N, seed.norm_ratio);
    const int avg_steps = static_cast<int>(std::min<long>(P.integer("average_steps", 6), N - 1));
    const double avg = d.averaged_two_d(avg_steps);

    std::vector<double> n, bn, dn, two_d;
    for (long k = 1; k <= N; ++k) {
        n.push_back(static_cast<double>(k));
        bn.push_back(c.b[k - 1]);
        dn.push_back(d.d[k - 1]);
        two_d.push_back(d.two_d(k));
    }
    ExperimentResult r;
    r.name = "fig2";
    r.files.push_back(out_path(spec, "fig2.csv"));
    write_csv(r.files.back(), {"n", "b_n", "D_n", "2D_n"}, {n, bn, dn, two_d});
    r.summary = {{"model", m.canonical()},
                 {"cache_key", c.key},
                 {"cache_hit", c.cache_hit},
                 {"steps_available", N},
                 {"norm_ratio", seed.norm_ratio},
                 {"averaged_2D", avg},
                 {"average_steps", avg_steps},
                 {"reference_2D", 3.35},
                 {"band", 0.2},
                 {"note", "conjectural: assumes the zero-frequency product limit; consistency band only"}};
    if (!c.warning.empty()) r.summary["cache_warning"] = c.warning;

    const long sites = P.integer("ed_sites", 0);
    bool ed_ok = true;
    if (sites > 0) {
        const int ed_steps = static_cast<int>(std::min<long>(N, 2 * sites));
        const EdCoefficients ed = ed_oracle_coeffs(m.hamiltonian(), seed.o0, static_cast<int>(sites), ed_steps);
        double worst = 0;
        long window = 0;
        for (int k = 0; k < ed_steps && ed.reliable[k]; ++k) {
            worst = std::max(worst, std::fabs(ed.b[k] - c.b[k]));
            window = k + 1;
        }
        ed_ok = worst <= 1e-10 && window >= 5;
        r.summary["ed"] = {{"sites", sites}, {"reliable_window", window}, {"max_abs_diff", worst}};
    }
    r.pass = std::fabs(avg / 3.35 - 1) <= 0.2 && ed_ok;
    return r;
}

ExperimentResult fig3(const ExperimentSpec& spec) {
    const Params P{spec.params};
    const auto grid = log_grid(P.num("n_min", 100), P.num("n_max", 10000), P.integer("points", 13));
    const CoeffSequence seq = CoeffSequence::meixner_pollaczek(P.num("alpha", 1), P.num("eta", 2));
    std::vector<double> ims{-1, -2, -3}, betas, r2s, neg_abs;
    std::vector<std::vector<double>> cols{{}};
    for (long n : grid) cols[0].push_back(static_cast<double>(n));
    json scans = json::array();
    for (double y : ims) {
        const TruncationScan s = truncation_scan(seq, y, grid, spec.workers);
        cols.push_back(s.error);
        betas.push_back(s.fit.exponent);
        r2s.push_back(s.fit.r2);
        neg_abs.push_back(std::fabs(y));
        scans.push_back({{"im_z", y}, {"reference_imag", s.reference_imag}, {"fit", fit_json(s.fit)}});
    }
    const LineFit cross = fit_line(neg_abs, betas);
    ExperimentResult r;
    r.name = "fig3";
    r.files.push_back(out_path(spec, "fig3_errors.csv"));
    write_csv(r.files.back(), {"N", "err_im_-1", "err_im_-2", "err_im_-3"}, cols);
    r.files.push_back(out_path(spec, "fig3_beta.csv"));
    write_csv(r.files.back(), {"im_z", "beta", "r2"}, {ims, betas, r2s});
    r.pass = std::fabs(cross.slope + 1) <= 0.1 && std::fabs(cross.intercept) <= 0.1;
    for (std::size_t i = 0; i < ims.size(); ++i) r.pass &= std::fabs(betas[i] / -neg_abs[i] - 1) <= 0.1;
    r.summary = {{"sequence", seq.describe()},
                 {"scans", scans},
                 {"cross_fit", {{"slope", cross.slope}, {"intercept", cross.intercept}, {"r2", cross.r2}}},
                 {"expected", "beta = -|Im z| / alpha"}};
    return r;
}

struct Expectation {
    ScalingModel model;
    double p;
    double tol;
};

Expectation expected_scaling(const std::string& name, int k) {
    if (k == 1) {
        if (name == "d1-case1") return {ScalingModel::LogPower, 1.0, 0.15};
        if (name == "d1-case2") return {ScalingModel::Plateau, 0.0, 0.0};
        if (name == "dn-case1") return {ScalingModel::LogLog, 0.0, 0.0};
        return {ScalingModel::LogPower, 0.5, 0.1};
    }
    if (name == "d1-case1") return {ScalingModel::LogPower, 3.0, 0.45};
    if (name == "d1-case2") return {ScalingModel::LogPower, 1.0, 0.15};
    if (name == "dn-case1") return {ScalingModel::LogPower, 1.2, 0.3};  // log n log log n
    return {ScalingModel::LogPower, 1.5, 0.15};
}

ExperimentResult derivative_figure(const ExperimentSpec& spec, int k) {
    const Params P{spec.params};
    const double n_max = P.num("n_max", 1e7), fit_lo = P.num("fit_lo", 1e4);
    const auto grid = log_grid(P.num("n_min", 1e3), n_max, P.integer("points", 25));
    std::vector<SmoothnessCase> cases;
    for (auto& c : builtin_smoothness_cases())
        if (c.name != "freud") cases.push_back(c);
    std::vector<DerivativeScaling> full(cases.size()), fitted(cases.size());
    const bool ext = spec.extended || n_max > 1e5;
    parallel_for(cases.size(), spec.workers, [&](std::size_t i) {
        full[i] = derivative_scaling(cases[i].seq, k, grid, ext, cases[i].dimension);
    });
    ExperimentResult r;
    r.name = k == 1 ? "fig4" : "fig5";
    r.pass = true;
    json per = json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& s = full[i].series;
        std::vector<long> gl;
        for (double x : s.x) gl.push_back(static_cast<long>(x));
        // refit on the declared window
        const ExperimentSeries w = window(gl, s.y, fit_lo, n_max);
        DerivativeScaling& d = fitted[i];
        d = fit_derivative_series(w, k, cases[i].dimension);
        const Expectation e = expected_scaling(cases[i].name, k);
        bool ok;
        if (e.model == ScalingModel::Plateau)
            ok = d.best.model == ScalingModel::Plateau;
        else if (e.model == ScalingModel::LogLog)
            ok = d.ambiguous || (d.best.model == ScalingModel::LogPower && d.best.exponent < 0.6);
        else
            ok = d.best.model == ScalingModel::LogPower && std::fabs(d.best.exponent - e.p) <= e.tol;
        r.pass &= ok;

        std::vector<double> rx, nn;
        for (double x : s.x) {
            nn.push_back(x);
            const double t = std::log(x);
            rx.push_back(e.model == ScalingModel::LogLog ? std::log(t)
                         : e.model == ScalingModel::Plateau ? t
                                                            : std::pow(t, e.p));
        }
        const std::string file = r.name + "_" + cases[i].name + ".csv";
        r.files.push_back(out_path(spec, file));
        write_csv(r.files.back(), {"n", "value", "rescaled_x"}, {nn, s.y, rx});
        json cands = json::array();
        for (const auto& c : d.candidates) cands.push_back(fit_json(c));
        // dG/dlog n over the last two decades; a settled nonzero slope means plain log n growth
        json tail = json::object();
        if (s.x.back() >= 100 * s.x.front()) {
            auto at = [&](double n) {
                const auto it = std::lower_bound(s.x.begin(), s.x.end(), n * (1 - 1e-9));
                return s.y[static_cast<std::size_t>(it - s.x.begin())];
            };
            const double hi = s.x.back();
            const double s1 = (at(hi / 10) - at(hi / 100)) / std::log(10.0), s2 = (s.y.back() - at(hi / 10)) / std::log(10.0);
            tail = {{"log_slope_previous_decade", s1}, {"log_slope_last_decade", s2}};
        }
        per.push_back({{"case", cases[i].name},
                       {"sequence", cases[i].seq.describe()},
                       {"best", fit_json(d.best)},
                       {"candidates", cands},
                       {"ambiguous", d.ambiguous},
                       {"note", d.note},
                       {"tail", tail},
                       {"parity_violation", full[i].max_parity_violation},
                       {"expected_model", to_string(e.model)},
                       {"expected_exponent", e.p},
                       {"pass", ok}});
    }
    r.summary = {{"derivative", k}, {"fit_window", {fit_lo, n_max}}, {"cases", per}};
    return r;
}

ExperimentResult custom(const ExperimentSpec& spec) {
    const Params P{spec.params};
    const CoeffSequence b = parse_sequence_spec(P.str("seq", "toy-irrelevant"));
    const double im = P.num("im_z", -1);
    const auto grid = log_grid(P.num("n_min", 10), P.num("n_max", 1000), P.integer("points", 11));
    ExperimentResult r;
    r.name = "custom";
    std::vector<double> n;
    for (long v : grid) n.push_back(static_cast<double>(v));
    if (im == 0) {
        const auto c = zero_freq_series(b, ConstantTerminator{}, grid);
        r.files.push_back(out_path(spec, "custom.csv"));
        write_csv(r.files.back(), {"N", "const_stitch_zero_freq"}, {n, c.value});
    } else {
        std::vector<double> tr, ti, cr, ci;
        tr.resize(grid.size());
        ti.resize(grid.size());
        cr.resize(grid.size());
        ci.resize(grid.size());
        parallel_for(grid.size(), spec.workers, [&](std::size_t i) {
            const auto t = truncated_evaluation(b, grid[i], {0, im}, spec.extended).value;
            const auto c = stitched_green(b, StitchPlan::constant(grid[i]), {0, im}, spec.extended).value;
            tr[i] = t.real();
            ti[i] = t.imag();
            cr[i] = c.real();
            ci[i] = c.imag();
        });
        r.files.push_back(out_path(spec, "custom.csv"));
        write_csv(r.files.back(), {"N", "trunc_re", "trunc_im", "const_re", "const_im"}, {n, tr, ti, cr, ci});
    }
    r.pass = true;
    r.summary = {{"sequence", b.describe()}, {"im_z", im}};
    return r;
}

}  // namespace

std::vector<std::string> builtin_experiments() { return {"fig1a", "fig1b", "fig2", "fig3", "fig4", "fig5", "custom"}; }

std::string experiment_help(const std::string& name) {
    if (name == "fig1a") return "irrelevant toy, zero-frequency MP(1,1) and constant stitching; params n_min n_max points";
    if (name == "fig1b") return "relevant toy, constant and MP(1,3) stitching up to n_max; params n_max points fit_lo fit_hi";
    if (name == "fig2") return "Ising Lanczos coefficients and 2D_n; params gz gx steps prune memory_gib ed_sites";
    if (name == "fig3") return "MP(1,2) truncation error vs N at Im z = -1,-2,-3; params n_min n_max points";
    if (name == "fig4") return "G^(1)(0;2n) scaling for the smoothness cases; params n_min n_max points fit_lo";
    if (name == "fig5") return "G^(2)(0;2n) scaling for the smoothness cases; params n_min n_max points fit_lo";
    if (name == "custom") return "truncation and constant stitching for seq=<spec>; params im_z n_min n_max points";
    return "";
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    fs::create_directories(spec.output_dir);
    const auto started = std::chrono::steady_clock::now();
    ExperimentResult r;
    try {
        if (spec.name == "fig1a")
            r = fig1a(spec);
        else if (spec.name == "fig1b")
            r = fig1b(spec);
        else if (spec.name == "fig2")
            r = fig2(spec);
        else if (spec.name == "fig3")
            r = fig3(spec);
        else if (spec.name == "fig4")
            r = derivative_figure(spec, 1);
        else if (spec.name == "fig5")
            r = derivative_figure(spec, 2);
        else if (spec.name == "custom")
            r = custom(spec);
        else
            throw ValidationError("unknown experiment: " + spec.name);
    } catch (const ValidationError& e) {
        throw ValidationError(spec.name + ": " + e.what());
    } catch (const ResourceLimit& e) {
        throw ResourceLimit(spec.name + ": " + e.what());
    } catch (const NonConvergence& e) {
        throw NonConvergence(spec.name + ": " + e.what());
    }
    r.summary["experiment"] = r.name;
    r.summary["pass"] = r.pass;
    json params = json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    r.summary["params"] = params;
    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    // run-dependent fields live in a sidecar so the summary and CSV bytes are reproducible
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::ofstream(out_path(spec, r.name + "_meta.json"))
        << json{{"experiment", r.name}, {"finished_utc", stamp}, {"wall_seconds", wall}, {"workers", spec.workers}}.dump(2)
        << "\n";
    const std::string path = out_path(spec, r.name + "_summary.json");
    std::ofstream(path) << r.summary.dump(2) << "\n";
    r.files.push_back(path);
    return r;
}

}  // namespace recmeth
