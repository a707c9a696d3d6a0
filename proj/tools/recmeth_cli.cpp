// recmeth: continued-fraction Green's functions from Lanczos coefficients.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "recmeth/ed_oracle.hpp"
#include "recmeth/errors.hpp"
#include "recmeth/experiments.hpp"
#include "recmeth/products.hpp"
#include "recmeth/smoothness.hpp"
#include "recmeth/stitching.hpp"

using namespace recmeth;

namespace {

struct Global {
    std::string precision = "double";
    int workers = 1;
    std::string out;
    bool extended() const { return precision == "extended"; }
};

// Writes to --out when given, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ValidationError("cannot open " + path + " for writing");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v);  // no "-0"
    return buf;
}

CoeffSequence load_sequence(const std::string& seq, const std::string& coeffs) {
    if (!coeffs.empty()) return CoeffSequence::tabulated(read_coeff_table(coeffs).values);
    if (seq.empty()) throw ValidationError("give --seq or --coeffs");
    for (const auto& c : builtin_smoothness_cases())
        if (c.name == seq) return c.seq;
    return parse_sequence_spec(seq);
}

// "log:1e3:1e7:24" or a comma list
std::vector<long> parse_grid(const std::string& g) {
    if (g.rfind("log:", 0) == 0) {
        double lo, hi;
        int pts;
        char c1, c2;
        std::istringstream is(g.substr(4));
        if (!(is >> lo >> c1 >> hi >> c2 >> pts) || c1 != ':' || c2 != ':')
            throw ValidationError("grid must look like log:LO:HI:POINTS");
        return log_grid(lo, hi, pts);
    }
    std::vector<long> out;
    std::istringstream is(g);
    for (std::string tok; std::getline(is, tok, ',');) {
        try {
            out.push_back(std::lround(std::stod(tok)));
        } catch (const std::exception&) {
            throw ValidationError("bad grid entry: " + tok);
        }
    }
    require(!out.empty(), "empty grid");
    std::sort(out.begin(), out.end());
    return out;
}

Terminator parse_terminator(const std::string& t) {
    if (t == "const" || t == "constant") return ConstantTerminator{};
    if (t.rfind("mp:", 0) == 0) {
        const auto s = parse_sequence_spec(t);
        const auto& mp = std::get<MeixnerPollaczek>(s.kind());
        return MpTerminator{mp.alpha, mp.eta};
    }
    throw ValidationError("terminator must be 'const' or 'mp:alpha=..,eta=..'");
}

int run(int argc, char** argv) {
    CLI::App app{"recmeth: Green's functions, zero-frequency products and Lanczos coefficients"};
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 success, 2 validation error, 3 resource limit, 4 numerical non-convergence.\n"
        "Sequence specs: mp:alpha=A,eta=E | toy-irrelevant | toy-relevant | freud |\n"
        "  ogh1d:alpha=,gamma=,stagger=,decay= | ogh-linear:... | expr:<formula in n> | file:<path>\n"
        "Coefficient files: '# key: value' header lines, then one b_n per line starting at n = 1.\n"
        "Tables are CSV with a header row; numbers printed with 17 significant digits.");
    Global g;
    app.add_option("--precision", g.precision, "Arithmetic for recurrences: double or extended (80-bit long double)")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--workers", g.workers, "Worker threads for grid points")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file for tables (stdout when omitted); output directory for 'experiment'");
    // global flags may also follow the subcommand
    app.fallthrough();

    // coeffs -----------------------------------------------------------------
    auto* coeffs = app.add_subcommand("coeffs", "Lanczos coefficients of the mixed-field Ising energy current, or a tabulated sequence");
    coeffs->footer("Writes a coefficient file ('# key: value' header, one b_n per line, n = 1..N).\n"
                   "Coefficients are dimensionless in units of the XX coupling.");
    IsingModel im;
    std::string c_seq, cache_dir;
    long c_count = 0;
    int ed_sites = 0;
    std::string c_model = "ising", c_op = "energy-current";
    coeffs->add_option("model", c_model, "Model (only 'ising': H = sum XX + g_z Z + g_x X)")
        ->check(CLI::IsMember({"ising"}));
    coeffs->add_option("--op", c_op, "Initial operator (only 'energy-current', normalized)")
        ->check(CLI::IsMember({"energy-current"}));
    coeffs->add_option("--seq", c_seq, "Tabulate this sequence spec instead of running Lanczos");
    coeffs->add_option("--count", c_count, "Number of coefficients to tabulate with --seq");
    coeffs->add_option("--gz", im.gz, "Transverse field g_z (default -1.05)");
    coeffs->add_option("--gx", im.gx, "Longitudinal field g_x (default 0.5)");
    coeffs->add_option("--steps", im.steps, "Lanczos steps");
    coeffs->add_option("--prune", im.prune, "Drop Pauli strings with |amplitude| below this (approximate when > 0)");
    double mem_gib = 2.5;
    coeffs->add_option("--memory-gib", mem_gib, "Memory budget for the commutator accumulator, GiB");
    coeffs->add_option("--cache-dir", cache_dir, "Coefficient cache directory (no cache when omitted)");
    coeffs->add_option("--ed-sites", ed_sites, "Also compare with a periodic ring of this many sites (<= 14)");

    // greens -----------------------------------------------------------------
    auto* greens = app.add_subcommand("greens", "G(z) by truncation, stitching or adaptive descent");
    greens->footer("Columns: N, method, Re G, Im G, depth, bound. z is dimensionless (units of b).");
    std::string gr_seq, gr_coeffs, gr_method = "mp-matched", gr_terms = "mp:alpha=1,eta=1";
    double z_re = 0, z_im = -1;
    std::string gr_N = "100";
    long match_lo = 0, match_hi = 0;
    bool with_bound = false;
    greens->add_option("--seq", gr_seq, "Sequence spec");
    greens->add_option("--coeffs", gr_coeffs, "Coefficient file");
    greens->add_option("--re", z_re, "Re z");
    greens->add_option("--im", z_im, "Im z (nonzero)");
    greens->add_option("--N,--level", gr_N, "Stitch/truncation level(s): number, comma list or log:LO:HI:POINTS");
    std::string gr_z;
    greens->add_option("--z", gr_z, "Complex z as a+bi (overrides --re/--im)");
    greens->add_option("--method", gr_method,
                       "truncation|trunc, mp (MP tail from --terminator), const, stitch, mp-matched, descent")
        ->check(CLI::IsMember({"truncation", "trunc", "mp", "const", "stitch", "mp-matched", "descent"}));
    greens->add_option("--terminator", gr_terms, "For --method stitch: const or mp:alpha=..,eta=..");
    greens->add_option("--match-window", match_lo, "mp-matched: first n of the growth fit (default N/2)");
    greens->add_option("--match-last", match_hi, "mp-matched: last n of the growth fit (default N-1)");
    greens->add_flag("--bound", with_bound, "Attach the finite-Im error bound against the terminator sequence");

    // zerofreq ---------------------------------------------------------------
    auto* zf = app.add_subcommand("zerofreq", "|G_N(-i0+)| from the parity product formula");
    zf->footer("Columns: N, value. With --origin also prints the parity-averaged spectral-origin estimate.");
    std::string zf_seq, zf_coeffs, zf_term = "const", zf_grid = "log:100:10000:9";
    bool zf_origin = false;
    zf->add_option("--seq", zf_seq, "Sequence spec");
    zf->add_option("--coeffs", zf_coeffs, "Coefficient file");
    zf->add_option("--terminator", zf_term, "const or mp:alpha=..,eta=..");
    zf->add_option("--grid,--level", zf_grid, "N values: list or log:LO:HI:POINTS");
    std::string zf_method;
    double zf_alpha = 1, zf_eta = 1;
    zf->add_option("--method", zf_method, "mp or const (shorthand for --terminator)")
        ->check(CLI::IsMember({"mp", "const"}));
    zf->add_option("--alpha", zf_alpha, "MP alpha for --method mp");
    zf->add_option("--eta", zf_eta, "MP eta for --method mp");
    zf->add_flag("--origin", zf_origin, "Report spectral_origin at the largest N");

    // diffusion --------------------------------------------------------------
    auto* diff = app.add_subcommand("diffusion", "D_n = norm_ratio * Pi_n from a coefficient file");
    diff->footer("Columns: n, D_n, 2D_n. norm_ratio 'auto' uses <j,j>/<h,h> of the mixed-field Ising model.");
    std::string d_coeffs, d_ratio = "auto";
    long d_max = 0;
    diff->add_option("--coeffs", d_coeffs, "Coefficient file")->required();
    diff->add_option("--norm-ratio", d_ratio, "auto or a nonnegative number");
    diff->add_option("--max-n", d_max, "Last n (default: all)");
    diff->add_option("--gz", im.gz, "g_z for --norm-ratio auto");
    diff->add_option("--gx", im.gx, "g_x for --norm-ratio auto");

    // stagger ----------------------------------------------------------------
    auto* stg = app.add_subcommand("stagger", "Split b_n into smooth f_n and staggered s_n and classify Pi convergence");
    stg->footer("Columns: n, b_n, f_n, s_n. Verdict line on stderr.");
    std::string s_seq, s_coeffs;
    long s_count = 1000;
    int s_window = 1;
    stg->add_option("--seq", s_seq, "Sequence spec");
    stg->add_option("--coeffs", s_coeffs, "Coefficient file");
    stg->add_option("--count", s_count, "Coefficients to use with --seq");
    stg->add_option("--window", s_window, "Smoothing passes of the [1,2,1]/4 kernel");

    // smoothness -------------------------------------------------------------
    auto* sm = app.add_subcommand("smoothness", "G^(k)(0;2n) scaling, or the double-integral criterion");
    sm->footer("Cases: d1-case1 d1-case2 dn-case1 dn-case2 freud, or any sequence spec.\n"
               "Columns: n, value, rescaled_x ((log n)^p of the best fit). With --criterion A: verdict per k.");
    std::string sm_seq = "dn-case2", sm_grid = "log:1e3:1e6:19", sm_dim = "auto";
    int sm_k = 1;
    double sm_a = NAN;
    sm->add_option("--seq", sm_seq, "Case name or sequence spec");
    sm->add_option("--derivative", sm_k, "Derivative order k")->check(CLI::Range(0, 8));
    sm->add_option("--grid", sm_grid, "n grid: list or log:LO:HI:POINTS");
    sm->add_option("--dimension", sm_dim, "auto, 1 or higher")->check(CLI::IsMember({"auto", "1", "higher"}));
    sm->add_option("--criterion", sm_a, "Evaluate the criterion for s_n = (log n)^-A instead of jets");

    // experiment -------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "Run a builtin experiment and write CSV plus a JSON summary");
    std::string ex_name;
    std::vector<std::string> ex_params;
    std::string ex_cache;
    bool ex_list = false;
    ex->add_option("name", ex_name, "fig1a fig1b fig2 fig3 fig4 fig5 custom");
    ex->add_option("--param", ex_params, "key=value override (repeatable)");
    ex->add_option("--cache-dir", ex_cache, "Coefficient cache (default <out>/cache)");
    ex->add_flag("--list", ex_list, "List experiments and their parameters");
    {
        std::string f = "Writes <name>*.csv, <name>_summary.json (deterministic) and <name>_meta.json (timestamps).\n";
        for (const auto& n : builtin_experiments()) f += "  " + n + ": " + experiment_help(n) + "\n";
        ex->footer(f);
    }

    // cache ------------------------------------------------------------------
    auto* cache = app.add_subcommand("cache", "Show or fill the coefficient cache entry for an Ising model");
    cache->footer("Entries are <cache-dir>/<fnv1a key>.coeffs; the key hashes model, fields, steps and prune.");
    std::string cc_dir = "cache";
    bool cc_key_only = false;
    cache->add_option("--cache-dir", cc_dir, "Cache directory");
    cache->add_option("--gz", im.gz, "g_z");
    cache->add_option("--gx", im.gx, "g_x");
    cache->add_option("--steps", im.steps, "Lanczos steps");
    cache->add_option("--prune", im.prune, "Prune threshold");
    cache->add_flag("--key", cc_key_only, "Print the key without computing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*coeffs) {
        Sink sink(g.out);
        if (!c_seq.empty()) {
            require(c_count >= 1, "--count must be >= 1 with --seq");
            const CoeffSequence s = parse_sequence_spec(c_seq);
            CoeffTable t;
            t.values = s.tabulate(c_count);
            t.header["sequence"] = s.describe();
            if (g.out.empty()) {
                for (double v : t.values) sink.os() << g17(v) << "\n";
            } else {
                write_coeff_table(g.out, t);
            }
            return 0;
        }
        im.memory_budget = static_cast<std::size_t>(mem_gib * double(std::size_t{1} << 30));
        std::vector<double> b;
        std::map<std::string, std::string> meta;
        if (!cache_dir.empty()) {
            const auto e = cache_coeffs(im, cache_dir);
            b = e.b;
            meta = e.metadata;
            std::cerr << (e.cache_hit ? "cache hit " : "computed ") << e.path << "\n";
        } else {
            const IsingSeed seed = ising_seed(im);
            LanczosOptions opt;
            opt.prune_threshold = im.prune;
            opt.memory_budget = im.memory_budget;
            const LanczosRun run = lanczos_run(im.hamiltonian(), seed.o0, im.steps, opt);
            b = run.b;
            meta["model"] = im.canonical();
            meta["status"] = to_string(run.status);
            meta["norm_ratio"] = g17(seed.norm_ratio);
            if (run.status == LanczosStatus::MemoryBudget) std::cerr << "stopped early: " << run.message << "\n";
        }
        if (g.out.empty()) {
            sink.os() << "n,b_n\n";
            for (std::size_t i = 0; i < b.size(); ++i) sink.os() << i + 1 << "," << g17(b[i]) << "\n";
        } else {
            write_coeff_table(g.out, CoeffTable{b, meta});
        }
        if (ed_sites > 0) {
            const IsingSeed seed = ising_seed(im);
            const int steps = std::min<int>(static_cast<int>(b.size()), 2 * ed_sites);
            const auto ed = ed_oracle_coeffs(im.hamiltonian(), seed.o0, ed_sites, steps);
            std::cerr << "n,b_infinite,b_ring,abs_diff,reliable\n";
            for (int k = 0; k < steps; ++k)
                std::cerr << k + 1 << "," << g17(b[k]) << "," << g17(ed.b[k]) << "," << std::fabs(b[k] - ed.b[k]) << ","
                          << (ed.reliable[k] ? 1 : 0) << "\n";
        }
        return 0;
    }

    if (*greens) {
        const CoeffSequence b = load_sequence(gr_seq, gr_coeffs);
        if (!gr_z.empty()) {
            std::string t = gr_z;
            t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
            if (!t.empty() && t.back() == 'i') t.pop_back();
            // split at the last sign that is not an exponent sign
            std::size_t cut = std::string::npos;
            for (std::size_t i = t.size(); i-- > 1;)
                if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
                    cut = i;
                    break;
                }
            try {
                if (cut == std::string::npos) {
                    z_re = 0;
                    z_im = gr_z.back() == 'i' ? (t.empty() || t == "+" ? 1.0 : t == "-" ? -1.0 : std::stod(t)) : 0.0;
                    if (gr_z.back() != 'i') z_re = std::stod(t);
                } else {
                    z_re = std::stod(t.substr(0, cut));
                    const std::string im_part = t.substr(cut);
                    z_im = im_part == "+" ? 1.0 : im_part == "-" ? -1.0 : std::stod(im_part);
                }
            } catch (const std::exception&) {
                throw ValidationError("--z must look like a+bi, e.g. 0-1i");
            }
        }
        if (gr_method == "trunc") gr_method = "truncation";
        if (gr_method == "mp") gr_method = "stitch";
        if (gr_method == "const") {
            gr_method = "stitch";
            gr_terms = "const";
        }
        const std::complex<double> z(z_re, z_im);
        Sink sink(g.out);
        sink.os() << "N,method,re,im,depth,bound\n";
        for (long N : parse_grid(gr_N)) {
            GreenEvaluation e;
            CoeffSequence tail = b;
            if (gr_method == "truncation") {
                e = truncated_evaluation(b, N, z, g.extended());
            } else if (gr_method == "descent") {
                if (g.extended()) {
                    auto r = descent_green<long double>(b, {z_re, z_im}, 0);
                    e.value = {double(r.value.real()), double(r.value.imag())};
                    e.depth = r.depth;
                } else {
                    auto r = descent_green<double>(b, z, 0);
                    e.value = r.value;
                    e.depth = r.depth;
                }
                e.method = "descent";
                e.N = N;
            } else {
                StitchPlan plan;
                if (gr_method == "mp-matched") {
                    const long lo = match_lo > 0 ? match_lo : std::max(2L, N / 2);
                    const long hi = match_hi > 0 ? match_hi : N - 1;
                    plan = StitchPlan::mp_matched(b, N, lo, hi);
                } else {
                    const Terminator t = parse_terminator(gr_terms);
                    plan = std::holds_alternative<MpTerminator>(t)
                               ? StitchPlan::mp(N, std::get<MpTerminator>(t).alpha, std::get<MpTerminator>(t).eta)
                               : StitchPlan::constant(N);
                }
                e = stitched_green(b, plan, z, g.extended());
                if (const auto* mp = std::get_if<MpTerminator>(&plan.terminator))
                    tail = CoeffSequence::meixner_pollaczek(mp->alpha, mp->eta);
                if (with_bound && std::holds_alternative<MpTerminator>(plan.terminator))
                    e.error_bound = error_bound_finite_im(b, tail, z, N).value;
                std::cerr << "N=" << N << " " << plan.match_report << "\n";
            }
            sink.os() << N << "," << e.method << "," << g17(e.value.real()) << "," << g17(e.value.imag()) << ","
                      << e.depth << "," << (e.error_bound ? g17(*e.error_bound) : std::string("")) << "\n";
        }
        return 0;
    }

    if (*zf) {
        const CoeffSequence b = load_sequence(zf_seq, zf_coeffs);
        const auto grid = parse_grid(zf_grid);
        if (zf_method == "const") zf_term = "const";
        if (zf_method == "mp") zf_term = "mp:alpha=" + g17(zf_alpha) + ",eta=" + g17(zf_eta);
        const auto s = zero_freq_series(b, parse_terminator(zf_term), grid);
        Sink sink(g.out);
        sink.os() << "N,value\n";
        for (std::size_t i = 0; i < s.N.size(); ++i) sink.os() << s.N[i] << "," << g17(s.value[i]) << "\n";
        if (zf_origin) {
            const auto o = spectral_origin(b, grid.back());
            std::cerr << "spectral origin: averaged " << g17(o.averaged.imag()) << " spread " << g17(o.spread)
                      << " trend " << to_string(o.trend) << " (" << o.note << ")\n";
        }
        return 0;
    }

    if (*diff) {
        const CoeffTable t = read_coeff_table(d_coeffs);
        double ratio;
        if (d_ratio == "auto") {
            if (auto it = t.header.find("norm_ratio"); it != t.header.end())
                ratio = std::stod(it->second);
            else
                ratio = ising_seed(im).norm_ratio;
        } else {
            try {
                ratio = std::stod(d_ratio);
            } catch (const std::exception&) {
                throw ValidationError("--norm-ratio must be auto or a number");
            }
        }
        const long n = d_max > 0 ? std::min<long>(d_max, static_cast<long>(t.values.size()))
                                 : static_cast<long>(t.values.size());
        const auto d = diffusion_estimate(CoeffSequence::tabulated(t.values), n, ratio);
        Sink sink(g.out);
        sink.os() << "n,D_n,2D_n\n";
        for (long k = 1; k <= n; ++k) sink.os() << k << "," << g17(d.d[k - 1]) << "," << g17(d.two_d(k)) << "\n";
        if (n >= 7) std::cerr << "two-parity averaged 2D over last 6: " << d.averaged_two_d(6) << " (conjectural)\n";
        return 0;
    }

    if (*stg) {
        std::vector<double> v;
        if (!s_coeffs.empty())
            v = read_coeff_table(s_coeffs).values;
        else
            v = load_sequence(s_seq, "").tabulate(s_count);
        const auto split = decompose_stagger(v, s_window);
        Sink sink(g.out);
        sink.os() << "n,b_n,f_n,s_n\n";
        for (std::size_t i = 0; i < split.f.size(); ++i) {
            const long n = split.first_index + static_cast<long>(i);
            sink.os() << n << "," << g17(v[n - 1]) << "," << g17(split.f[i]) << "," << g17(split.s[i]) << "\n";
        }
        std::cerr << "max |s/f| " << split.max_ratio << (split.ratio_not_vanishing ? " (not vanishing)" : "") << "\n";
        if (split.f.size() >= 64) std::cerr << "product: " << to_string(convergence_criterion(split).verdict) << "\n";
        return 0;
    }

    if (*sm) {
        Dimension dim = Dimension::Higher;
        if (sm_dim == "1") dim = Dimension::One;
        if (sm_dim == "auto")
            for (const auto& c : builtin_smoothness_cases())
                if (c.name == sm_seq) dim = c.dimension;
        Sink sink(g.out);
        if (!std::isnan(sm_a)) {
            const auto pred = predicted_order(sm_a, dim);
            sink.os() << "k,verdict,kth,previous\n";
            for (int k = 1; k <= std::max(sm_k, 1) + 3; ++k) {
                const auto r = smoothness_criterion(log_power_profile(sm_a), dim, k);
                sink.os() << k << "," << to_string(r.verdict) << "," << to_string(r.kth) << "," << to_string(r.previous)
                          << "\n";
            }
            const auto k = first_divergent_order(log_power_profile(sm_a), dim);
            std::cerr << "first divergent order: " << (k ? std::to_string(*k) : "none") << ", closed-form range: "
                      << (pred ? std::to_string(*pred) : "none") << "\n";
            return 0;
        }
        const CoeffSequence b = load_sequence(sm_seq, "");
        const auto grid = parse_grid(sm_grid);
        const bool ext = g.extended() || grid.back() > 100000;
        const auto d = derivative_scaling(b, sm_k, grid, ext, dim);
        sink.os() << "n,value,rescaled_x\n";
        for (std::size_t i = 0; i < d.series.x.size(); ++i) {
            const double t = std::log(d.series.x[i]);
            const double rx = d.best.model == ScalingModel::LogLog ? std::log(t)
                              : d.best.model == ScalingModel::LogPower ? std::pow(t, d.best.exponent)
                                                                       : t;
            sink.os() << static_cast<long>(d.series.x[i]) << "," << g17(d.series.y[i]) << "," << g17(rx) << "\n";
        }
        std::cerr << "best " << to_string(d.best.model) << " p=" << d.best.exponent << " R2=" << d.best.r2
                  << (d.ambiguous ? " (ambiguous)" : "") << " " << d.note << "\n";
        return 0;
    }

    if (*ex) {
        if (ex_list || ex_name.empty()) {
            for (const auto& n : builtin_experiments()) std::cout << n << ": " << experiment_help(n) << "\n";
            return ex_list ? 0 : 2;
        }
        ExperimentSpec spec;
        spec.name = ex_name;
        spec.output_dir = g.out.empty() ? "results" : g.out;
        spec.cache_dir = ex_cache;
        spec.workers = g.workers;
        spec.extended = g.extended();
        for (const auto& kv : ex_params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ValidationError("--param expects key=value: " + kv);
            spec.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        const auto r = run_experiment(spec);
        for (const auto& f : r.files) std::cout << f << "\n";
        std::cout << r.name << ": " << (r.pass ? "matches expected scaling" : "does not match expected scaling") << "\n";
        return 0;
    }

    if (*cache) {
        if (cc_key_only) {
            std::cout << cache_key(im) << "\n";
            return 0;
        }
        const auto e = cache_coeffs(im, cc_dir);
        std::cout << e.key << " " << e.path << " " << (e.cache_hit ? "hit" : "computed") << " " << e.b.size()
                  << " coefficients\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
