#include "recmeth/coeff_sequence.hpp"

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "recmeth/errors.hpp"

namespace recmeth {

namespace expr {

enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Log, Sqrt, Exp, Abs };

struct Node {
    Op op = Op::Num;
    long double value = 0;
    std::shared_ptr<const Node> a, b;
};

using Ptr = std::shared_ptr<const Node>;

namespace {

Ptr make(Op op, Ptr a = nullptr, Ptr b = nullptr, long double v = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Ptr parse() {
        Ptr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ValidationError("expression '" + s_ + "': " + what + " at column " +
                              std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Ptr sum() {
        Ptr lhs = product();
        for (;;) {
            if (eat('+'))
                lhs = make(Op::Add, lhs, product());
            else if (eat('-'))
                lhs = make(Op::Sub, lhs, product());
            else
                return lhs;
        }
    }
    Ptr product() {
        Ptr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = make(Op::Mul, lhs, unary());
            else if (eat('/'))
                lhs = make(Op::Div, lhs, unary());
            else
                return lhs;
        }
    }
    Ptr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    Ptr power() {
        Ptr base = primary();
        if (eat('^')) return make(Op::Pow, base, unary());  // right associative
        return base;
    }
    Ptr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (eat('(')) {
            Ptr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            long double v = std::stold(s_.substr(pos_), &used);
            pos_ += used;
            return make(Op::Num, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "n") return make(Op::Var);
            if (id == "pi") return make(Op::Num, nullptr, nullptr, 3.141592653589793238462643383279503L);
            Op f;
            if (id == "log")
                f = Op::Log;
            else if (id == "sqrt")
                f = Op::Sqrt;
            else if (id == "exp")
                f = Op::Exp;
            else if (id == "abs")
                f = Op::Abs;
            else if (id == "pow")
                f = Op::Pow;
            else
                fail("unknown identifier '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            Ptr a = sum();
            Ptr b;
            if (f == Op::Pow) {
                if (!eat(',')) fail("pow takes two arguments");
                b = sum();
            }
            if (!eat(')')) fail("expected ')'");
            return make(f, a, b);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

long double eval(const Node& e, long double n) {
    switch (e.op) {
        case Op::Num: return e.value;
        case Op::Var: return n;
        case Op::Neg: return -eval(*e.a, n);
        case Op::Add: return eval(*e.a, n) + eval(*e.b, n);
        case Op::Sub: return eval(*e.a, n) - eval(*e.b, n);
        case Op::Mul: return eval(*e.a, n) * eval(*e.b, n);
        case Op::Div: return eval(*e.a, n) / eval(*e.b, n);
        case Op::Pow: return std::pow(eval(*e.a, n), eval(*e.b, n));
        case Op::Log: return std::log(eval(*e.a, n));
        case Op::Sqrt: return std::sqrt(eval(*e.a, n));
        case Op::Exp: return std::exp(eval(*e.a, n));
        case Op::Abs: return std::fabs(eval(*e.a, n));
    }
    return 0;
}

}  // namespace expr

namespace {

long double sign_of(long n) { return (n % 2 == 0) ? 1.0L : -1.0L; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

CoeffSequence::CoeffSequence(Kind k) : kind_(std::move(k)) {
    if (auto* mp = std::get_if<MeixnerPollaczek>(&kind_))
        require(mp->alpha > 0 && mp->eta > 0, "Meixner-Pollaczek needs alpha > 0 and eta > 0");
    if (auto* t = std::get_if<Tabulated>(&kind_)) {
        require(t->values != nullptr, "tabulated sequence without values");
        for (std::size_t i = 0; i < t->values->size(); ++i)
            require((*t->values)[i] > 0 && std::isfinite((*t->values)[i]),
                    "tabulated b_" + std::to_string(i + 1) + " is not positive");
    }
}

CoeffSequence CoeffSequence::meixner_pollaczek(double alpha, double eta) {
    return CoeffSequence(MeixnerPollaczek{alpha, eta});
}

CoeffSequence CoeffSequence::tabulated(std::vector<double> values) {
    return CoeffSequence(Tabulated{std::make_shared<const std::vector<double>>(std::move(values))});
}

CoeffSequence CoeffSequence::custom(const std::string& expression) {
    return CoeffSequence(Custom{expression, expr::Parser(expression).parse()});
}

long double CoeffSequence::value_ext(long n) const {
    if (n == 0) return 1.0L;
    require(n >= 1, "sequence index must be >= 0");
    const long double x = static_cast<long double>(n);
    return std::visit(
        overloaded{
            [&](const MeixnerPollaczek& mp) -> long double {
                return static_cast<long double>(mp.alpha) *
                       std::sqrt(x * (x - 1.0L + static_cast<long double>(mp.eta)));
            },
            [&](const ToyIrrelevant&) -> long double { return x * x / std::sqrt(x * x - 0.25L); },
            [&](const ToyRelevant&) -> long double {
                return x + 1.0L + sign_of(n) * std::pow(x, -2.0L / 3.0L) / 2.0L;
            },
            [&](const FreudLike&) -> long double {
                long double l = 2.0L * std::log(x + 2.0L);
                return x / 2.0L + sign_of(n) / (l * l);
            },
            [&](const OghOneD& o) -> long double {
                long double l = std::log(x + 1.0L);
                long double v = static_cast<long double>(o.alpha) * x / l + o.gamma;
                if (o.stagger != 0) v += sign_of(n) * o.stagger * std::pow(l, -static_cast<long double>(o.decay));
                return v;
            },
            [&](const OghLinear& o) -> long double {
                long double v = static_cast<long double>(o.alpha) * x + o.gamma;
                if (o.stagger != 0)
                    v += sign_of(n) * o.stagger * std::pow(std::log(x + 1.0L), -static_cast<long double>(o.decay));
                return v;
            },
            [&](const Tabulated& t) -> long double {
                if (n > static_cast<long>(t.values->size()))
                    throw ValidationError("index " + std::to_string(n) + " beyond tabulated length " +
                                          std::to_string(t.values->size()));
                return (*t.values)[n - 1];
            },
            [&](const Custom& c) -> long double {
                long double v = expr::eval(*c.ast, x);
                if (!(v > 0) || !std::isfinite(v))
                    throw ValidationError("expression '" + c.text + "' gives non-positive b_" +
                                          std::to_string(n));
                return static_cast<long double>(static_cast<double>(v));
            },
        },
        kind_);
}

std::optional<long> CoeffSequence::n_max() const {
    if (auto* t = std::get_if<Tabulated>(&kind_)) return static_cast<long>(t->values->size());
    return std::nullopt;
}

std::vector<double> CoeffSequence::tabulate(long count) const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long n = 1; n <= count; ++n) out[n - 1] = (*this)(n);
    return out;
}

std::string CoeffSequence::describe() const {
    std::ostringstream os;
    os << std::setprecision(17);
    std::visit(overloaded{
                   [&](const MeixnerPollaczek& m) { os << "mp:alpha=" << m.alpha << ",eta=" << m.eta; },
                   [&](const ToyIrrelevant&) { os << "toy-irrelevant"; },
                   [&](const ToyRelevant&) { os << "toy-relevant"; },
                   [&](const FreudLike&) { os << "freud"; },
                   [&](const OghOneD& o) {
                       os << "ogh1d:alpha=" << o.alpha << ",gamma=" << o.gamma << ",stagger=" << o.stagger
                          << ",decay=" << o.decay;
                   },
                   [&](const OghLinear& o) {
                       os << "ogh-linear:alpha=" << o.alpha << ",gamma=" << o.gamma
                          << ",stagger=" << o.stagger << ",decay=" << o.decay;
                   },
                   [&](const Tabulated& t) { os << "tabulated:" << t.values->size(); },
                   [&](const Custom& c) { os << "expr:" << c.text; },
               },
               kind_);
    return os.str();
}

double eval_sequence(const CoeffSequence& seq, long n) {
    require(n >= 1, "eval_sequence needs n >= 1");
    return seq(n);
}

namespace {

std::map<std::string, double> parse_params(const std::string& s) {
    std::map<std::string, double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        require(eq != std::string::npos, "parameter '" + item + "' is not key=value");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ValidationError("parameter '" + item + "' has a non-numeric value");
        }
    }
    return out;
}

double take(std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    double v = it->second;
    p.erase(it);
    return v;
}

}  // namespace

CoeffSequence parse_sequence_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "expr") return CoeffSequence::custom(rest);
    if (head == "file") return CoeffSequence::tabulated(read_coeff_table(rest).values);
    auto p = parse_params(rest);
    auto finish = [&](CoeffSequence s) {
        require(p.empty(), "unknown parameter '" + (p.empty() ? "" : p.begin()->first) + "' in " + spec);
        return s;
    };
    if (head == "mp") {
        double a = take(p, "alpha", 1.0), e = take(p, "eta", 1.0);
        return finish(CoeffSequence::meixner_pollaczek(a, e));
    }
    if (head == "toy-irrelevant") return finish(CoeffSequence::toy_irrelevant());
    if (head == "toy-relevant") return finish(CoeffSequence::toy_relevant());
    if (head == "freud") return finish(CoeffSequence::freud_like());
    if (head == "ogh1d") {
        OghOneD o{take(p, "alpha", 1.0), take(p, "gamma", 0.0), take(p, "stagger", 0.0), take(p, "decay", 0.0)};
        return finish(CoeffSequence(o));
    }
    if (head == "ogh-linear") {
        OghLinear o{take(p, "alpha", 1.0), take(p, "gamma", 0.0), take(p, "stagger", 0.0),
                    take(p, "decay", 0.0)};
        return finish(CoeffSequence(o));
    }
    throw ValidationError("unknown sequence kind '" + head + "'");
}

void write_coeff_table(const std::string& path, const CoeffTable& table) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << "# format: recmeth-coeffs-1\n";
    for (const auto& [k, v] : table.header) out << "# " << k << ": " << v << "\n";
    out << "# count: " << table.values.size() << "\n";
    char buf[64];
    for (double v : table.values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
    if (!out) throw ResourceLimit("write failed for " + path);
}

CoeffTable read_coeff_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    CoeffTable t;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto c = line.find(':');
            if (c == std::string::npos) continue;
            auto trim = [](std::string s) {
                auto a = s.find_first_not_of(" \t");
                auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            t.header[trim(line.substr(1, c - 1))] = trim(line.substr(c + 1));
            continue;
        }
        double v;
        try {
            v = std::stod(line);
        } catch (const std::exception&) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": not a number");
        }
        if (!(v > 0) || !std::isfinite(v))
            throw ValidationError(path + ":" + std::to_string(line_no) + ": coefficient is not positive");
        t.values.push_back(v);
    }
    if (auto it = t.header.find("count"); it != t.header.end()) {
        if (std::stol(it->second) != static_cast<long>(t.values.size()))
            throw ValidationError(path + ": count header does not match the number of values");
    }
    return t;
}

StaggerDecomposition decompose_stagger(const std::vector<double>& values, int window) {
    require(window >= 1, "window must be >= 1");
    const long m = static_cast<long>(values.size());
    require(m >= 2L * window + 3, "decompose_stagger needs at least 2*window+3 values");

    std::vector<double> sm(values.begin(), values.end());
    std::vector<double> tmp(sm.size());
    long lo = 0, hi = m - 1;  // valid range shrinks by one per pass
    for (int pass = 0; pass < window; ++pass) {
        for (long i = lo + 1; i < hi; ++i) tmp[i] = 0.25 * sm[i - 1] + 0.5 * sm[i] + 0.25 * sm[i + 1];
        ++lo;
        --hi;
        for (long i = lo; i <= hi; ++i) sm[i] = tmp[i];
    }

    StaggerDecomposition d;
    d.window = window;
    d.first_index = lo + 1;
    for (long i = lo; i <= hi; ++i) {
        long n = i + 1;
        double f = sm[i];
        double s = (n % 2 == 0 ? 1.0 : -1.0) * (values[i] - f);
        d.f.push_back(f);
        d.s.push_back(s);
        d.residual = std::max(d.residual, std::fabs(values[i] - (f + (n % 2 == 0 ? s : -s))));
        if (f != 0) d.max_ratio = std::max(d.max_ratio, std::fabs(s / f));
    }
    const std::size_t q = d.f.size() / 4;
    if (q >= 1) {
        double head = 0, tail = 0;
        for (std::size_t i = 0; i < q; ++i) {
            head += std::fabs(d.s[i] / d.f[i]);
            tail += std::fabs(d.s[d.f.size() - 1 - i] / d.f[d.f.size() - 1 - i]);
        }
        d.ratio_not_vanishing = head > 0 && tail >= head;
    }
    return d;
}

GrowthFit fit_growth(const std::vector<double>& values, GrowthModel model, long first, long last) {
    const long m = static_cast<long>(values.size());
    require(first >= 1 && last <= m && last - first + 1 >= 4, "fit window must lie in the table with length >= 4");

    // De-stagger with the default kernel; the window edges need one neighbour on each side.
    auto smooth = [&](long n) -> double {
        if (n <= 1 || n >= m) return values[n - 1];
        return 0.25 * values[n - 2] + 0.5 * values[n - 1] + 0.25 * values[n];
    };
    require(first >= 2 && last <= m - 1, "fit window needs one neighbour on each side for de-staggering");

    const long rows = last - first + 1;
    const int cols = model == GrowthModel::Linear ? 3 : 2;
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd y(rows);
    const double scale = static_cast<double>(last);
    for (long n = first; n <= last; ++n) {
        const double x = static_cast<double>(n);
        long r = n - first;
        if (model == GrowthModel::Linear) {
            a(r, 0) = x / scale;
            a(r, 1) = 1.0;
            a(r, 2) = static_cast<double>(first) / x;
        } else {
            a(r, 0) = x / std::log(x + 1.0) / scale;
            a(r, 1) = 1.0;
        }
        y(r) = smooth(n);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < cols) throw ValidationError("degenerate growth fit (zero variance in the regressors)");
    Eigen::VectorXd c = qr.solve(y);

    GrowthFit g;
    g.model = model;
    g.alpha = c(0) / scale;
    g.gamma = c(1);
    if (model == GrowthModel::Linear) g.delta = c(2) * static_cast<double>(first);
    g.first = first;
    g.last = last;
    g.residual = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(rows));
    if (!(g.alpha > 0)) throw ValidationError("growth fit gives alpha <= 0");
    g.eta_matched = 1.0 + 2.0 * g.gamma / g.alpha;
    return g;
}

}  // namespace recmeth
