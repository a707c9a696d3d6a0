#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace recmeth {

// b_n = alpha sqrt(n (n - 1 + eta))
struct MeixnerPollaczek {
    double alpha = 1.0;
    double eta = 1.0;
};

// b_n = n^2 / sqrt(n^2 - 1/4)
struct ToyIrrelevant {};

// b_n = n + 1 + (-1)^n n^(-2/3) / 2
struct ToyRelevant {};

// b_n = n/2 + (-1)^n / (2 log(n+2))^2
struct FreudLike {};

// b_n = alpha n / log(n+1) + gamma + (-1)^n stagger (log(n+1))^(-decay)
struct OghOneD {
    double alpha = 1.0;
    double gamma = 0.0;
    double stagger = 0.0;
    double decay = 0.0;
};

// b_n = alpha n + gamma + (-1)^n stagger (log(n+1))^(-decay)
struct OghLinear {
    double alpha = 1.0;
    double gamma = 0.0;
    double stagger = 0.0;
    double decay = 0.0;
};

// values[0] holds b_1.
struct Tabulated {
    std::shared_ptr<const std::vector<double>> values;
};

namespace expr {
struct Node;
}

struct Custom {
    std::string text;
    std::shared_ptr<const expr::Node> ast;
};

class CoeffSequence {
public:
    using Kind = std::variant<MeixnerPollaczek, ToyIrrelevant, ToyRelevant, FreudLike, OghOneD,
                              OghLinear, Tabulated, Custom>;

    CoeffSequence(Kind k);

    static CoeffSequence meixner_pollaczek(double alpha, double eta);
    static CoeffSequence tabulated(std::vector<double> values);
    static CoeffSequence custom(const std::string& expression);
    static CoeffSequence toy_irrelevant() { return CoeffSequence(ToyIrrelevant{}); }
    static CoeffSequence toy_relevant() { return CoeffSequence(ToyRelevant{}); }
    static CoeffSequence freud_like() { return CoeffSequence(FreudLike{}); }

    // b_n in extended precision; b_0 = 1 by convention.
    long double value_ext(long n) const;
    double operator()(long n) const { return static_cast<double>(value_ext(n)); }
    template <class Real>
    Real at(long n) const {
        return static_cast<Real>(value_ext(n));
    }

    std::optional<long> n_max() const;
    std::vector<double> tabulate(long count) const;

    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_;
};

double eval_sequence(const CoeffSequence& seq, long n);

// Parses builtin specs: "mp:alpha=1,eta=2", "toy-irrelevant", "toy-relevant", "freud",
// "ogh1d:alpha=..,gamma=..,stagger=..,decay=..", "ogh-linear:...", "expr:<expression>",
// "file:<path>".
CoeffSequence parse_sequence_spec(const std::string& spec);

// Tabulated file format: lines "# key: value" followed by one coefficient per line.
struct CoeffTable {
    std::vector<double> values;  // b_1..b_N
    std::map<std::string, std::string> header;
};

void write_coeff_table(const std::string& path, const CoeffTable& table);
CoeffTable read_coeff_table(const std::string& path);

struct StaggerDecomposition {
    long first_index = 0;  // index n of f[0]
    std::vector<double> f;
    std::vector<double> s;
    int window = 1;
    double residual = 0.0;
    double max_ratio = 0.0;           // max |s_n / f_n|
    bool ratio_not_vanishing = false;  // |s/f| not decreasing across the range
};

// values[0] = b_1. Kernel [1,2,1]/4 applied `window` times.
StaggerDecomposition decompose_stagger(const std::vector<double>& values, int window = 1);

enum class GrowthModel { Linear, NOverLog };

struct GrowthFit {
    GrowthModel model = GrowthModel::Linear;
    double alpha = 0.0;
    double gamma = 0.0;
    double delta = 0.0;  // 1/n coefficient, Linear only
    double eta_matched = 0.0;
    long first = 0;
    long last = 0;
    double residual = 0.0;
};

// Linear: f_n = alpha n + gamma + delta/n. NOverLog: f_n = alpha n/log(n+1) + gamma.
GrowthFit fit_growth(const std::vector<double>& values, GrowthModel model, long first, long last);

}  // namespace recmeth
