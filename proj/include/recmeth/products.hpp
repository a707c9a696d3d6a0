#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "recmeth/coeff_sequence.hpp"
#include "recmeth/numerics.hpp"

namespace recmeth {

// log Pi_n for n = 1..n_max, Pi_n = (1/b_n) prod_{k <= n/2} b_{2k}^2 / b_{2k-1}^2 (always positive).
struct ProductTrace {
    std::vector<double> log_values;  // index n-1

    long n_max() const { return static_cast<long>(log_values.size()); }
    double log_value(long n) const { return log_values[n - 1]; }
    double value(long n) const;
};

// log(b_2k^2 / b_2k-1^2)
long double pair_log(const CoeffSequence& seq, long k);

ProductTrace pi_trace(const CoeffSequence& seq, long n_max);
double log_pi_product(const CoeffSequence& seq, long n);
double pi_product(const CoeffSequence& seq, long n);

// i 2^(eta-2) Gamma(eta/2)^2 / (alpha Gamma(eta))
std::complex<double> mp_pi_limit(double alpha, double eta);

enum class Convergence { FiniteNonzero, Divergent, Vanishing, Marginal };
std::string to_string(Convergence c);

struct CriterionResult {
    Convergence verdict = Convergence::Marginal;
    std::vector<double> checkpoints;  // n at each dyadic checkpoint
    std::vector<double> accumulated;  // running integral of s/f up to the checkpoint
    IncrementReport report;
};

// Integrates s_n/f_n over dyadic blocks in n (quadrature in log n) up to n_max.
CriterionResult convergence_criterion(const std::function<double(double)>& f, const std::function<double(double)>& s,
                                      double n_max);
// Discrete version on a numerical split.
CriterionResult convergence_criterion(const StaggerDecomposition& split);

struct SpectralOrigin {
    std::complex<double> raw_n;     // i Pi_N
    std::complex<double> raw_next;  // i Pi_{N+1}
    std::complex<double> averaged;
    double spread = 0.0;  // |Pi_N - Pi_{N+1}| / 2
    Convergence trend = Convergence::Marginal;
    bool averaged_cauchy = false;  // log of the two-parity average settles (a product tending to 0 does not)
    std::string note = "conjectural: assumes the limit swap of the zero-frequency product";
};

SpectralOrigin spectral_origin(const CoeffSequence& seq, long N);

struct DiffusionEstimate {
    std::vector<double> d;  // D_n for n = 1..N
    double norm_ratio = 0.0;
    std::string convention_note = "D_n = norm_ratio * Pi_n; 2 D_n reported alongside";

    double two_d(long n) const { return 2.0 * d[n - 1]; }
    // Mean of the two-parity averages (D_n + D_{n+1})/2 over the last `steps` admissible n, times 2.
    double averaged_two_d(int steps) const;
};

DiffusionEstimate diffusion_estimate(const CoeffSequence& b, long N, double norm_ratio);

struct DiracDeltaResult {
    std::vector<double> partial_sums;  // S_m = sum_{n <= 2m} p_n(0)^2, m = 0..N/2
    bool delta_present = false;
    double weight = 0.0;  // 1/S when converging
    IncrementReport report;
};

// p_{2n}(0)^2 = 1/(b_{2n} Pi_{2n}); odd terms vanish.
DiracDeltaResult dirac_delta_test(const CoeffSequence& seq, long N);

}  // namespace recmeth
