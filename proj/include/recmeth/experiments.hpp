#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "recmeth/coeff_sequence.hpp"
#include "recmeth/liouvillian.hpp"
#include "recmeth/smoothness.hpp"
#include "recmeth/stitching.hpp"

namespace recmeth {

// Runs fn(0..count-1) on up to `workers` threads; the first exception is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct IsingModel {
    double gz = -1.05;
    double gx = 0.5;
    int steps = 24;
    double prune = 0.0;
    std::size_t memory_budget = LanczosOptions{}.memory_budget;

    SpinHamiltonian hamiltonian() const { return SpinHamiltonian::mixed_field_ising(gz, gx); }
    // model, parameters, steps and prune threshold; the memory budget does not change the result
    std::string canonical() const;
};

// Normalized energy current of the model and <j,j>/<h,h>.
struct IsingSeed {
    TranslationInvariantOperator o0;
    double norm_ratio = 0.0;
};
IsingSeed ising_seed(const IsingModel& m);

struct CoeffCacheEntry {
    std::string key;  // FNV-1a of the canonical model text, hex
    std::string path;
    std::vector<double> b;
    std::map<std::string, std::string> metadata;
    bool cache_hit = false;
    std::string warning;  // set when a stored file was rejected and recomputed
};

std::string cache_key(const IsingModel& m);
// Loads the coefficients for this model from cache_dir or runs Lanczos and stores them.
CoeffCacheEntry cache_coeffs(const IsingModel& m, const std::string& cache_dir);

// Zero-frequency stitched values along a sorted N grid, one streaming pass over the products.
struct ZeroFreqSeries {
    std::vector<long> N;
    std::vector<double> value;  // |G_N(-i0+)|
};
ZeroFreqSeries zero_freq_series(const CoeffSequence& b, const Terminator& t, const std::vector<long>& grid);

// |q_N/p_N - G| over the grid against a long double descent reference; fitted power of N.
struct TruncationScan {
    double im_z = -1.0;
    std::vector<long> N;
    std::vector<double> error;
    double reference_imag = 0.0;
    ScalingFit fit;
};
TruncationScan truncation_scan(const CoeffSequence& seq, double im_z, const std::vector<long>& grid, int workers = 1);

// Aitken delta-squared limit of three values on a geometric grid.
double aitken_limit(double a, double b, double c);

struct ExperimentSpec {
    std::string name;  // fig1a fig1b fig2 fig3 fig4 fig5 custom
    std::map<std::string, std::string> params;
    std::string output_dir = ".";
    std::string cache_dir;  // default <output_dir>/cache
    int workers = 1;
    bool extended = false;
};

struct ExperimentResult {
    std::string name;
    std::vector<std::string> files;
    nlohmann::json summary;
    bool pass = false;
};

std::vector<std::string> builtin_experiments();
std::string experiment_help(const std::string& name);
ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace recmeth
