#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "recmeth/pauli.hpp"

namespace recmeth {

// Density of [H, A]. Throws ResourceLimit if the accumulator would exceed memory_budget bytes.
TranslationInvariantOperator commutator_with_hamiltonian(const SpinHamiltonian& h,
                                                         const TranslationInvariantOperator& a,
                                                         std::size_t memory_budget = 0);

// Operator with explicit site positions, used for the continuity check.
using LocalOperator = std::map<std::pair<int, PauliWord>, cplx>;

struct EnergyCurrent {
    TranslationInvariantOperator j;  // density of j_0, the current across the bond (-1, 0)
    double telescoping_residual = 0.0;
};

// Solves i[H, h_x] = j_x - j_{x+1}. Throws NonConvergence if the telescoping check fails.
EnergyCurrent energy_current(const SpinHamiltonian& h);

// <j,j>/<h,h> with h the energy density.
double current_norm_ratio(const SpinHamiltonian& h, const TranslationInvariantOperator& j);

enum class LanczosStatus { Completed, Breakdown, MemoryBudget };

struct LanczosOptions {
    double prune_threshold = 0.0;
    double breakdown_tol = 1e-13;
    std::size_t memory_budget = std::size_t{5} << 29;  // 2.5 GiB
};

struct LanczosRun {
    std::vector<double> b;  // b_1..b_N
    std::vector<int> support_growth;
    std::vector<std::size_t> term_counts;
    double prune_threshold = 0.0;
    bool approximate = false;
    LanczosStatus status = LanczosStatus::Completed;
    double max_overlap = 0.0;   // max |<O_m, O_n>| for 1 <= |m-n| <= 2
    double max_diagonal = 0.0;  // max |<O_n, L O_n>|
    std::string message;
};

LanczosRun lanczos_run(const SpinHamiltonian& h, const TranslationInvariantOperator& o0, int steps,
                       const LanczosOptions& options = {});

std::string to_string(LanczosStatus s);

}  // namespace recmeth
