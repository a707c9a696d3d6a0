#pragma once

#include <cstddef>
#include <vector>

#include "recmeth/pauli.hpp"

namespace recmeth {

struct EdCoefficients {
    std::vector<double> b;         // b_1..b_N from the ring
    std::vector<bool> reliable;    // operator support of L O_{n-1} below L
};

// Lanczos on a periodic ring of L sites with dense operators and the normalized trace
// inner product. H must be real in the computational basis (even number of Y per term).
EdCoefficients ed_oracle_coeffs(const SpinHamiltonian& h, const TranslationInvariantOperator& o0, int sites,
                                int steps, std::size_t memory_budget = std::size_t{3} << 30);

}  // namespace recmeth
