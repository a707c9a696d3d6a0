#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace recmeth {

using cplx = std::complex<double>;

// Bit j of x/z marks X/Z content on site j; Y sets both. Canonical words have bit 0 occupied.
struct PauliWord {
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    bool is_identity() const { return (x | z) == 0; }
    int length() const { return is_identity() ? 0 : 64 - std::countl_zero(x | z); }
    bool is_canonical() const { return !is_identity() && ((x | z) & 1u); }
    char letter(int site) const;
    int weight() const { return std::popcount(x | z); }
    int y_count() const { return std::popcount(x & z); }

    // Shift so the leftmost non-identity letter sits at offset 0.
    PauliWord canonical() const;
    PauliWord shifted(int by) const { return {x << by, z << by}; }

    static PauliWord from_string(const std::string& letters);  // "XZ_Y"; '_' or 'I' is identity
    std::string to_string() const;

    friend bool operator==(const PauliWord&, const PauliWord&) = default;
    friend bool operator<(const PauliWord& a, const PauliWord& b) {
        return a.x != b.x ? a.x < b.x : a.z < b.z;
    }
    template <class H>
    friend H AbslHashValue(H h, const PauliWord& w) {
        return H::combine(std::move(h), w.x, w.z);
    }
};

inline bool anticommute(const PauliWord& a, const PauliWord& b) {
    return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) != 0;
}

// i^k for k mod 4.
inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

struct WordProduct {
    int phase_pow = 0;  // product = i^phase_pow * word
    PauliWord word;     // canonical, or identity
    int anchor = 0;     // site of word's offset 0 relative to P's offset 0
    bool identity() const { return word.is_identity(); }
    cplx phase() const { return i_pow(phase_pow); }
};

// P * T^offset(Q), both anchored at 0 before the shift.
WordProduct multiply_words(const PauliWord& p, const PauliWord& q, int offset);

// Sorted, duplicate-free list of (word, amplitude).
class TranslationInvariantOperator {
public:
    using Term = std::pair<PauliWord, cplx>;

    TranslationInvariantOperator() = default;
    // Merges duplicates (summed in input order) and drops exact zeros.
    static TranslationInvariantOperator from_terms(std::vector<Term> terms);
    // Caller guarantees sorted, unique, canonical.
    static TranslationInvariantOperator from_sorted(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    cplx amplitude(const PauliWord& w) const;
    double norm2() const;
    int max_length() const;

    TranslationInvariantOperator scaled(cplx c) const;
    // a*A + b*B, merged in word order.
    static TranslationInvariantOperator combine(cplx a, const TranslationInvariantOperator& A, cplx b,
                                                const TranslationInvariantOperator& B);
    // Drops |amp| < threshold.
    void prune(double threshold);

private:
    std::vector<Term> terms_;
};

cplx inner_product(const TranslationInvariantOperator& a, const TranslationInvariantOperator& b);

struct SpinHamiltonian {
    std::vector<std::pair<PauliWord, double>> terms;  // density anchored at site 0

    int range() const;
    static SpinHamiltonian mixed_field_ising(double gz, double gx);
    static SpinHamiltonian from_terms(const std::vector<std::pair<std::string, double>>& terms);
    // Energy density h_0 as an operator density.
    TranslationInvariantOperator density() const;
};

}  // namespace recmeth
