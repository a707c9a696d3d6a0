#include "recmeth/pauli.hpp"

#include <algorithm>
#include <cmath>

#include "recmeth/errors.hpp"

namespace recmeth {

char PauliWord::letter(int site) const {
    const bool bx = (x >> site) & 1u, bz = (z >> site) & 1u;
    if (bx && bz) return 'Y';
    if (bx) return 'X';
    if (bz) return 'Z';
    return '_';
}

PauliWord PauliWord::canonical() const {
    if (is_identity()) return {};
    const int t = std::countr_zero(x | z);
    return {x >> t, z >> t};
}

PauliWord PauliWord::from_string(const std::string& letters) {
    require(letters.size() <= 64, "Pauli word longer than 64 sites");
    PauliWord w;
    for (std::size_t j = 0; j < letters.size(); ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        switch (letters[j]) {
            case 'X': w.x |= bit; break;
            case 'Y': w.x |= bit; w.z |= bit; break;
            case 'Z': w.z |= bit; break;
            case 'I':
            case '_': break;
            default: throw ValidationError("bad Pauli letter '" + std::string(1, letters[j]) + "'");
        }
    }
    return w;
}

std::string PauliWord::to_string() const {
    if (is_identity()) return "I";
    std::string s;
    for (int j = 0; j < length(); ++j) s.push_back(letter(j));
    return s;
}

WordProduct multiply_words(const PauliWord& p, const PauliWord& q, int offset) {
    const int sp = offset < 0 ? -offset : 0;
    const int sq = offset > 0 ? offset : 0;
    if (p.length() + sp > 64 || q.length() + sq > 64)
        throw ResourceLimit("Pauli word product exceeds 64 sites");
    const PauliWord a = p.shifted(sp), b = q.shifted(sq);
    const PauliWord c{a.x ^ b.x, a.z ^ b.z};
    // P(x,z) = i^{x.z} X^x Z^z per site; Z^z1 X^x2 = (-1)^{z1 x2} X^x2 Z^z1.
    int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) - std::popcount(c.x & c.z) +
            2 * std::popcount(a.z & b.x);
    WordProduct r;
    r.phase_pow = ((k % 4) + 4) % 4;
    if (c.is_identity()) return r;
    const int t = std::countr_zero(c.x | c.z);
    r.word = {c.x >> t, c.z >> t};
    r.anchor = t - sp;
    return r;
}

TranslationInvariantOperator TranslationInvariantOperator::from_terms(std::vector<Term> terms) {
    for (auto& t : terms) require(t.first.is_canonical(), "operator words must be canonical");
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.second == cplx{}; });
    TranslationInvariantOperator op;
    op.terms_ = std::move(out);
    return op;
}

TranslationInvariantOperator TranslationInvariantOperator::from_sorted(std::vector<Term> terms) {
    TranslationInvariantOperator op;
    op.terms_ = std::move(terms);
    return op;
}

cplx TranslationInvariantOperator::amplitude(const PauliWord& w) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const Term& t, const PauliWord& k) { return t.first < k; });
    if (it != terms_.end() && it->first == w) return it->second;
    return {};
}

double TranslationInvariantOperator::norm2() const {
    double s = 0;
    for (const auto& t : terms_) s += std::norm(t.second);
    return s;
}

int TranslationInvariantOperator::max_length() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, t.first.length());
    return m;
}

TranslationInvariantOperator TranslationInvariantOperator::scaled(cplx c) const {
    TranslationInvariantOperator op = *this;
    for (auto& t : op.terms_) t.second *= c;
    if (c == cplx{}) op.terms_.clear();
    return op;
}

TranslationInvariantOperator TranslationInvariantOperator::combine(cplx a, const TranslationInvariantOperator& A,
                                                                   cplx b, const TranslationInvariantOperator& B) {
    std::vector<Term> out;
    out.reserve(A.size() + B.size());
    auto i = A.terms_.begin(), j = B.terms_.begin();
    while (i != A.terms_.end() || j != B.terms_.end()) {
        if (j == B.terms_.end() || (i != A.terms_.end() && i->first < j->first)) {
            out.emplace_back(i->first, a * i->second);
            ++i;
        } else if (i == A.terms_.end() || j->first < i->first) {
            out.emplace_back(j->first, b * j->second);
            ++j;
        } else {
            out.emplace_back(i->first, a * i->second + b * j->second);
            ++i;
            ++j;
        }
    }
    std::erase_if(out, [](const Term& t) { return t.second == cplx{}; });
    return from_sorted(std::move(out));
}

void TranslationInvariantOperator::prune(double threshold) {
    std::erase_if(terms_, [&](const Term& t) { return std::abs(t.second) < threshold; });
}

cplx inner_product(const TranslationInvariantOperator& a, const TranslationInvariantOperator& b) {
    cplx s{};
    auto i = a.terms().begin(), j = b.terms().begin();
    while (i != a.terms().end() && j != b.terms().end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else {
            s += std::conj(i->second) * j->second;
            ++i;
            ++j;
        }
    }
    return s;
}

int SpinHamiltonian::range() const {
    int r = 0;
    for (const auto& t : terms) r = std::max(r, t.first.length());
    return r;
}

SpinHamiltonian SpinHamiltonian::mixed_field_ising(double gz, double gx) {
    return from_terms({{"XX", 1.0}, {"Z", gz}, {"X", gx}});
}

SpinHamiltonian SpinHamiltonian::from_terms(const std::vector<std::pair<std::string, double>>& terms) {
    SpinHamiltonian h;
    for (const auto& [s, c] : terms) {
        PauliWord w = PauliWord::from_string(s);
        require(w.is_canonical() && w.canonical() == w, "Hamiltonian term '" + s + "' must start with a non-identity letter");
        require(std::isfinite(c), "Hamiltonian coupling must be finite");
        if (c != 0) h.terms.emplace_back(w, c);
    }
    require(!h.terms.empty(), "Hamiltonian has no terms");
    return h;
}

TranslationInvariantOperator SpinHamiltonian::density() const {
    std::vector<TranslationInvariantOperator::Term> t;
    for (const auto& [w, c] : terms) t.emplace_back(w, cplx{c, 0});
    return TranslationInvariantOperator::from_terms(std::move(t));
}

}  // namespace recmeth
