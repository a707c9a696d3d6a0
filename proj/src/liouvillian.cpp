#include "recmeth/liouvillian.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cmath>

#include "recmeth/errors.hpp"

namespace recmeth {

namespace {

using Accumulator = absl::flat_hash_map<PauliWord, cplx>;

constexpr std::size_t kSlotBytes = sizeof(std::pair<PauliWord, cplx>) + 1;
constexpr std::size_t kTermBytes = sizeof(TranslationInvariantOperator::Term);

std::size_t accumulator_bytes(const Accumulator& m) { return m.capacity() * kSlotBytes; }

void add_commutator(const SpinHamiltonian& h, const TranslationInvariantOperator& a, Accumulator& acc,
                    std::size_t budget, std::size_t fixed_bytes) {
    std::size_t since_check = 0;
    for (const auto& [w, amp] : a.terms()) {
        const int len = w.length();
        for (const auto& [hw, c] : h.terms) {
            const int r = hw.length();
            for (int off = -(len - 1); off <= r - 1; ++off) {
                const int sp = off < 0 ? -off : 0, sq = off > 0 ? off : 0;
                if (len + sq > 64 || r + sp > 64) throw ResourceLimit("operator support exceeds 64 sites");
                if (!anticommute(hw.shifted(sp), w.shifted(sq))) continue;
                const WordProduct p = multiply_words(hw, w, off);
                acc[p.word] += (2.0 * c) * p.phase() * amp;
            }
        }
        if (budget != 0 && ++since_check >= (1u << 16)) {
            since_check = 0;
            if (fixed_bytes + accumulator_bytes(acc) > budget)
                throw ResourceLimit("commutator accumulator exceeds the memory budget");
        }
    }
    if (budget != 0 && fixed_bytes + accumulator_bytes(acc) > budget)
        throw ResourceLimit("commutator accumulator exceeds the memory budget");
}

TranslationInvariantOperator drain(Accumulator& acc) {
    std::vector<TranslationInvariantOperator::Term> terms;
    terms.reserve(acc.size());
    for (auto& kv : acc)
        if (kv.second != cplx{}) terms.emplace_back(kv.first, kv.second);
    Accumulator().swap(acc);
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return TranslationInvariantOperator::from_sorted(std::move(terms));
}

void local_add(LocalOperator& op, int anchor, const PauliWord& w, cplx amp) {
    if (w.is_identity()) return;
    op[{anchor, w}] += amp;
}

// i[T^ya a, T^yb b] for words anchored at ya, yb.
void local_commutator(LocalOperator& out, int ya, const PauliWord& a, int yb, const PauliWord& b, cplx amp) {
    const int off = yb - ya;
    const int sp = off < 0 ? -off : 0, sq = off > 0 ? off : 0;
    if (!anticommute(a.shifted(sp), b.shifted(sq))) return;
    const WordProduct p = multiply_words(a, b, off);
    local_add(out, ya + p.anchor, p.word, cplx{0, 2} * p.phase() * amp);
}

}  // namespace

TranslationInvariantOperator commutator_with_hamiltonian(const SpinHamiltonian& h,
                                                         const TranslationInvariantOperator& a,
                                                         std::size_t memory_budget) {
    Accumulator acc;
    add_commutator(h, a, acc, memory_budget, 0);
    return drain(acc);
}

EnergyCurrent energy_current(const SpinHamiltonian& h) {
    const int r = h.range();
    // j_0 = sum over y < 0 <= z of i[h_y, h_z]
    LocalOperator j0;
    for (int y = -(r - 1); y <= -1; ++y)
        for (int z = 0; z <= r - 1; ++z)
            for (const auto& [wa, ca] : h.terms)
                for (const auto& [wb, cb] : h.terms) local_commutator(j0, y, wa, z, wb, ca * cb);

    // Continuity with position-anchored operators: i[H, h_0] against j_0 - j_1.
    LocalOperator lhs;
    for (int y = -(r - 1); y <= r - 1; ++y)
        for (const auto& [wa, ca] : h.terms)
            for (const auto& [wb, cb] : h.terms) local_commutator(lhs, y, wa, 0, wb, ca * cb);
    LocalOperator diff = lhs;
    for (const auto& [key, amp] : j0) {
        diff[key] -= amp;
        diff[{key.first + 1, key.second}] += amp;
    }
    double residual = 0;
    for (const auto& kv : diff) residual = std::max(residual, std::abs(kv.second));
    if (residual > 1e-12)
        throw NonConvergence("energy current fails the continuity check (residual " + std::to_string(residual) + ")");

    std::vector<TranslationInvariantOperator::Term> terms;
    for (const auto& [key, amp] : j0)
        if (amp != cplx{}) terms.emplace_back(key.second, amp);
    return {TranslationInvariantOperator::from_terms(std::move(terms)), residual};
}

double current_norm_ratio(const SpinHamiltonian& h, const TranslationInvariantOperator& j) {
    const auto q = h.density();
    return inner_product(j, j).real() / inner_product(q, q).real();
}

LanczosRun lanczos_run(const SpinHamiltonian& h, const TranslationInvariantOperator& o0, int steps,
                       const LanczosOptions& options) {
    require(steps >= 1, "lanczos_run needs at least one step");
    require(std::fabs(o0.norm2() - 1.0) <= 1e-12, "initial operator must be normalized");
    require(options.prune_threshold >= 0, "prune threshold must be nonnegative");

    LanczosRun run;
    run.prune_threshold = options.prune_threshold;
    run.approximate = options.prune_threshold > 0;

    TranslationInvariantOperator prev, cur = o0;
    double b_cur = 1.0;  // b_0
    for (int n = 0; n < steps; ++n) {
        Accumulator acc;
        try {
            const std::size_t fixed = (prev.size() + cur.size()) * kTermBytes;
            if (options.memory_budget != 0 && fixed > options.memory_budget)
                throw ResourceLimit("Krylov vectors exceed the memory budget");
            add_commutator(h, cur, acc, options.memory_budget, fixed);
        } catch (const ResourceLimit& e) {
            run.status = LanczosStatus::MemoryBudget;
            run.message = e.what();
            return run;
        }
        cplx diag{};
        for (const auto& [w, amp] : cur.terms())
            if (auto it = acc.find(w); it != acc.end()) diag += std::conj(amp) * it->second;
        run.max_diagonal = std::max(run.max_diagonal, std::abs(diag));

        for (const auto& [w, amp] : prev.terms()) acc[w] -= b_cur * amp;
        TranslationInvariantOperator next = drain(acc);
        const double b_next = std::sqrt(next.norm2());
        if (!(b_next >= options.breakdown_tol)) {
            run.status = LanczosStatus::Breakdown;
            run.message = "breakdown at step " + std::to_string(n + 1);
            return run;
        }
        next = next.scaled(1.0 / b_next);
        if (options.prune_threshold > 0) {
            next.prune(options.prune_threshold);
            next = next.scaled(1.0 / std::sqrt(next.norm2()));
        }
        run.max_overlap = std::max(run.max_overlap, std::abs(inner_product(next, cur)));
        if (!prev.empty()) run.max_overlap = std::max(run.max_overlap, std::abs(inner_product(next, prev)));

        run.b.push_back(b_next);
        run.support_growth.push_back(next.max_length());
        run.term_counts.push_back(next.size());
        prev = std::move(cur);
        cur = std::move(next);
        b_cur = b_next;
    }
    return run;
}

std::string to_string(LanczosStatus s) {
    switch (s) {
        case LanczosStatus::Completed: return "completed";
        case LanczosStatus::Breakdown: return "breakdown";
        case LanczosStatus::MemoryBudget: return "memory-budget";
    }
    return "unknown";
}

}  // namespace recmeth
