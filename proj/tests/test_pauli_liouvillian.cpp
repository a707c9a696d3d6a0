#include <doctest.h>

#include <cmath>

#include "recmeth/ed_oracle.hpp"
#include "recmeth/experiments.hpp"
#include "recmeth/liouvillian.hpp"
#include "recmeth/pauli.hpp"

using namespace recmeth;

namespace {

PauliWord W(const char* s) { return PauliWord::from_string(s); }

TranslationInvariantOperator op(std::vector<std::pair<const char*, cplx>> terms) {
    std::vector<TranslationInvariantOperator::Term> t;
    for (auto& [w, a] : terms) t.emplace_back(W(w), a);
    return TranslationInvariantOperator::from_terms(t);
}

const cplx I{0, 1};

}  // namespace

TEST_CASE("word products") {
    auto zx = multiply_words(W("Z"), W("X"), 0);
    CHECK(zx.phase() == I);
    CHECK(zx.word == W("Y"));

    auto xx = multiply_words(W("X"), W("X"), 0);
    CHECK(xx.identity());
    CHECK(xx.phase() == cplx(1, 0));

    auto shifted = multiply_words(W("X"), W("X"), 1);
    CHECK(shifted.phase() == cplx(1, 0));
    CHECK(shifted.word == W("XX"));
    CHECK(shifted.anchor == 0);

    // Q to the left of P re-anchors
    auto left = multiply_words(W("Z"), W("X"), -2);
    CHECK(left.word == W("X_Z"));
    CHECK(left.anchor == -2);
}

TEST_CASE("single-site table matches Pauli algebra") {
    const char* L[] = {"X", "Y", "Z"};
    // a b = delta + i eps c
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            auto r = multiply_words(W(L[a]), W(L[b]), 0);
            if (a == b) {
                CHECK(r.identity());
                continue;
            }
            const int c = 3 - a - b;
            const bool cyclic = (b - a + 3) % 3 == 1;
            CHECK(r.word == W(L[c]));
            CHECK(r.phase() == (cyclic ? I : -I));
        }
}

TEST_CASE("word canonical form") {
    PauliWord w = W("__XZ_");
    CHECK(w.canonical() == W("XZ"));
    CHECK(W("XZ_Y").to_string() == "XZ_Y");
    CHECK(W("XZ_Y").length() == 4);
    CHECK(anticommute(W("X"), W("Z")));
    CHECK_FALSE(anticommute(W("XX"), W("ZZ")));
}

TEST_CASE("inner products") {
    auto xx = op({{"XX", 1}});
    CHECK(inner_product(xx, xx) == cplx(1, 0));
    CHECK(inner_product(op({{"X", 1}}), op({{"Y", 1}})) == cplx(0, 0));
    auto a = op({{"Z", 0.5}, {"XY", 2.0 * I}});
    CHECK(inner_product(a, a).real() == doctest::Approx(4.25));
    CHECK(a.norm2() == doctest::Approx(4.25));
    CHECK(inner_product(a, a).imag() == 0);
}

TEST_CASE("commutator examples") {
    const auto h = SpinHamiltonian::from_terms({{"XX", 1.0}});
    auto c = commutator_with_hamiltonian(h, op({{"Z", 1}}));
    REQUIRE(c.size() == 2);
    CHECK(c.amplitude(W("XY")) == cplx(0, -2));
    CHECK(c.amplitude(W("YX")) == cplx(0, -2));
    CHECK(commutator_with_hamiltonian(h, op({{"X", 1}})).empty());

    // i[H, A] stays real for real A
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    auto a = op({{"Z", 0.3}, {"XZ", -1.2}, {"Y_Y", 0.7}});
    auto la = commutator_with_hamiltonian(ising, a).scaled(I);
    for (const auto& [w, amp] : la.terms()) CHECK(std::fabs(amp.imag()) < 1e-15);
}

TEST_CASE("commutator memory budget") {
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    auto a = op({{"Z", 1}, {"XZ", 1}});
    CHECK_THROWS_AS(commutator_with_hamiltonian(ising, a, 16), ResourceLimit);
}

TEST_CASE("energy current") {
    auto zsum = SpinHamiltonian::from_terms({{"Z", 1.0}});
    CHECK(energy_current(zsum).j.empty());

    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    auto ec = energy_current(ising);
    CHECK(ec.telescoping_residual < 1e-12);
    CHECK(ec.j.norm2() > 0);

    // integrable point: diagonal element vanishes
    const auto tfim = SpinHamiltonian::mixed_field_ising(-1.05, 0.0);
    auto j = energy_current(tfim).j;
    auto lj = commutator_with_hamiltonian(tfim, j);
    CHECK(std::abs(inner_product(j, lj)) < 1e-12);
}

TEST_CASE("lanczos on XX with Z seed") {
    const auto h = SpinHamiltonian::from_terms({{"XX", 1.0}});
    auto run = lanczos_run(h, op({{"Z", 1}}), 4);
    REQUIRE(run.b.size() >= 1);
    CHECK(run.b[0] == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));

    auto ed = ed_oracle_coeffs(h, op({{"Z", 1}}), 8, 4);
    CHECK(std::fabs(ed.b[0] - 2 * std::sqrt(2.0)) < 1e-12);

    CHECK_THROWS_AS(lanczos_run(h, op({{"Z", 2}}), 3), ValidationError);
}

TEST_CASE("first coefficient is the commutator norm") {
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    const auto o0 = ising_seed(IsingModel{}).o0;
    auto run = lanczos_run(ising, o0, 1);
    auto lo = commutator_with_hamiltonian(ising, o0);
    CHECK(run.b[0] * run.b[0] == doctest::Approx(lo.norm2()).epsilon(1e-13));
}

TEST_CASE("ising lanczos against ring oracle") {
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    const auto o0 = ising_seed(IsingModel{}).o0;
    const int steps = 10;
    auto run = lanczos_run(ising, o0, steps);
    REQUIRE(run.b.size() == steps);
    CHECK(run.status == LanczosStatus::Completed);
    CHECK(run.max_overlap < 1e-9);
    CHECK(run.max_diagonal < 1e-10);
    for (double b : run.b) CHECK(b > 0);

    auto ed = ed_oracle_coeffs(ising, o0, 10, steps);
    int reliable = 0;
    for (int n = 0; n < steps; ++n)
        if (ed.reliable[n]) {
            ++reliable;
            CHECK(std::fabs(run.b[n] - ed.b[n]) < 1e-10);
        }
    CHECK(reliable >= 5);
    CHECK_FALSE(ed.reliable.back());

    // ring size independence inside the window
    auto ed8 = ed_oracle_coeffs(ising, o0, 8, 6);
    for (int n = 0; n < 6; ++n)
        if (ed8.reliable[n]) CHECK(std::fabs(ed8.b[n] - ed.b[n]) < 1e-10);
}

TEST_CASE("determinism and pruning flag") {
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    const auto o0 = ising_seed(IsingModel{}).o0;
    auto a = lanczos_run(ising, o0, 8);
    auto b = lanczos_run(ising, o0, 8);
    CHECK(a.b == b.b);
    CHECK_FALSE(a.approximate);
    LanczosOptions opt;
    opt.prune_threshold = 1e-3;
    auto p = lanczos_run(ising, o0, 8, opt);
    CHECK(p.approximate);
    CHECK(p.prune_threshold == 1e-3);
}

TEST_CASE("lanczos memory budget stops with a status") {
    const auto ising = SpinHamiltonian::mixed_field_ising(-1.05, 0.5);
    const auto o0 = ising_seed(IsingModel{}).o0;
    LanczosOptions opt;
    opt.memory_budget = 1 << 16;
    auto run = lanczos_run(ising, o0, 30, opt);
    CHECK(run.status == LanczosStatus::MemoryBudget);
    CHECK(run.b.size() < 30);
    CHECK_FALSE(run.message.empty());
}
