#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recmeth/experiments.hpp"
#include "recmeth/products.hpp"

using namespace recmeth;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("recmeth_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                        if (i == 7) throw NonConvergence("boom");
                    }),
                    NonConvergence);
}

TEST_CASE("aitken limit") {
    // a_k = L + c r^k
    CHECK(aitken_limit(3 + 0.5, 3 + 0.25, 3 + 0.125) == doctest::Approx(3).epsilon(1e-14));
    CHECK(aitken_limit(2, 2, 2) == 2);
}

TEST_CASE("zero-frequency series matches one-off stitching") {
    const auto tr = CoeffSequence::toy_relevant();
    const std::vector<long> grid{2, 3, 10, 101, 1000};
    const auto a = zero_freq_series(tr, MpTerminator{1, 3}, grid);
    const auto c = zero_freq_series(tr, ConstantTerminator{}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.value[i] == doctest::Approx(std::abs(zero_freq_stitched(tr, StitchPlan::mp(grid[i], 1, 3)))).epsilon(1e-12));
        CHECK(c.value[i] == doctest::Approx(pi_product(tr, grid[i])).epsilon(1e-12));
    }
    CHECK_THROWS_AS(zero_freq_series(tr, ConstantTerminator{}, {10, 5}), ValidationError);
}

TEST_CASE("coefficient cache") {
    const auto dir = scratch("cache").string();
    IsingModel m;
    m.steps = 5;
    const auto first = cache_coeffs(m, dir);
    CHECK_FALSE(first.cache_hit);
    CHECK(first.b.size() == 5);
    const auto second = cache_coeffs(m, dir);
    CHECK(second.cache_hit);
    CHECK(second.b == first.b);
    CHECK(second.metadata.at("model") == m.canonical());

    IsingModel pruned = m;
    pruned.prune = 1e-12;
    CHECK(cache_key(pruned) != cache_key(m));
    IsingModel budget = m;
    budget.memory_budget /= 2;
    CHECK(cache_key(budget) == cache_key(m));

    // a corrupted file is rejected and rebuilt
    std::string text = slurp(first.path);
    const auto at = text.rfind('\n', text.size() - 2);
    text = text.substr(0, at + 1) + "-1.0\n";
    std::ofstream(first.path) << text;
    const auto third = cache_coeffs(m, dir);
    CHECK_FALSE(third.cache_hit);
    CHECK_FALSE(third.warning.empty());
    CHECK(third.b == first.b);
    CHECK(cache_coeffs(m, dir).cache_hit);
    fs::remove_all(dir);
}

TEST_CASE("experiment output is reproducible") {
    const auto d1 = scratch("run1"), d2 = scratch("run2");
    ExperimentSpec s;
    s.name = "fig1a";
    s.params = {{"n_min", "100"}, {"n_max", "10000"}, {"points", "8"}};
    s.output_dir = d1.string();
    const auto r1 = run_experiment(s);
    s.output_dir = d2.string();
    s.workers = 2;
    run_experiment(s);
    CHECK(r1.name == "fig1a");
    CHECK(slurp((d1 / "fig1a.csv").string()) == slurp((d2 / "fig1a.csv").string()));
    CHECK(slurp((d1 / "fig1a_summary.json").string()) == slurp((d2 / "fig1a_summary.json").string()));
    CHECK(fs::exists(d1 / "fig1a_meta.json"));
    CHECK(slurp((d1 / "fig1a.csv").string()).rfind("N,", 0) == 0);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("experiment errors name the experiment") {
    const auto d = scratch("bad");
    ExperimentSpec s;
    s.name = "fig1a";
    s.params = {{"n_min", "100"}, {"n_max", "50"}, {"points", "5"}};
    s.output_dir = d.string();
    try {
        run_experiment(s);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).rfind("fig1a:", 0) == 0);
    }
    s.name = "fig9";
    CHECK_THROWS_AS(run_experiment(s), ValidationError);
    for (const auto& n : builtin_experiments()) CHECK_FALSE(experiment_help(n).empty());
    fs::remove_all(d);
}
