#include <doctest.h>

#include <cmath>
#include <numbers>

#include "recmeth/products.hpp"
#include "recmeth/smoothness.hpp"
#include "recmeth/stitching.hpp"

using namespace recmeth;
using cd = std::complex<double>;

namespace {
const double kPi2over8 = std::numbers::pi * std::numbers::pi / 8;
}

TEST_CASE("constant tail closed form") {
    const cd g = constant_tail_green<double>(cd(0, -3), 1.0);
    CHECK(std::abs(g) == doctest::Approx((std::sqrt(13.0) - 3) / 2).epsilon(1e-14));
    CHECK(g.imag() > 0);
    CHECK(std::fabs(g.real()) < 1e-15);
    // fixed point and the decaying branch off the axis
    for (cd z : {cd(0.5, -0.2), cd(-2.5, -1), cd(3, -0.01)}) {
        const cd h = constant_tail_green<double>(z, 1.3);
        CHECK(std::abs(h - 1.0 / (z - 1.69 * h)) < 1e-14);
        CHECK(h.imag() * z.imag() < 0);
        // independent route: descent on the constant sequence
        const cd d = descent_green<double>(CoeffSequence::custom("1.3"), z).value;
        CHECK(std::abs(h - d) < 1e-8);
    }
}

TEST_CASE("stitched green converges to the infinite fraction") {
    const auto ti = CoeffSequence::toy_irrelevant();
    const cd z(0, -1);
    DescentOptions ref_opt;
    ref_opt.tol = 1e-14;
    const cd ref = descent_green<double>(ti, z, 0, ref_opt).value;
    double prev = INFINITY;
    for (long N : {5L, 20L, 80L, 320L}) {
        const double err = std::abs(stitched_green(ti, StitchPlan::mp(N, 1, 1), z).value - ref);
        CHECK(err < prev);
        prev = err;
    }
    const auto e = stitched_green(ti, StitchPlan::constant(50), z);
    CHECK(e.method == "constant-stitch");
    CHECK(e.N == 50);
}

TEST_CASE("stitch plan validation") {
    CHECK_THROWS_AS(StitchPlan::mp(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(StitchPlan::mp(10, -1, 1), ValidationError);
    CHECK_THROWS_AS(StitchPlan::constant(0), ValidationError);
    const auto short_table = CoeffSequence::tabulated({1, 2, 3});
    CHECK_THROWS_AS(stitched_green(short_table, StitchPlan::mp(5, 1, 1), cd(0, -1)), ValidationError);
    CHECK_THROWS_AS(stitched_green(CoeffSequence::toy_relevant(), StitchPlan::constant(5), cd(1, 0)),
                    ValidationError);
    CHECK_THROWS_AS(zero_freq_stitched(CoeffSequence::toy_relevant(), StitchPlan::constant(1)), ValidationError);
}

TEST_CASE("matched plan") {
    const auto lin = CoeffSequence::custom("n + 1");
    const auto plan = StitchPlan::mp_matched(lin, 200, 50, 199);
    const auto& mp = std::get<MpTerminator>(plan.terminator);
    CHECK(mp.alpha == doctest::Approx(1).epsilon(1e-10));
    CHECK(mp.eta == doctest::Approx(3).epsilon(1e-8));
    CHECK_FALSE(plan.match_report.empty());
}

TEST_CASE("zero frequency formula") {
    const auto tr = CoeffSequence::toy_relevant();
    for (long N : {2L, 3L, 50L, 51L}) {
        const cd c = zero_freq_stitched(tr, StitchPlan::constant(N));
        CHECK(c.real() == 0);
        CHECK(c.imag() == doctest::Approx(pi_product(tr, N)).epsilon(1e-13));
    }
    // pure MP(1,2) stitched to itself gives its own value i at every level
    const auto mp12 = CoeffSequence::meixner_pollaczek(1, 2);
    for (long N : {2L, 7L, 100L}) CHECK(std::abs(zero_freq_stitched(mp12, StitchPlan::mp(N, 1, 2)) - cd(0, 1)) < 1e-12);

    const auto ti = CoeffSequence::toy_irrelevant();
    CHECK(std::fabs(std::abs(zero_freq_stitched(ti, StitchPlan::mp(10000, 1, 1))) - kPi2over8) < 1e-4);
}

TEST_CASE("zero frequency parity consistency") {
    for (const auto& [seq, plan_eta] : {std::pair{CoeffSequence::toy_irrelevant(), 1.0},
                                        std::pair{CoeffSequence::toy_relevant(), 3.0}}) {
        double prev = INFINITY;
        for (long N : {100L, 1000L, 10000L, 100000L}) {
            const double gap = std::abs(zero_freq_stitched(seq, StitchPlan::mp(N, 1, plan_eta)) -
                                        zero_freq_stitched(seq, StitchPlan::mp(N + 1, 1, plan_eta)));
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("zero frequency agrees with the small-y limit") {
    const auto ti = CoeffSequence::toy_irrelevant();
    const auto plan = StitchPlan::mp(100, 1, 1);
    const cd zf = zero_freq_stitched(ti, plan);
    const cd near = stitched_green(ti, plan, cd(0, -1e-7)).value;
    CHECK(std::abs(near - zf) < 1e-6);
}

TEST_CASE("finite-Im bound") {
    const auto ti = CoeffSequence::toy_irrelevant();
    const auto mp11 = CoeffSequence::meixner_pollaczek(1, 1);
    CHECK(error_bound_finite_im(ti, ti, cd(0, -1), 10).value == 0);

    const auto shifted = CoeffSequence::custom("n + 0.1");
    const auto lin = CoeffSequence::custom("n");
    CHECK(error_bound_finite_im(shifted, lin, cd(0, -1), 10).value == doctest::Approx(0.2).epsilon(1e-12));

    // |db| = n^2/sqrt(n^2 - 1/4) - n = 1/(8n) + ..., sup at n = N + 1
    const double b100 = error_bound_finite_im(ti, mp11, cd(0, -1), 100).value;
    CHECK(b100 == doctest::Approx(2.0 / (8 * 101)).epsilon(1e-4));
    const double b200 = error_bound_finite_im(ti, mp11, cd(0, -1), 200).value;
    CHECK(b200 / b100 == doctest::Approx(101.0 / 201).epsilon(1e-3));
    CHECK(error_bound_finite_im(ti, mp11, cd(0, -2), 100).value == doctest::Approx(b100 / 4));

    // still growing at the horizon
    CHECK_THROWS_AS(error_bound_finite_im(CoeffSequence::custom("n + log(n)"), lin, cd(0, -1), 10), ValidationError);
}

TEST_CASE("zero-frequency bound classes") {
    const auto lin = CoeffSequence::custom("n");
    auto same = error_bound_zero_freq(lin, lin, 10, 1000, 1.0);
    CHECK(same.value == 0);
    CHECK(same.decay_class == "identical");

    auto conv = error_bound_zero_freq(lin, CoeffSequence::custom("n + n^(-2)"), 100, 6400, 1.0);
    CHECK(conv.sufficiency_holds);
    CHECK(std::isfinite(conv.value));
    // sum_{n > 100} n^-3 ~ 1/(2 100^2)
    CHECK(conv.value / 2 == doctest::Approx(0.5 / (100.5 * 100.5)).epsilon(0.02));

    auto marginal = error_bound_zero_freq(lin, CoeffSequence::custom("n + 1/log(n)"), 100, 6400, 1.0);
    CHECK_FALSE(marginal.sufficiency_holds);
    CHECK(std::isinf(marginal.value));

    // monotone in N
    const auto ti = CoeffSequence::toy_irrelevant();
    const auto mp11 = CoeffSequence::meixner_pollaczek(1, 1);
    double prev = INFINITY;
    for (long N : {50L, 100L, 400L, 1600L}) {
        const double v = error_bound_zero_freq(ti, mp11, N, 64 * N, 1.0).value;
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS(error_bound_zero_freq(ti, mp11, 100, 100, 1.0), ValidationError);
}

TEST_CASE("zero-frequency bound with calibrated M on the irrelevant toy") {
    const auto ti = CoeffSequence::toy_irrelevant();
    const auto mp11 = CoeffSequence::meixner_pollaczek(1, 1);
    const long n0 = 100;
    const double e0 = std::fabs(std::abs(zero_freq_stitched(ti, StitchPlan::mp(n0, 1, 1))) - kPi2over8);
    const double M = calibrate_zero_freq_m(error_bound_zero_freq(ti, mp11, n0, 64 * n0, 1.0), e0);
    CHECK(M > 0);
    for (long N : {100L, 300L, 1000L, 3000L, 10000L}) {
        const double err = std::fabs(std::abs(zero_freq_stitched(ti, StitchPlan::mp(N, 1, 1))) - kPi2over8);
        CHECK(error_bound_zero_freq(ti, mp11, N, 64 * N, M).value >= err * (1 - 1e-9));
    }
}

TEST_CASE("error series") {
    const auto ti = CoeffSequence::toy_irrelevant(), tr = CoeffSequence::toy_relevant();
    const auto mp11 = CoeffSequence::meixner_pollaczek(1, 1), mp13 = CoeffSequence::meixner_pollaczek(1, 3);
    CHECK(stitch_error_series(ti, ti, 100).estimate == 0);

    ExperimentSeries a, b;
    for (long N : {100L, 200L, 400L, 800L, 1600L, 3200L}) {
        auto e1 = stitch_error_series(ti, mp11, N);
        auto e2 = stitch_error_series(tr, mp13, N);
        CHECK(e1.alternating);
        CHECK_FALSE(e2.alternating);
        a.x.push_back(N);
        a.y.push_back(e1.estimate);
        b.x.push_back(N);
        b.y.push_back(e2.estimate);
    }
    CHECK(rate_fit(a, RateFamily::PowerLaw).exponent == doctest::Approx(-2).epsilon(0.01));
    CHECK(rate_fit(b, RateFamily::PowerLaw).exponent == doctest::Approx(-2.0 / 3).epsilon(0.02));

    auto s = stitch_error_series(ti, mp11, 100);
    const double err = std::fabs(std::abs(zero_freq_stitched(ti, StitchPlan::mp(100, 1, 1))) - kPi2over8);
    calibrate_error_series(s, err);
    CHECK(s.fitted_c > 0);
    CHECK(std::fabs(s.fitted_c * s.estimate) == doctest::Approx(err));
}
