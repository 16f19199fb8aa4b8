#include <doctest.h>

#include "rrcma/restart.hpp"

using namespace rrcma;

TEST_CASE("strategy names round-trip")
{
    CHECK(strategy_from_name("restart") == StrategyKind::Naive);
    CHECK(strategy_from_name("ipop") == StrategyKind::Ipop);
    CHECK(strategy_from_name("bipop") == StrategyKind::Bipop);
    CHECK_THROWS_AS(strategy_from_name("nope"), ConfigError);
}

TEST_CASE("naive policy is constant across restarts")
{
    StrategyState st(6);
    RngStream rng(1);
    for (int r = 0; r < 5; ++r)
    {
        const RestartParams params = next_restart_params(StrategyKind::Naive, st, 2.0, rng);
        CHECK(params.lambda == 6);
        CHECK(params.sigma0 == 2.0);
        st.apply_segment_evals(500);
    }
    CHECK(st.restarts_done == 5);
}

TEST_CASE("ipop doubles lambda on every consecutive restart")
{
    StrategyState st(8);
    RngStream rng(2);
    int previous = 0;
    for (int r = 0; r < 5; ++r)
    {
        const RestartParams params = next_restart_params(StrategyKind::Ipop, st, 2.0, rng);
        if (r == 0)
            CHECK(params.lambda == 8);
        else
            CHECK(params.lambda == 2 * previous);
        CHECK(params.sigma0 == 2.0);
        previous = params.lambda;
        st.apply_segment_evals(1000);
    }

    StrategyState direct(8);
    direct.restarts_done = 3;
    CHECK(next_restart_params(StrategyKind::Ipop, direct, 2.0, rng).lambda == 64);
}

TEST_CASE("bipop small-regime formulas")
{
    CHECK(bipop_small_lambda(6, 48, 0.0) == 6);  // exponent collapses
    CHECK(bipop_small_lambda(6, 6, 1.0) == 6);
    for (double u = 0.0; u <= 1.0; u += 0.05)
    {
        const int lambda = bipop_small_lambda(6, 96, u);
        CHECK(lambda >= 6);
        CHECK(lambda <= 96);
    }
    CHECK(bipop_small_sigma0(2.0, 0.0) == 2.0);
    CHECK(bipop_small_sigma0(2.0, 1.0) == doctest::Approx(0.02));
}

TEST_CASE("bipop starts large, then balances regimes by spent budget")
{
    StrategyState st(6);
    RngStream rng(3);

    // initial run: large regime at the default population
    const RestartParams first = next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
    CHECK(first.lambda == 6);
    CHECK(first.sigma0 == 2.0);
    CHECK(st.last_was_large);
    st.apply_segment_evals(1000);

    // first restart is large with doubled population
    const RestartParams second = next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
    CHECK(second.lambda == 12);
    CHECK(second.sigma0 == 2.0);
    CHECK(st.last_was_large);
    st.apply_segment_evals(2000);

    // small regime has spent nothing yet, so it goes next
    const RestartParams third = next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
    CHECK_FALSE(st.last_was_large);
    CHECK(third.lambda >= 6);
    CHECK(third.lambda <= 12);
    CHECK(third.sigma0 <= 2.0);
    CHECK(third.sigma0 >= 0.02);
    st.apply_segment_evals(500);

    // the small side is still behind on evaluations
    next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
    CHECK_FALSE(st.last_was_large);
    st.apply_segment_evals(5000);

    const RestartParams fifth = next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
    CHECK(st.last_was_large);
    CHECK(fifth.lambda == 24);
}

TEST_CASE("bipop small-regime draws stay inside their documented ranges")
{
    RngStream rng(12);
    for (int trial = 0; trial < 200; ++trial)
    {
        StrategyState st(6);
        next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
        st.apply_segment_evals(100);
        next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
        st.apply_segment_evals(100);
        const RestartParams small = next_restart_params(StrategyKind::Bipop, st, 2.0, rng);
        CHECK_FALSE(st.last_was_large);
        CHECK(small.lambda >= 6);
        CHECK(small.lambda <= 12);
        CHECK(small.sigma0 >= 2.0 / 100.0);
        CHECK(small.sigma0 <= 2.0);
    }
}
