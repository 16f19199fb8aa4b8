#pragma once

#include <string>
#include <tuple>

#include "numerics.hpp"

namespace rrcma
{
    enum class StrategyKind
    {
        Naive,  // fixed (lambda, sigma0) on every restart
        Ipop,   // population doubled on every restart
        Bipop,  // alternating large / small regimes
    };

    StrategyKind strategy_from_name(const std::string& name);
    const char* to_string(StrategyKind kind);

    struct StrategyState
    {
        int lambda_default = 0;
        long restarts_done = 0;
        long large_regime_count = 0;
        long small_regime_count = 0;
        long evals_large = 0;
        long evals_small = 0;
        bool last_was_large = true;

        explicit StrategyState(int lambda_default_) : lambda_default(lambda_default_) {}

        /// Attribute a finished segment's evaluations to the regime that ran
        /// it and count the restart.
        void apply_segment_evals(long evals);
    };

    struct RestartParams
    {
        int lambda;
        double sigma0;
    };

    /// Parameters for the next run segment. The initial segment is obtained
    /// the same way (restarts_done == 0). BIPOP runs its first two segments
    /// in the large regime, afterwards the regime with the smaller share of
    /// consumed evaluations goes next; the large regime doubles lambda per
    /// use at sigma0_base, the small one draws lambda in [lambda_default,
    /// lambda_large] and sigma0 in [sigma0_base/100, sigma0_base].
    RestartParams next_restart_params(StrategyKind kind, StrategyState& st, double sigma0_base,
                                      RngStream& rng);

    // Small-regime draws, exposed for direct testing.
    int bipop_small_lambda(int lambda_default, int lambda_large, double u);
    double bipop_small_sigma0(double sigma0_base, double v);
}
