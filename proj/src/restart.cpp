#include "rrcma/restart.hpp"

#include <cmath>

namespace rrcma
{
    StrategyKind strategy_from_name(const std::string& name)
    {
        if (name == "restart")
            return StrategyKind::Naive;
        if (name == "ipop")
            return StrategyKind::Ipop;
        if (name == "bipop")
            return StrategyKind::Bipop;
        throw ConfigError("unknown strategy '" + name + "' (expected restart|ipop|bipop)");
    }

    const char* to_string(StrategyKind kind)
    {
        switch (kind)
        {
        case StrategyKind::Naive: return "restart";
        case StrategyKind::Ipop: return "ipop";
        case StrategyKind::Bipop: return "bipop";
        }
        return "unknown";
    }

    void StrategyState::apply_segment_evals(long evals)
    {
        if (last_was_large)
            evals_large += evals;
        else
            evals_small += evals;
        ++restarts_done;
    }

    int bipop_small_lambda(int lambda_default, int lambda_large, double u)
    {
        const double ratio = static_cast<double>(lambda_large) / lambda_default;
        return static_cast<int>(std::floor(lambda_default * std::pow(ratio, u * u / 2.0)));
    }

    double bipop_small_sigma0(double sigma0_base, double v)
    {
        return sigma0_base * std::pow(10.0, -2.0 * v);
    }

    RestartParams next_restart_params(StrategyKind kind, StrategyState& st, double sigma0_base,
                                      RngStream& rng)
    {
        switch (kind)
        {
        case StrategyKind::Naive:
            st.last_was_large = true;
            return {st.lambda_default, sigma0_base};

        case StrategyKind::Ipop:
            st.last_was_large = true;
            return {static_cast<int>(st.lambda_default << std::min<long>(st.restarts_done, 30)),
                    sigma0_base};

        case StrategyKind::Bipop:
        {
            const bool large = st.restarts_done < 2 || st.evals_large <= st.evals_small;
            st.last_was_large = large;
            if (large)
            {
                const int lambda = static_cast<int>(
                    st.lambda_default << std::min<long>(st.large_regime_count, 30));
                ++st.large_regime_count;
                return {lambda, sigma0_base};
            }
            const int lambda_large = static_cast<int>(
                st.lambda_default << std::min<long>(st.large_regime_count - 1, 30));
            const double u = rng.uniform();
            const double v = rng.uniform();
            ++st.small_regime_count;
            return {bipop_small_lambda(st.lambda_default, lambda_large, u),
                    bipop_small_sigma0(sigma0_base, v)};
        }
        }
        throw ConfigError("next_restart_params: unknown strategy kind");
    }
}
