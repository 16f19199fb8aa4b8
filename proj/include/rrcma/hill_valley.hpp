#pragma once

#include <functional>

#include "numerics.hpp"

namespace rrcma
{
    using ObjectiveFn = std::function<double(const Vector&)>;

    struct HvConfig
    {
        int n_test = 10;  // interior points on the connecting segment

        // Endpoints closer than this are one converged point, not a pair:
        // their fitness values agree to the last ulps, which would trip the
        // plateau (<=) rule on rounding noise. Distinct catalog optima are
        // separated by >= 0.05 on every benchmark, so this leaves real
        // plateaus untouched.
        double coincident_tol = 1e-6;

        void validate() const
        {
            if (n_test < 1)
                throw ConfigError("HvConfig: n_test must be >= 1");
            if (coincident_tol < 0.0)
                throw ConfigError("HvConfig: coincident_tol must be >= 0");
        }
    };

    // Default interior-point counts for the two accounting contexts: the
    // online test inside the repelling runner is charged to the run budget,
    // the offline test used for redundancy classification is not.
    inline constexpr int kHvOnlineDefault = 5;
    inline constexpr int kHvOfflineDefault = 10;

    struct HvResult
    {
        bool same_basin;
        int evals_spent;  // interior evaluations only
    };

    /// Hill-Valley same-basin test between xi and xj. Interior points are
    /// xi + k/(n_test+1) (xj - xi) for k = 1..n_test; as soon as one of them
    /// is at least as high as both endpoints, a hill is assumed and the
    /// points are declared to belong to different basins. Endpoint fitnesses
    /// are supplied by the caller and not charged here. Identical points
    /// share their basin trivially and cost no evaluations. A non-finite
    /// interior value counts as a hill.
    HvResult hv_test(const Vector& xi, const Vector& xj, double f_xi, double f_xj,
                     const ObjectiveFn& f, const HvConfig& cfg);
}
