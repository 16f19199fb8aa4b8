#pragma once

#include <functional>
#include <optional>

#include "cma.hpp"
#include "hill_valley.hpp"
#include "numerics.hpp"
#include "problems.hpp"
#include "redundancy.hpp"
#include "restart.hpp"

namespace rrcma
{
    struct TabuPoint
    {
        Vector x;
        double f = 0.0;
        int hits = 1;  // restarts that converged here
    };

    struct RepellingConfig
    {
        double coverage_c = 10.0;  // 1/c of the domain volume is repelled at most
        double gamma = 0.995;      // per-rejection threshold shrinkage, in (0, 1)
        double sigma0 = 2.0;       // step-size normalization of the region volumes
        int max_reject_per_offspring = 50;  // generation cap is this times lambda
        HvConfig hv{kHvOnlineDefault};

        void validate() const
        {
            if (!(coverage_c > 0.0))
                throw ConfigError("RepellingConfig: coverage_c must be positive");
            if (!(gamma > 0.0 && gamma < 1.0))
                throw ConfigError("RepellingConfig: gamma must lie in (0, 1)");
            if (!(sigma0 > 0.0))
                throw ConfigError("RepellingConfig: sigma0 must be positive");
            if (max_reject_per_offspring < 1)
                throw ConfigError("RepellingConfig: max_reject_per_offspring must be >= 1");
        }
    };

    struct Archive
    {
        std::vector<TabuPoint> points;
        long restarts = 0;      // R, total restarts folded into the archive
        double domain_volume = 0.0;  // S
    };

    /// Repelling-region volume of one tabu point: n_T S / (c sigma0 R).
    double tabu_volume(const TabuPoint& point, const Archive& archive,
                       const RepellingConfig& cfg);

    /// Radius of the d-ball with volume V: V^(1/d) Gamma(d/2+1)^(1/d) / sqrt(pi).
    double rejection_radius(double volume, int d);

    /// Eq.-style rejection rule: d_m(x, x_T, C^-1)/sigma < gamma^n_rej delta.
    bool rejects(const Vector& x, const TabuPoint& point, double delta, double gamma,
                 long n_rej, const Matrix& C_inv, double sigma);

    bool rejects(const Vector& x, const TabuPoint& point, double delta, double gamma,
                 long n_rej, const EigenDecomposition& eig_of_C, double sigma);

    struct AcceptanceEvent
    {
        const Vector& x;
        long n_rej;           // shared per-generation counter at acceptance time
        double sigma;
        bool forced;          // accepted unconditionally after the rejection cap
        // scaled distance and threshold per archive point, index-aligned
        std::vector<double> distance_over_sigma;
        std::vector<double> threshold;
    };

    struct RunObserver
    {
        std::function<void(const AcceptanceEvent&)> on_accept;
        std::function<void(const Archive&)> on_archive_update;
    };

    struct SampleResult
    {
        Vector x;
        long n_rej_used = 0;  // rejections this call added to the generation counter
        bool forced = false;
    };

    /// Draw offspring from the state's distribution until one clears every
    /// tabu region. n_rej is the generation-shared rejection counter; each
    /// rejected draw increments it, shrinking all thresholds. Past
    /// max_rejections the next draw is accepted unconditionally.
    SampleResult sample_accepted(const CmaState& state, const Archive& archive,
                                 const std::vector<double>& radii, double gamma,
                                 long max_rejections, RngStream& rng, long& n_rej,
                                 const RunObserver* observer = nullptr);

    /// Per-point rejection radii for the archive under the current config.
    std::vector<double> archive_radii(const Archive& archive, const RepellingConfig& cfg, int d);

    struct ArchiveUpdateResult
    {
        bool matched_existing = false;  // converged into a known basin
        int evals_spent = 0;            // interior Hill-Valley evaluations
    };

    /// Fold a converged mean into the archive: merge into the first point
    /// sharing its basin (keeping the better location) or append a fresh
    /// tabu point. Always counts one more restart.
    ArchiveUpdateResult archive_update(Archive& archive, const Vector& m, double f_m,
                                       const ObjectiveFn& f, const HvConfig& hv);

    /// Full RR-CMA-ES outer loop: restart segments under the given strategy
    /// until the budget is exhausted. With `repelling` absent this is the
    /// plain restart CMA-ES (no archive, no extra evaluations at restarts).
    RunLedger run_rr_cmaes(const Problem& problem, StrategyKind strategy,
                           const std::optional<RepellingConfig>& repelling, double sigma0,
                           long budget, RngStream& rng, const RunObserver* observer = nullptr);
}
