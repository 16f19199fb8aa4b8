#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hill_valley.hpp"
#include "numerics.hpp"

namespace rrcma
{
    /// One completed (or budget-truncated) restart: its converged center of
    /// mass, the fitness there, the evaluations it consumed and, once
    /// classified, whether it was redundant.
    struct RestartRecord
    {
        int index = 0;  // r >= 1
        Vector x;
        double f = 0.0;
        long evals_used = 0;     // b_r
        long evals_at_end = 0;   // cumulative when the restart ended
        std::string criterion;   // restart criterion name, or "budget"
        int lambda = 0;
        double sigma0 = 0.0;
        int archive_size = 0;    // after the archive update; 0 when repelling is off
        bool redundant_online = false;
        std::optional<bool> redundant;
    };

    struct TrajectoryPoint
    {
        long eval;
        double best_f;
    };

    struct RunLedger
    {
        std::vector<RestartRecord> records;
        long total_evals = 0;  // B
        Vector x_star;
        Vector best_x;
        double best_f = std::numeric_limits<double>::infinity();
        std::vector<TrajectoryPoint> trajectory;
        long tail_evals = 0;  // evaluations of a partial segment too short to record
        long saturated_rejections = 0;
    };

    /// Whether restart r (1-based) was redundant: not in the global basin,
    /// yet sharing a basin with some earlier restart. Hill-Valley
    /// evaluations made here are analysis-only and never charged to B.
    bool is_redundant(int r, const RunLedger& ledger, const ObjectiveFn& f, const HvConfig& hv);

    /// Resolve the redundant flag of every record, in order.
    void classify_redundancy(RunLedger& ledger, const ObjectiveFn& f, const HvConfig& hv);

    /// Restarts' redundancy factor: the fraction of the spent budget consumed
    /// by redundant restarts. Requires classified records and B > 0.
    double rrf(const RunLedger& ledger);
}
