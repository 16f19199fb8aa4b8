#include "rrcma/redundancy.hpp"

namespace rrcma
{
    bool is_redundant(int r, const RunLedger& ledger, const ObjectiveFn& f, const HvConfig& hv)
    {
        if (r < 1 || r > static_cast<int>(ledger.records.size()))
            throw ConfigError("is_redundant: restart index out of range");
        const RestartRecord& rec = ledger.records[static_cast<std::size_t>(r - 1)];

        const double f_star = f(ledger.x_star);
        if (hv_test(ledger.x_star, rec.x, f_star, rec.f, f, hv).same_basin)
            return false;

        for (int k = 0; k < r - 1; ++k)
        {
            const RestartRecord& prior = ledger.records[static_cast<std::size_t>(k)];
            if (hv_test(prior.x, rec.x, prior.f, rec.f, f, hv).same_basin)
                return true;
        }
        return false;
    }

    void classify_redundancy(RunLedger& ledger, const ObjectiveFn& f, const HvConfig& hv)
    {
        for (std::size_t i = 0; i < ledger.records.size(); ++i)
            ledger.records[i].redundant = is_redundant(static_cast<int>(i + 1), ledger, f, hv);
    }

    double rrf(const RunLedger& ledger)
    {
        if (ledger.total_evals <= 0)
            throw ConfigError("rrf: total budget B must be positive");
        double redundant_evals = 0.0;
        for (const RestartRecord& rec : ledger.records)
        {
            if (!rec.redundant.has_value())
                throw ConfigError("rrf: record " + std::to_string(rec.index) +
                                  " has unresolved redundancy");
            if (*rec.redundant)
                redundant_evals += static_cast<double>(rec.evals_used);
        }
        return redundant_evals / static_cast<double>(ledger.total_evals);
    }
}
