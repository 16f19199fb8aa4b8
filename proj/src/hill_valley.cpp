#include "rrcma/hill_valley.hpp"

#include <algorithm>
#include <cmath>

namespace rrcma
{
    HvResult hv_test(const Vector& xi, const Vector& xj, double f_xi, double f_xj,
                     const ObjectiveFn& f, const HvConfig& cfg)
    {
        cfg.validate();
        if (xi.size() != xj.size())
            throw DimensionError("hv_test: endpoint dimensions differ");

        if (xi == xj || (xi - xj).norm() <= cfg.coincident_tol)
            return {true, 0};

        // Canonical endpoint order makes the interior points bit-identical
        // for (xi, xj) and (xj, xi).
        const bool swapped = std::lexicographical_compare(xj.begin(), xj.end(), xi.begin(), xi.end());
        const Vector& a = swapped ? xj : xi;
        const Vector& b = swapped ? xi : xj;

        const double hill_level = std::max(f_xi, f_xj);
        const Vector direction = b - a;
        int evals = 0;
        for (int k = 1; k <= cfg.n_test; ++k)
        {
            const double t = static_cast<double>(k) / static_cast<double>(cfg.n_test + 1);
            const double f_test = f(a + t * direction);
            ++evals;
            if (!std::isfinite(f_test) || hill_level <= f_test)
                return {false, evals};
        }
        return {true, evals};
    }
}
