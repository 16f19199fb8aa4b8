#pragma once

// Test-only brute-force basin oracle: steepest descent on a dense 1-D grid.
// Independent of the Hill-Valley implementation it cross-checks.

#include <vector>

#include "rrcma/hill_valley.hpp"

namespace rrcma_test
{
    class GridBasinOracle1D
    {
    public:
        GridBasinOracle1D(const rrcma::ObjectiveFn& f, double lb, double ub, int n_points)
            : lb_(lb), step_((ub - lb) / (n_points - 1)), basin_of_(n_points, -1)
        {
            std::vector<double> values(static_cast<std::size_t>(n_points));
            for (int i = 0; i < n_points; ++i)
            {
                rrcma::Vector x(1);
                x << lb_ + i * step_;
                values[static_cast<std::size_t>(i)] = f(x);
            }
            for (int i = 0; i < n_points; ++i)
            {
                if (basin_of_[static_cast<std::size_t>(i)] >= 0)
                    continue;
                std::vector<int> path;
                int current = i;
                while (basin_of_[static_cast<std::size_t>(current)] < 0)
                {
                    path.push_back(current);
                    basin_of_[static_cast<std::size_t>(current)] = -2;  // on the path
                    int next = current;
                    if (current > 0 &&
                        values[static_cast<std::size_t>(current - 1)] <
                            values[static_cast<std::size_t>(next)])
                        next = current - 1;
                    if (current + 1 < n_points &&
                        values[static_cast<std::size_t>(current + 1)] <
                            values[static_cast<std::size_t>(next)])
                        next = current + 1;
                    if (next == current)
                    {
                        basin_of_[static_cast<std::size_t>(current)] = current;
                        break;
                    }
                    current = next;
                }
                const int terminal = basin_of_[static_cast<std::size_t>(current)] >= 0
                                         ? basin_of_[static_cast<std::size_t>(current)]
                                         : current;
                for (const int node : path)
                    basin_of_[static_cast<std::size_t>(node)] = terminal;
            }
        }

        int basin(double x) const
        {
            const int n = static_cast<int>(basin_of_.size());
            int idx = static_cast<int>((x - lb_) / step_ + 0.5);
            if (idx < 0)
                idx = 0;
            if (idx >= n)
                idx = n - 1;
            return basin_of_[static_cast<std::size_t>(idx)];
        }

        bool same_basin(double a, double b) const { return basin(a) == basin(b); }

    private:
        double lb_;
        double step_;
        std::vector<int> basin_of_;
    };
}
