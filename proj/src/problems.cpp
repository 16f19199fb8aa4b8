#include "rrcma/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace rrcma
{
    namespace
    {
        Bounds symmetric_box(int d, double half_width)
        {
            return {Vector::Constant(d, -half_width), Vector::Constant(d, half_width)};
        }

        Vector fd_gradient(const ObjectiveFn& f, const Vector& x, double h)
        {
            Vector g(x.size());
            Vector xp = x;
            for (Eigen::Index i = 0; i < x.size(); ++i)
            {
                xp[i] = x[i] + h;
                const double fp = f(xp);
                xp[i] = x[i] - h;
                const double fm = f(xp);
                xp[i] = x[i];
                g[i] = (fp - fm) / (2.0 * h);
            }
            return g;
        }

        Matrix fd_hessian(const ObjectiveFn& f, const Vector& x, double h)
        {
            const Eigen::Index n = x.size();
            Matrix H(n, n);
            const double f0 = f(x);
            Vector xp = x;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                xp[i] = x[i] + h;
                const double fp = f(xp);
                xp[i] = x[i] - h;
                const double fm = f(xp);
                xp[i] = x[i];
                H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
                for (Eigen::Index j = i + 1; j < n; ++j)
                {
                    xp[i] = x[i] + h;
                    xp[j] = x[j] + h;
                    const double fpp = f(xp);
                    xp[j] = x[j] - h;
                    const double fpm = f(xp);
                    xp[i] = x[i] - h;
                    const double fmm = f(xp);
                    xp[j] = x[j] + h;
                    const double fmp = f(xp);
                    xp[i] = x[i];
                    xp[j] = x[j];
                    H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
                }
            }
            return H;
        }
    }

    Vector refine_local_minimum(const ObjectiveFn& f, Vector x, int iterations)
    {
        double h = 1e-5;
        for (int it = 0; it < iterations; ++it)
        {
            const Vector g = fd_gradient(f, x, h);
            if (g.norm() < 1e-13)
                break;
            const Matrix H = fd_hessian(f, x, h);
            Vector step;
            const Eigen::LDLT<Matrix> ldlt(H);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive())
                step = ldlt.solve(g);
            else
                step = g / std::max(1.0, g.norm());
            // Backtrack until the step improves
            const double f0 = f(x);
            double scale = 1.0;
            Vector candidate = x - scale * step;
            int backtracks = 0;
            while (f(candidate) > f0 && backtracks++ < 30)
            {
                scale *= 0.5;
                candidate = x - scale * step;
            }
            if (f(candidate) > f0)
                break;
            x = candidate;
        }
        return x;
    }

    bool is_local_minimum(const ObjectiveFn& f, const Vector& x, const Bounds& bounds, double h)
    {
        const double f0 = f(x);
        Vector xp = x;
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            if (x[i] + h <= bounds.ub[i])
            {
                xp[i] = x[i] + h;
                if (f(xp) < f0)
                    return false;
            }
            if (x[i] - h >= bounds.lb[i])
            {
                xp[i] = x[i] - h;
                if (f(xp) < f0)
                    return false;
            }
            xp[i] = x[i];
        }
        return true;
    }

    // ---------------------------------------------------------------------
    // Base objectives
    // ---------------------------------------------------------------------

    double modified_himmelblau(const Vector& x, const Vector& x_star, bool literal_first_term)
    {
        const double a = x[0] * x[0] + x[1] - 11.0;
        const double b = x[0] + x[1] * x[1] - 7.0;
        const double penalty = std::min(0.01, (x - x_star).norm());
        return (literal_first_term ? a : a * a) + b * b + penalty;
    }

    std::vector<Vector> himmelblau_minimizers()
    {
        const ObjectiveFn plain = [](const Vector& x) {
            const double a = x[0] * x[0] + x[1] - 11.0;
            const double b = x[0] + x[1] * x[1] - 7.0;
            return a * a + b * b;
        };
        std::vector<Vector> roots;
        for (const auto& [x0, y0] : {std::pair{3.0, 2.0},
                                     std::pair{-2.805118, 3.131312},
                                     std::pair{-3.779310, -3.283186},
                                     std::pair{3.584428, -1.848126}})
        {
            Vector seed(2);
            seed << x0, y0;
            roots.push_back(refine_local_minimum(plain, seed));
        }
        return roots;
    }

    Problem globalize(const std::string& name, const ObjectiveFn& f_to_maximize,
                      const Bounds& bounds, const Vector& x_star,
                      const std::vector<LocalOptimum>& maxima)
    {
        Problem p;
        p.name = name;
        p.d = static_cast<int>(x_star.size());
        p.bounds = bounds;
        p.x_star = x_star;
        p.evaluate = [f_to_maximize, x_star](const Vector& x) {
            return -f_to_maximize(x) + std::min(0.01, (x - x_star).squaredNorm());
        };
        p.f_star = -f_to_maximize(x_star);
        for (const auto& peak : maxima)
        {
            if ((peak.x - x_star).norm() < 1e-9)
                continue;
            p.local_optima.push_back(
                {peak.x, -peak.f + std::min(0.01, (peak.x - x_star).squaredNorm())});
        }
        return p;
    }

    namespace
    {
        Problem make_sphere(int d)
        {
            Problem p;
            p.name = "sphere";
            p.d = d;
            p.bounds = symmetric_box(d, 5.0);
            p.evaluate = [](const Vector& x) { return x.squaredNorm(); };
            p.x_star = Vector::Zero(d);
            p.f_star = 0.0;
            return p;
        }

        double rastrigin_1d(double t)
        {
            return t * t + 10.0 - 10.0 * std::cos(2.0 * M_PI * t);
        }

        Problem make_rastrigin(int d)
        {
            Problem p;
            p.name = "rastrigin";
            p.d = d;
            p.bounds = symmetric_box(d, 5.12);
            p.evaluate = [](const Vector& x) {
                double sum = 0.0;
                for (Eigen::Index i = 0; i < x.size(); ++i)
                    sum += rastrigin_1d(x[i]);
                return sum;
            };
            p.x_star = Vector::Zero(d);
            p.f_star = 0.0;

            // Coordinate-wise Newton on g'(t) = 2t + 20 pi sin(2 pi t) pins
            // the per-axis minima near each integer; the lattice product is
            // the catalog (d <= 2 keeps it small).
            if (d <= 2)
            {
                std::vector<double> axis_minima;
                for (int k = -4; k <= 4; ++k)
                {
                    double t = k;
                    for (int it = 0; it < 60; ++it)
                    {
                        const double g1 = 2.0 * t + 20.0 * M_PI * std::sin(2.0 * M_PI * t);
                        const double g2 = 2.0 + 40.0 * M_PI * M_PI * std::cos(2.0 * M_PI * t);
                        const double step = g1 / g2;
                        t -= step;
                        if (std::abs(step) < 1e-15)
                            break;
                    }
                    axis_minima.push_back(t);
                }
                if (d == 1)
                {
                    for (const double t : axis_minima)
                        if (t != 0.0)
                        {
                            Vector x(1);
                            x << t;
                            p.local_optima.push_back({x, rastrigin_1d(t)});
                        }
                }
                else
                {
                    for (const double a : axis_minima)
                        for (const double b : axis_minima)
                        {
                            if (a == 0.0 && b == 0.0)
                                continue;
                            Vector x(2);
                            x << a, b;
                            p.local_optima.push_back({x, rastrigin_1d(a) + rastrigin_1d(b)});
                        }
                }
            }
            return p;
        }

        struct GallagherPeaks
        {
            std::vector<Vector> centers;
            std::vector<double> heights;  // strictly decreasing, heights[0] = 10
            std::vector<double> widths;
        };

        Problem make_gallagher(int d, int n_peaks, std::uint64_t instance_seed)
        {
            RngStream rng = RngStream::derive(
                splitmix64(hash_string("gallagher") ^ static_cast<std::uint64_t>(n_peaks)) ^
                    static_cast<std::uint64_t>(d),
                instance_seed);

            const double half = 5.0;
            const double width_lo = n_peaks > 50 ? 0.35 : 0.8;
            const double width_hi = n_peaks > 50 ? 0.55 : 1.2;
            const double min_separation =
                0.5 * 2.0 * 4.9 / std::pow(static_cast<double>(n_peaks), 1.0 / d);

            auto peaks = std::make_shared<GallagherPeaks>();
            for (int i = 0; i < n_peaks; ++i)
            {
                const double placement_half = i == 0 ? 4.0 : 4.9;
                Vector center(d);
                for (int attempt = 0; attempt < 100; ++attempt)
                {
                    for (int j = 0; j < d; ++j)
                        center[j] = rng.uniform(-placement_half, placement_half);
                    bool separated = true;
                    for (const auto& other : peaks->centers)
                        if ((center - other).norm() < min_separation)
                        {
                            separated = false;
                            break;
                        }
                    if (separated)
                        break;
                }
                peaks->centers.push_back(center);
                peaks->heights.push_back(
                    i == 0 ? 10.0 : 9.5 - 8.0 * static_cast<double>(i - 1) /
                                              std::max(1, n_peaks - 2));
                peaks->widths.push_back(rng.uniform(width_lo, width_hi));
            }

            Problem p;
            p.name = "gallagher" + std::to_string(n_peaks);
            p.d = d;
            p.bounds = symmetric_box(d, half);
            p.evaluate = [peaks](const Vector& x) {
                double best = 0.0;
                for (std::size_t i = 0; i < peaks->centers.size(); ++i)
                {
                    const double q =
                        (x - peaks->centers[i]).squaredNorm() /
                        (2.0 * peaks->widths[i] * peaks->widths[i]);
                    best = std::max(best, peaks->heights[i] * std::exp(-q));
                }
                return 10.0 - best;
            };
            p.x_star = peaks->centers[0];
            p.f_star = 0.0;
            for (std::size_t i = 1; i < peaks->centers.size(); ++i)
            {
                // A dominated peak is no optimum of the max-composition.
                if (!is_local_minimum(p.evaluate, peaks->centers[i], p.bounds))
                    continue;
                p.local_optima.push_back({peaks->centers[i], p.evaluate(peaks->centers[i])});
            }
            return p;
        }

        Problem make_himmelblau(std::uint64_t instance_seed, bool literal_first_term)
        {
            const auto minimizers = himmelblau_minimizers();
            const std::size_t anchor =
                literal_first_term || instance_seed == 0
                    ? 0
                    : static_cast<std::size_t>(splitmix64(instance_seed ^ 0x48494D4DULL) %
                                               minimizers.size());

            Problem p;
            p.name = literal_first_term ? "himmelblau_literal" : "himmelblau";
            p.d = 2;
            p.bounds = symmetric_box(2, 5.0);

            if (literal_first_term)
            {
                // The unsquared first term reshapes the landscape; locate the
                // global minimum numerically instead of reusing the classical
                // roots.
                const ObjectiveFn raw = [](const Vector& x) {
                    const double a = x[0] * x[0] + x[1] - 11.0;
                    const double b = x[0] + x[1] * x[1] - 7.0;
                    return a + b * b;
                };
                Vector best(2);
                double best_f = std::numeric_limits<double>::infinity();
                for (int i = 0; i <= 200; ++i)
                    for (int j = 0; j <= 200; ++j)
                    {
                        Vector x(2);
                        x << -5.0 + 10.0 * i / 200.0, -5.0 + 10.0 * j / 200.0;
                        const double fx = raw(x);
                        if (fx < best_f)
                        {
                            best_f = fx;
                            best = x;
                        }
                    }
                best = saturate(refine_local_minimum(raw, best), p.bounds);
                p.x_star = best;
                p.evaluate = [best](const Vector& x) {
                    return modified_himmelblau(x, best, true);
                };
                p.f_star = p.evaluate(best);
                return p;
            }

            const Vector x_star = minimizers[anchor];
            p.x_star = x_star;
            p.evaluate = [x_star](const Vector& x) { return modified_himmelblau(x, x_star); };
            p.f_star = 0.0;
            for (std::size_t i = 0; i < minimizers.size(); ++i)
                if (i != anchor)
                    p.local_optima.push_back({minimizers[i], 0.01});
            return p;
        }

        Problem make_five_uneven_peak_trap(std::uint64_t instance_seed)
        {
            const ObjectiveFn f_max = [](const Vector& xv) {
                const double x = xv[0];
                if (x < 2.5) return 80.0 * (2.5 - x);
                if (x < 5.0) return 64.0 * (x - 2.5);
                if (x < 7.5) return 64.0 * (7.5 - x);
                if (x < 12.5) return 28.0 * (x - 7.5);
                if (x < 17.5) return 28.0 * (17.5 - x);
                if (x < 22.5) return 32.0 * (x - 17.5);
                if (x < 27.5) return 32.0 * (27.5 - x);
                return 80.0 * (x - 27.5);
            };
            Bounds bounds{Vector::Constant(1, 0.0), Vector::Constant(1, 30.0)};

            std::vector<LocalOptimum> maxima;
            for (const auto& [loc, val] : {std::pair{0.0, 200.0},
                                           std::pair{5.0, 160.0},
                                           std::pair{12.5, 140.0},
                                           std::pair{22.5, 160.0},
                                           std::pair{30.0, 200.0}})
                maxima.push_back({Vector::Constant(1, loc), val});

            const bool second_global =
                instance_seed != 0 && splitmix64(instance_seed ^ 0x46555054ULL) % 2 == 1;
            const Vector anchor = Vector::Constant(1, second_global ? 30.0 : 0.0);
            return globalize("five_uneven_peak_trap", f_max, bounds, anchor, maxima);
        }

        Problem make_equal_maxima(std::uint64_t instance_seed)
        {
            const ObjectiveFn f_max = [](const Vector& x) {
                return std::pow(std::sin(5.0 * M_PI * x[0]), 6.0);
            };
            Bounds bounds{Vector::Constant(1, 0.0), Vector::Constant(1, 1.0)};
            std::vector<LocalOptimum> maxima;
            for (int k = 0; k < 5; ++k)
                maxima.push_back({Vector::Constant(1, 0.1 + 0.2 * k), 1.0});
            const std::size_t anchor =
                instance_seed == 0
                    ? 2
                    : static_cast<std::size_t>(splitmix64(instance_seed ^ 0x45514D58ULL) % 5);
            return globalize("equal_maxima", f_max, bounds, maxima[anchor].x, maxima);
        }

        double camel_back(const Vector& v)
        {
            const double x = v[0], y = v[1];
            return (4.0 - 2.1 * x * x + x * x * x * x / 3.0) * x * x + x * y +
                   (-4.0 + 4.0 * y * y) * y * y;
        }

        Problem make_six_hump_camel(std::uint64_t instance_seed)
        {
            Bounds bounds{Vector(2), Vector(2)};
            bounds.lb << -1.9, -1.1;
            bounds.ub << 1.9, 1.1;
            const ObjectiveFn f_max = [](const Vector& x) { return -camel_back(x); };

            // Grid scan plus refinement recovers the six minima of the camel
            // back; the two deepest are its global pair.
            std::vector<LocalOptimum> minima;
            for (int i = 0; i <= 60; ++i)
                for (int j = 0; j <= 40; ++j)
                {
                    Vector x(2);
                    x << bounds.lb[0] + (bounds.ub[0] - bounds.lb[0]) * i / 60.0,
                        bounds.lb[1] + (bounds.ub[1] - bounds.lb[1]) * j / 40.0;
                    const Vector refined = refine_local_minimum(camel_back, x, 80);
                    if (refined[0] < bounds.lb[0] || refined[0] > bounds.ub[0] ||
                        refined[1] < bounds.lb[1] || refined[1] > bounds.ub[1])
                        continue;
                    if (!is_local_minimum(camel_back, refined, bounds, 1e-5))
                        continue;
                    bool known = false;
                    for (const auto& m : minima)
                        if ((m.x - refined).norm() < 1e-4)
                        {
                            known = true;
                            break;
                        }
                    if (!known)
                        minima.push_back({refined, camel_back(refined)});
                }
            std::sort(minima.begin(), minima.end(),
                      [](const auto& a, const auto& b) { return a.f < b.f; });

            std::vector<LocalOptimum> maxima;
            for (const auto& m : minima)
                maxima.push_back({m.x, -m.f});
            const std::size_t anchor =
                instance_seed == 0
                    ? 0
                    : static_cast<std::size_t>(splitmix64(instance_seed ^ 0x43414D4CULL) % 2);
            return globalize("six_hump_camel", f_max, bounds, maxima[anchor].x, maxima);
        }

        double shubert_axis(double t)
        {
            double sum = 0.0;
            for (int j = 1; j <= 5; ++j)
                sum += j * std::cos((j + 1.0) * t + j);
            return sum;
        }

        Problem make_shubert(std::uint64_t instance_seed)
        {
            const ObjectiveFn f_max = [](const Vector& x) {
                return -shubert_axis(x[0]) * shubert_axis(x[1]);
            };
            Bounds bounds = symmetric_box(2, 10.0);

            // Separable structure: the product is smallest when one axis
            // attains the 1-D minimum and the other the 1-D maximum, so the
            // 18 global maxima of -g(x1) g(x2) follow from the 1-D extrema.
            auto scan_axis = [](bool minimize) {
                std::vector<double> points;
                const int n = 20000;
                std::vector<double> values(n + 1);
                for (int i = 0; i <= n; ++i)
                    values[i] = shubert_axis(-10.0 + 20.0 * i / n);
                const double target =
                    minimize ? *std::min_element(values.begin(), values.end())
                             : *std::max_element(values.begin(), values.end());
                for (int i = 1; i < n; ++i)
                {
                    const bool extremal = minimize
                                              ? values[i] <= values[i - 1] && values[i] <= values[i + 1]
                                              : values[i] >= values[i - 1] && values[i] >= values[i + 1];
                    if (!extremal || std::abs(values[i] - target) > 0.5)
                        continue;
                    const ObjectiveFn axis_obj = [minimize](const Vector& v) {
                        return minimize ? shubert_axis(v[0]) : -shubert_axis(v[0]);
                    };
                    const Vector refined =
                        refine_local_minimum(axis_obj, Vector::Constant(1, -10.0 + 20.0 * i / n));
                    points.push_back(refined[0]);
                }
                return points;
            };
            const std::vector<double> axis_minima = scan_axis(true);
            const std::vector<double> axis_maxima = scan_axis(false);

            std::vector<LocalOptimum> maxima;
            for (const double a : axis_minima)
                for (const double b : axis_maxima)
                {
                    Vector x1(2), x2(2);
                    x1 << a, b;
                    x2 << b, a;
                    maxima.push_back({x1, f_max(x1)});
                    maxima.push_back({x2, f_max(x2)});
                }
            std::sort(maxima.begin(), maxima.end(),
                      [](const auto& a, const auto& b) { return a.f > b.f; });

            const std::size_t anchor =
                instance_seed == 0
                    ? 0
                    : static_cast<std::size_t>(splitmix64(instance_seed ^ 0x53485542ULL) %
                                               maxima.size());
            return globalize("shubert", f_max, bounds, maxima[anchor].x, maxima);
        }

        Problem make_vincent(int d, std::uint64_t instance_seed)
        {
            const ObjectiveFn f_max = [d](const Vector& x) {
                double sum = 0.0;
                for (Eigen::Index i = 0; i < x.size(); ++i)
                {
                    if (x[i] <= 0.0)
                        return -std::numeric_limits<double>::infinity();
                    sum += std::sin(10.0 * std::log(x[i]));
                }
                return sum / d;
            };
            Bounds bounds{Vector::Constant(d, 0.25), Vector::Constant(d, 10.0)};

            std::vector<double> axis_peaks;
            for (int k = -2; k <= 3; ++k)
                axis_peaks.push_back(std::exp((M_PI / 2.0 + 2.0 * M_PI * k) / 10.0));

            std::vector<LocalOptimum> maxima;
            std::vector<int> idx(d, 0);
            while (true)
            {
                Vector x(d);
                for (int i = 0; i < d; ++i)
                    x[i] = axis_peaks[idx[i]];
                maxima.push_back({x, 1.0});
                int pos = d - 1;
                while (pos >= 0 && ++idx[pos] == static_cast<int>(axis_peaks.size()))
                    idx[pos--] = 0;
                if (pos < 0)
                    break;
            }

            const std::size_t anchor =
                instance_seed == 0
                    ? 0
                    : static_cast<std::size_t>(splitmix64(instance_seed ^ 0x56494E43ULL) %
                                               maxima.size());
            return globalize("vincent", f_max, bounds, maxima[anchor].x, maxima);
        }

        Problem build_base(const std::string& name, int d, std::uint64_t instance_seed)
        {
            if (name == "sphere")
                return make_sphere(d);
            if (name == "rastrigin")
                return make_rastrigin(d);
            if (name == "gallagher21")
                return make_gallagher(d, 21, instance_seed);
            if (name == "gallagher101")
                return make_gallagher(d, 101, instance_seed);
            if (name == "himmelblau")
                return make_himmelblau(instance_seed, false);
            if (name == "himmelblau_literal")
                return make_himmelblau(instance_seed, true);
            if (name == "five_uneven_peak_trap")
                return make_five_uneven_peak_trap(instance_seed);
            if (name == "equal_maxima")
                return make_equal_maxima(instance_seed);
            if (name == "six_hump_camel")
                return make_six_hump_camel(instance_seed);
            if (name == "shubert")
                return make_shubert(instance_seed);
            if (name == "vincent")
                return make_vincent(d, instance_seed);
            throw ConfigError("unknown problem '" + name + "'");
        }

        Matrix random_rotation(int d, RngStream& rng)
        {
            if (d == 1)
                return Matrix::Identity(1, 1);
            Matrix A(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    A(i, j) = rng.normal();
            const Eigen::HouseholderQR<Matrix> qr(A);
            Matrix Q = qr.householderQ();
            const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int i = 0; i < d; ++i)
                if (R(i, i) < 0.0)
                    Q.col(i) = -Q.col(i);
            if (Q.determinant() < 0.0)
                Q.col(0) = -Q.col(0);
            return Q;
        }
    }

    const std::vector<ProblemSpec>& problem_catalog()
    {
        static const std::vector<ProblemSpec> catalog = {
            {"sphere", 1, 40, "unimodal control"},
            {"rastrigin", 1, 40, "separable multimodal, strong global structure"},
            {"gallagher21", 2, 20, "21 random peaks, weak global structure"},
            {"gallagher101", 2, 20, "101 random peaks, weak global structure"},
            {"himmelblau", 2, 2, "modified Himmelblau, one of four basins global"},
            {"himmelblau_literal", 2, 2, "modified Himmelblau with unsquared first term"},
            {"five_uneven_peak_trap", 1, 1, "globalized five-peak trap"},
            {"equal_maxima", 1, 1, "globalized five equal peaks"},
            {"six_hump_camel", 2, 2, "globalized six-hump camel back"},
            {"shubert", 2, 2, "globalized Shubert, 18 former global optima"},
            {"vincent", 1, 3, "globalized Vincent, 6^d former global optima"},
        };
        return catalog;
    }

    Problem make_base_problem(const std::string& name, int d, std::uint64_t instance_seed)
    {
        const auto& catalog = problem_catalog();
        const auto spec = std::find_if(catalog.begin(), catalog.end(),
                                       [&](const ProblemSpec& s) { return s.name == name; });
        if (spec == catalog.end())
            throw ConfigError("unknown problem '" + name + "'");
        if (d < spec->min_d || d > spec->max_d)
            throw ConfigError("problem '" + name + "' does not support dimension " +
                              std::to_string(d));

        Problem base = build_base(name, d, instance_seed);
        base.instance_seed = instance_seed;
        return base;
    }

    Problem make_problem(const std::string& name, int d, std::uint64_t instance_seed)
    {
        Problem base = make_base_problem(name, d, instance_seed);
        if (instance_seed == 0)
            return base;

        RngStream rng = RngStream::derive(splitmix64(hash_string(name)) ^
                                              static_cast<std::uint64_t>(d),
                                          splitmix64(instance_seed) ^ 0x494E5354ULL);
        auto transform = std::make_shared<InstanceTransform>();
        transform->rotation = random_rotation(d, rng);
        transform->anchor = base.x_star;
        transform->translation = Vector(d);
        for (int i = 0; i < d; ++i)
        {
            const double range = base.bounds.ub[i] - base.bounds.lb[i];
            transform->translation[i] =
                rng.uniform(base.bounds.lb[i] + 0.1 * range, base.bounds.ub[i] - 0.1 * range);
        }

        Problem instance;
        instance.name = base.name;
        instance.d = d;
        instance.bounds = base.bounds;
        instance.instance_seed = instance_seed;
        instance.x_star = transform->translation;
        instance.f_star = base.f_star;
        instance.transform = transform;

        // Pull evaluations back into base coordinates; outside the base box
        // (reachable near instance corners) a quadratic wall extends the
        // objective continuously.
        const auto base_eval = base.evaluate;
        const Bounds base_bounds = base.bounds;
        instance.evaluate = [base_eval, base_bounds, transform](const Vector& x) {
            const Vector y = transform->to_base(x);
            const Vector yc = saturate(y, base_bounds);
            if (y == yc)
                return base_eval(y);
            return base_eval(yc) + 1000.0 * (y - yc).squaredNorm();
        };

        for (const auto& opt : base.local_optima)
        {
            const Vector mapped = transform->from_base(opt.x);
            bool inside = true;
            for (int i = 0; i < d; ++i)
                if (mapped[i] < base.bounds.lb[i] || mapped[i] > base.bounds.ub[i])
                {
                    inside = false;
                    break;
                }
            if (inside)
                instance.local_optima.push_back({mapped, opt.f});
        }
        return instance;
    }
}
