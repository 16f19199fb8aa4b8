#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace rrcma
{
    struct Bounds
    {
        Vector lb;
        Vector ub;

        void validate() const;
        double max_range() const { return (ub - lb).maxCoeff(); }
        double volume() const { return (ub - lb).prod(); }
    };

    /// Strategy parameters of the (mu/mu_w, lambda)-CMA-ES with the usual
    /// defaults: lambda = 4 + floor(3 ln d), log-decreasing recombination
    /// weights and the canonical learning rates.
    struct CmaParams
    {
        int d = 0;
        int lambda = 0;
        int mu = 0;
        Vector weights;     // mu positive weights, decreasing, sum 1
        double mu_eff = 0;
        double c_sigma = 0;
        double d_sigma = 0;
        double c_c = 0;
        double c_1 = 0;
        double c_mu = 0;
        double chi_n = 0;   // E||N(0, I)||

        static int default_lambda(int d);
        static CmaParams defaults(int d, int lambda = 0);

        void validate() const;
    };

    enum class RestartCriterion
    {
        MaxCondition,
        TolFunHist,
        TolX,
        EqualFunValues,
        Stagnation,
        NoEffectAxis,
        NoEffectCoord,
    };

    const char* to_string(RestartCriterion c);

    /// Per-generation statistics a run segment accumulates for the restart
    /// criteria: best fitness per generation, flat-population flags and the
    /// time since the segment best last improved.
    struct FitnessHistory
    {
        std::vector<double> best_per_gen;
        std::vector<bool> flat_per_gen;  // best == median == worst within the generation
        double best_ever = std::numeric_limits<double>::infinity();
        long gens_since_improvement = 0;

        void note_generation(double gen_best, double gen_median, double gen_worst);
        long generations() const { return static_cast<long>(best_per_gen.size()); }
    };

    struct CmaState
    {
        Vector m;
        double sigma = 0;
        Matrix C;
        Vector p_sigma;
        Vector p_c;
        long generation = 0;
        long evals_used = 0;
        Vector best_x;
        double best_f = std::numeric_limits<double>::infinity();
        double sigma0 = 0;

        /// Factorization of the current C, recomputed once per tell. The
        /// eigenvalue floor (1e-30 of the largest) is applied here, writing
        /// back into C when it bites.
        const EigenDecomposition& factorization() const { return eig_; }

        void refresh_factorization();

    private:
        EigenDecomposition eig_;
    };

    CmaState init(const CmaParams& params, const Bounds& bounds, double sigma0, RngStream& rng);

    Vector saturate(const Vector& x, const Bounds& bounds);

    /// One distribution update from lambda (sample, fitness) pairs: weighted
    /// recombination of the mu best, CSA step-size control and the rank-one
    /// plus rank-mu covariance update. Selection ties break by sample index.
    void tell(CmaState& state, const CmaParams& params, const std::vector<Vector>& X,
              const std::vector<double>& F);

    std::optional<RestartCriterion> check_restart(const CmaState& state, const CmaParams& params,
                                                  const FitnessHistory& history);
}
