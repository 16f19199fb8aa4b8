#include "rrcma/cma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rrcma
{
    namespace
    {
        constexpr double kMaxConditionLimit = 1e14;
        constexpr double kTolFun = 1e-12;
        constexpr double kTolXFactor = 1e-12;
        constexpr double kEigenvalueFloorRatio = 1e-30;
    }

    void Bounds::validate() const
    {
        if (lb.size() != ub.size() || lb.size() == 0)
            throw ConfigError("Bounds: lb and ub must be non-empty and of equal dimension");
        for (Eigen::Index i = 0; i < lb.size(); ++i)
            if (!(lb[i] < ub[i]))
                throw ConfigError("Bounds: lb must be strictly below ub in every coordinate");
    }

    int CmaParams::default_lambda(int d)
    {
        return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(d))));
    }

    CmaParams CmaParams::defaults(int d, int lambda)
    {
        if (d < 1)
            throw ConfigError("CmaParams: dimension must be >= 1");
        CmaParams p;
        p.d = d;
        p.lambda = lambda > 0 ? lambda : default_lambda(d);
        p.mu = p.lambda / 2;

        p.weights = Vector(p.mu);
        for (int i = 0; i < p.mu; ++i)
            p.weights[i] = std::log(p.mu + 0.5) - std::log(static_cast<double>(i + 1));
        p.weights /= p.weights.sum();
        p.mu_eff = 1.0 / p.weights.squaredNorm();

        const double n = static_cast<double>(d);
        p.c_sigma = (p.mu_eff + 2.0) / (n + p.mu_eff + 5.0);
        p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.mu_eff - 1.0) / (n + 1.0)) - 1.0) + p.c_sigma;
        p.c_c = (4.0 + p.mu_eff / n) / (n + 4.0 + 2.0 * p.mu_eff / n);
        p.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + p.mu_eff);
        p.c_mu = std::min(1.0 - p.c_1,
                          2.0 * (p.mu_eff - 2.0 + 1.0 / p.mu_eff) / ((n + 2.0) * (n + 2.0) + p.mu_eff));
        p.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

        p.validate();
        return p;
    }

    void CmaParams::validate() const
    {
        if (lambda < 2)
            throw ConfigError("CmaParams: lambda must be >= 2");
        if (mu < 1 || mu > lambda)
            throw ConfigError("CmaParams: mu must be in [1, lambda]");
        if (weights.size() != mu || weights.minCoeff() <= 0.0)
            throw ConfigError("CmaParams: weights must be mu positive values");
        if (std::abs(weights.sum() - 1.0) > 1e-12)
            throw ConfigError("CmaParams: weights must sum to 1");
        for (int i = 1; i < mu; ++i)
            if (weights[i] > weights[i - 1])
                throw ConfigError("CmaParams: weights must be decreasing");
        for (const double rate : {c_sigma, c_c, c_1, c_mu})
            if (!(rate > 0.0 && rate <= 1.0))
                throw ConfigError("CmaParams: learning rates must lie in (0, 1]");
        if (!(d_sigma > 0.0))
            throw ConfigError("CmaParams: d_sigma must be positive");
        if (c_1 + c_mu > 1.0)
            throw ConfigError("CmaParams: c_1 + c_mu must not exceed 1");
    }

    const char* to_string(RestartCriterion c)
    {
        switch (c)
        {
        case RestartCriterion::MaxCondition: return "MaxCondition";
        case RestartCriterion::TolFunHist: return "TolFunHist";
        case RestartCriterion::TolX: return "TolX";
        case RestartCriterion::EqualFunValues: return "EqualFunValues";
        case RestartCriterion::Stagnation: return "Stagnation";
        case RestartCriterion::NoEffectAxis: return "NoEffectAxis";
        case RestartCriterion::NoEffectCoord: return "NoEffectCoord";
        }
        return "Unknown";
    }

    void FitnessHistory::note_generation(double gen_best, double gen_median, double gen_worst)
    {
        best_per_gen.push_back(gen_best);
        flat_per_gen.push_back(gen_best == gen_median && gen_median == gen_worst);
        if (gen_best < best_ever)
        {
            best_ever = gen_best;
            gens_since_improvement = 0;
        }
        else
        {
            ++gens_since_improvement;
        }
    }

    void CmaState::refresh_factorization()
    {
        C = 0.5 * (C + C.transpose());
        eig_ = eigendecompose(C);
        const double floor = kEigenvalueFloorRatio * eig_.D.maxCoeff();
        if (eig_.D.minCoeff() < floor)
        {
            eig_.D = eig_.D.cwiseMax(floor);
            C = eig_.B * eig_.D.asDiagonal() * eig_.B.transpose();
            C = 0.5 * (C + C.transpose());
        }
    }

    CmaState init(const CmaParams& params, const Bounds& bounds, double sigma0, RngStream& rng)
    {
        params.validate();
        bounds.validate();
        if (bounds.lb.size() != params.d)
            throw ConfigError("init: bounds dimension does not match params");
        if (!(sigma0 > 0.0))
            throw ConfigError("init: sigma0 must be positive");

        CmaState state;
        state.m = Vector(params.d);
        for (int i = 0; i < params.d; ++i)
            state.m[i] = rng.uniform(bounds.lb[i], bounds.ub[i]);
        state.sigma = sigma0;
        state.sigma0 = sigma0;
        state.C = Matrix::Identity(params.d, params.d);
        state.p_sigma = Vector::Zero(params.d);
        state.p_c = Vector::Zero(params.d);
        state.refresh_factorization();
        return state;
    }

    Vector saturate(const Vector& x, const Bounds& bounds)
    {
        return x.cwiseMax(bounds.lb).cwiseMin(bounds.ub);
    }

    void tell(CmaState& state, const CmaParams& params, const std::vector<Vector>& X,
              const std::vector<double>& F)
    {
        if (static_cast<int>(X.size()) != params.lambda || F.size() != X.size())
            throw DimensionError("tell: expected lambda samples and fitnesses");
        for (const double f : F)
            if (!std::isfinite(f))
                throw EvaluationError("tell: non-finite fitness");

        std::vector<int> order(X.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return F[a] < F[b]; });

        const Vector m_old = state.m;
        Vector m_new = Vector::Zero(params.d);
        for (int i = 0; i < params.mu; ++i)
            m_new += params.weights[i] * X[order[i]];
        state.m = m_new;

        const Vector y_w = (m_new - m_old) / state.sigma;
        const EigenDecomposition& eig = state.factorization();

        state.p_sigma = (1.0 - params.c_sigma) * state.p_sigma +
                        std::sqrt(params.c_sigma * (2.0 - params.c_sigma) * params.mu_eff) *
                            eig.apply_inverse_sqrt(y_w);

        state.generation += 1;
        const double ps_norm = state.p_sigma.norm();
        const double expected = std::sqrt(
            1.0 - std::pow(1.0 - params.c_sigma, 2.0 * static_cast<double>(state.generation)));
        const bool h_sigma =
            ps_norm / expected < (1.4 + 2.0 / (params.d + 1.0)) * params.chi_n;

        state.p_c = (1.0 - params.c_c) * state.p_c;
        if (h_sigma)
            state.p_c += std::sqrt(params.c_c * (2.0 - params.c_c) * params.mu_eff) * y_w;

        Matrix rank_mu = Matrix::Zero(params.d, params.d);
        for (int i = 0; i < params.mu; ++i)
        {
            const Vector y = (X[order[i]] - m_old) / state.sigma;
            rank_mu += params.weights[i] * (y * y.transpose());
        }
        const double delta_h = h_sigma ? 0.0 : params.c_c * (2.0 - params.c_c);
        state.C = (1.0 - params.c_1 - params.c_mu) * state.C +
                  params.c_1 * (state.p_c * state.p_c.transpose() + delta_h * state.C) +
                  params.c_mu * rank_mu;

        const double exponent = std::min(
            1.0, (params.c_sigma / params.d_sigma) * (ps_norm / params.chi_n - 1.0));
        state.sigma *= std::exp(exponent);

        state.refresh_factorization();
    }

    std::optional<RestartCriterion> check_restart(const CmaState& state, const CmaParams& params,
                                                  const FitnessHistory& history)
    {
        const EigenDecomposition& eig = state.factorization();
        const long gens = history.generations();

        if (eig.condition_number() > kMaxConditionLimit)
            return RestartCriterion::MaxCondition;

        const long tolfun_window = 10 + static_cast<long>(std::ceil(30.0 * params.d / params.lambda));
        if (gens >= tolfun_window)
        {
            const auto begin = history.best_per_gen.end() - tolfun_window;
            const auto [lo, hi] = std::minmax_element(begin, history.best_per_gen.end());
            if (*hi - *lo < kTolFun)
                return RestartCriterion::TolFunHist;
        }

        const double tol_x = kTolXFactor * state.sigma0;
        bool all_small = true;
        for (int i = 0; i < params.d && all_small; ++i)
        {
            if (state.sigma * std::abs(state.p_c[i]) >= tol_x ||
                state.sigma * std::sqrt(state.C(i, i)) >= tol_x)
                all_small = false;
        }
        if (all_small)
            return RestartCriterion::TolX;

        const long flat_window =
            static_cast<long>(std::ceil(0.1 * static_cast<double>(gens))) + 10;
        if (gens >= flat_window)
        {
            bool all_flat = true;
            for (long i = gens - flat_window; i < gens && all_flat; ++i)
                all_flat = history.flat_per_gen[static_cast<std::size_t>(i)];
            if (all_flat)
                return RestartCriterion::EqualFunValues;
        }

        if (history.gens_since_improvement > 20L * params.d)
            return RestartCriterion::Stagnation;

        if (state.generation > 0)
        {
            const int axis = static_cast<int>(state.generation % params.d);
            const Vector step =
                0.1 * state.sigma * std::sqrt(std::max(eig.D[axis], 0.0)) * eig.B.col(axis);
            if (((state.m + step).array() == state.m.array()).all())
                return RestartCriterion::NoEffectAxis;
        }

        for (int i = 0; i < params.d; ++i)
        {
            const double step = 0.2 * state.sigma * std::sqrt(std::max(state.C(i, i), 0.0));
            if (state.m[i] + step == state.m[i])
                return RestartCriterion::NoEffectCoord;
        }

        return std::nullopt;
    }
}
