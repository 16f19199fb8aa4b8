#include "rrcma/repelling.hpp"

#include <cmath>

namespace rrcma
{
    double tabu_volume(const TabuPoint& point, const Archive& archive, const RepellingConfig& cfg)
    {
        cfg.validate();
        if (archive.restarts < 1)
            throw ConfigError("tabu_volume: archive has no restarts");
        // The region volume lives in step-size-normalized coordinates (the
        // rejection rule compares Mahalanobis distance over sigma), so the
        // domain volume scales by sigma0^d. All repelling regions together
        // then cover at most 1/c of the box when sigma is at sigma0.
        const double sigma0_volume =
            std::pow(cfg.sigma0, static_cast<double>(point.x.size()));
        return point.hits * archive.domain_volume /
               (cfg.coverage_c * sigma0_volume * static_cast<double>(archive.restarts));
    }

    double rejection_radius(double volume, int d)
    {
        if (!(volume > 0.0) || d < 1)
            throw ConfigError("rejection_radius: V must be positive and d >= 1");
        return std::pow(volume, 1.0 / d) *
               std::pow(gamma_function(d / 2.0 + 1.0), 1.0 / d) / std::sqrt(M_PI);
    }

    bool rejects(const Vector& x, const TabuPoint& point, double delta, double gamma,
                 long n_rej, const Matrix& C_inv, double sigma)
    {
        return mahalanobis(x, point.x, C_inv) / sigma <
               std::pow(gamma, static_cast<double>(n_rej)) * delta;
    }

    bool rejects(const Vector& x, const TabuPoint& point, double delta, double gamma,
                 long n_rej, const EigenDecomposition& eig_of_C, double sigma)
    {
        return mahalanobis(x, point.x, eig_of_C) / sigma <
               std::pow(gamma, static_cast<double>(n_rej)) * delta;
    }

    std::vector<double> archive_radii(const Archive& archive, const RepellingConfig& cfg, int d)
    {
        std::vector<double> radii;
        radii.reserve(archive.points.size());
        for (const TabuPoint& point : archive.points)
            radii.push_back(rejection_radius(tabu_volume(point, archive, cfg), d));
        return radii;
    }

    SampleResult sample_accepted(const CmaState& state, const Archive& archive,
                                 const std::vector<double>& radii, double gamma,
                                 long max_rejections, RngStream& rng, long& n_rej,
                                 const RunObserver* observer)
    {
        const EigenDecomposition& eig = state.factorization();
        SampleResult result;
        while (true)
        {
            result.x = sample_mvn(state.m, state.sigma, eig.B, eig.D, rng);
            result.forced = n_rej > max_rejections;

            bool accepted = true;
            if (!result.forced)
            {
                const double shrink = std::pow(gamma, static_cast<double>(n_rej));
                for (std::size_t t = 0; t < archive.points.size(); ++t)
                {
                    if (mahalanobis(result.x, archive.points[t].x, eig) / state.sigma <
                        shrink * radii[t])
                    {
                        accepted = false;
                        break;
                    }
                }
            }

            if (accepted)
            {
                if (observer && observer->on_accept)
                {
                    AcceptanceEvent event{result.x, n_rej, state.sigma, result.forced, {}, {}};
                    const double shrink = std::pow(gamma, static_cast<double>(n_rej));
                    for (std::size_t t = 0; t < archive.points.size(); ++t)
                    {
                        event.distance_over_sigma.push_back(
                            mahalanobis(result.x, archive.points[t].x, eig) / state.sigma);
                        event.threshold.push_back(shrink * radii[t]);
                    }
                    observer->on_accept(event);
                }
                return result;
            }
            ++n_rej;
            ++result.n_rej_used;
        }
    }

    ArchiveUpdateResult archive_update(Archive& archive, const Vector& m, double f_m,
                                       const ObjectiveFn& f, const HvConfig& hv)
    {
        ArchiveUpdateResult result;
        for (TabuPoint& point : archive.points)
        {
            const HvResult test = hv_test(m, point.x, f_m, point.f, f, hv);
            result.evals_spent += test.evals_spent;
            if (test.same_basin)
            {
                point.hits += 1;
                if (f_m < point.f)
                {
                    point.x = m;
                    point.f = f_m;
                }
                archive.restarts += 1;
                result.matched_existing = true;
                return result;
            }
        }
        archive.points.push_back({m, f_m, 1});
        archive.restarts += 1;
        return result;
    }

    RunLedger run_rr_cmaes(const Problem& problem, StrategyKind strategy,
                           const std::optional<RepellingConfig>& repelling, double sigma0,
                           long budget, RngStream& rng, const RunObserver* observer)
    {
        if (repelling)
            repelling->validate();
        if (budget < 1)
            throw ConfigError("run_rr_cmaes: budget must be positive");

        RunLedger ledger;
        ledger.x_star = problem.x_star;

        Archive archive;
        archive.domain_volume = problem.bounds.volume();

        StrategyState strategy_state(CmaParams::default_lambda(problem.d));

        long evals = 0;
        const auto charged_eval = [&](const Vector& raw) {
            const Vector x = saturate(raw, problem.bounds);
            const double fx = problem.evaluate(x);
            ++evals;
            if (fx < ledger.best_f)
            {
                ledger.best_f = fx;
                ledger.best_x = x;
                ledger.trajectory.push_back({evals, fx});
            }
            return fx;
        };

        while (evals < budget)
        {
            const RestartParams restart = next_restart_params(strategy, strategy_state, sigma0, rng);
            const CmaParams params = CmaParams::defaults(problem.d, restart.lambda);
            CmaState state = init(params, problem.bounds, restart.sigma0, rng);
            FitnessHistory history;

            // V(T) depends only on restart-level quantities, so the radii
            // hold for the whole segment.
            std::vector<double> radii;
            long max_rejections = 0;
            if (repelling)
            {
                radii = archive_radii(archive, *repelling, problem.d);
                max_rejections =
                    static_cast<long>(repelling->max_reject_per_offspring) * params.lambda;
            }

            const long segment_start = evals;
            std::optional<RestartCriterion> criterion;
            bool completed_generation = false;

            std::vector<Vector> X(static_cast<std::size_t>(params.lambda));
            std::vector<double> F(static_cast<std::size_t>(params.lambda));
            while (evals < budget)
            {
                criterion = check_restart(state, params, history);
                if (criterion)
                    break;

                long n_rej = 0;
                for (int k = 0; k < params.lambda; ++k)
                {
                    if (repelling)
                    {
                        const SampleResult sample = sample_accepted(
                            state, archive, radii, repelling->gamma, max_rejections, rng, n_rej,
                            observer);
                        X[static_cast<std::size_t>(k)] = sample.x;
                        if (sample.forced)
                            ++ledger.saturated_rejections;
                    }
                    else
                    {
                        const EigenDecomposition& eig = state.factorization();
                        X[static_cast<std::size_t>(k)] =
                            sample_mvn(state.m, state.sigma, eig.B, eig.D, rng);
                        if (observer && observer->on_accept)
                        {
                            const AcceptanceEvent event{
                                X[static_cast<std::size_t>(k)], 0, state.sigma, false, {}, {}};
                            observer->on_accept(event);
                        }
                    }
                }

                bool truncated = false;
                for (int k = 0; k < params.lambda; ++k)
                {
                    if (evals >= budget)
                    {
                        truncated = true;
                        break;
                    }
                    F[static_cast<std::size_t>(k)] = charged_eval(X[static_cast<std::size_t>(k)]);
                }
                if (truncated)
                    break;
                state.evals_used += params.lambda;

                tell(state, params, X, F);
                completed_generation = true;

                std::vector<double> sorted(F);
                std::sort(sorted.begin(), sorted.end());
                history.note_generation(sorted.front(),
                                        sorted[sorted.size() / 2],
                                        sorted.back());
            }

            if (!criterion && !completed_generation)
            {
                // Budget died before the segment could update its mean once;
                // nothing meaningful to record.
                ledger.tail_evals = evals - segment_start;
                break;
            }

            const Vector converged = saturate(state.m, problem.bounds);
            double f_converged;
            bool matched_existing = false;
            int archive_size = 0;

            if (criterion && repelling)
            {
                f_converged = charged_eval(converged);
                const ArchiveUpdateResult update = archive_update(
                    archive, converged, f_converged, charged_eval, repelling->hv);
                matched_existing = update.matched_existing;
                archive_size = static_cast<int>(archive.points.size());
                if (observer && observer->on_archive_update)
                    observer->on_archive_update(archive);
            }
            else
            {
                // Plain restarts and budget-truncated tails never evaluate
                // their mean online; the fitness is analysis metadata.
                f_converged = problem.evaluate(converged);
                if (repelling)
                    archive_size = static_cast<int>(archive.points.size());
            }

            RestartRecord record;
            record.index = static_cast<int>(ledger.records.size()) + 1;
            record.x = converged;
            record.f = f_converged;
            record.evals_used = evals - segment_start;
            record.evals_at_end = evals;
            record.criterion = criterion ? to_string(*criterion) : "budget";
            record.lambda = params.lambda;
            record.sigma0 = restart.sigma0;
            record.archive_size = archive_size;
            record.redundant_online = matched_existing;
            ledger.records.push_back(record);

            strategy_state.apply_segment_evals(record.evals_used);

            if (!criterion)
                break;  // budget exhausted mid-segment
        }

        ledger.total_evals = evals;
        return ledger;
    }
}
