#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "problems.hpp"
#include "redundancy.hpp"
#include "repelling.hpp"

namespace rrcma
{
    struct ExperimentConfig
    {
        std::vector<std::string> problems;
        std::vector<int> dims;
        std::vector<std::uint64_t> instances = {0};
        std::string strategy = "restart";
        bool repelling = false;
        double coverage_c = 10.0;
        double gamma = 0.995;
        double sigma0 = 0.0;  // 0: use 0.2 x the largest box range of the problem
        long budget = 0;      // 0: use 10^4 x d
        int runs = 50;
        std::uint64_t base_seed = 42;
        std::string out_dir;
        int hv_online = kHvOnlineDefault;
        int threads = 1;  // 0: hardware concurrency

        void validate() const;
    };

    /// Deterministic per-run stream seed. Strategy and repelling settings are
    /// deliberately not folded in, so configurations can be compared on
    /// paired seeds.
    std::uint64_t run_seed(std::uint64_t base_seed, const std::string& problem, int d,
                           std::uint64_t instance, int run);

    std::string make_run_id(const ExperimentConfig& cfg, const std::string& problem, int d,
                            std::uint64_t instance, int run);

    double default_sigma0(const Problem& problem);
    long default_budget(int d);

    /// Execute every (problem, dim, instance, run) combination, writing one
    /// JSON-lines event file and one best-so-far trajectory CSV per run into
    /// cfg.out_dir. Byte-identical output for identical configs.
    void run_experiment(const ExperimentConfig& cfg);

    // ------------------------------------------------------------------
    // Post-hoc analysis over written logs
    // ------------------------------------------------------------------

    struct RunLog
    {
        std::string run_id;
        std::string problem;
        int dim = 0;
        std::uint64_t instance = 0;
        std::string strategy;
        bool repelling = false;
        double coverage_c = 0.0;
        RunLedger ledger;
        double f_star = 0.0;
    };

    RunLog load_run_log(const std::string& events_path);
    std::vector<std::string> find_event_files(const std::string& dir);

    struct RrfRow
    {
        std::string run_id;
        std::string problem;
        int dim = 0;
        std::uint64_t instance = 0;
        std::string strategy;
        double rrf_value = 0.0;
        int n_restarts = 0;
        int n_redundant = 0;
    };

    /// Per-run RRF from event logs: rebuilds each problem instance, resolves
    /// redundancy with the offline Hill-Valley budget and applies the RRF
    /// definition. Incomplete logs raise ReportError naming the run ids.
    std::vector<RrfRow> aggregate_rrf(const std::vector<std::string>& event_files,
                                      int hv_offline = kHvOfflineDefault);

    struct RrfSummaryRow
    {
        std::string problem;
        int dim = 0;
        std::uint64_t instance = 0;
        std::string strategy;
        int runs = 0;
        double mean = 0.0;
        double median = 0.0;
        double q25 = 0.0;
        double q75 = 0.0;
    };

    std::vector<RrfSummaryRow> summarize_rrf(const std::vector<RrfRow>& rows);

    void write_rrf_csv(const std::vector<RrfRow>& rows, std::ostream& out);
    void write_rrf_summary_csv(const std::vector<RrfSummaryRow>& rows, std::ostream& out);

    // ------------------------------------------------------------------
    // ECDF over log-spaced targets (empirical attainment style)
    // ------------------------------------------------------------------

    struct Trajectory
    {
        std::string run_id;
        std::vector<TrajectoryPoint> points;  // improvements, eval index ascending
        long total_evals = 0;
        double f_star = 0.0;
    };

    Trajectory load_trajectory(const std::string& traj_path, double f_star, long total_evals);

    struct EcdfCurve
    {
        std::vector<long> evals;      // log-spaced evaluation grid
        std::vector<double> fraction; // attained (run, target) fraction, nondecreasing
    };

    /// Fraction of (run, target) pairs with best-so-far error within target,
    /// per evaluation count. Targets are log-uniform over
    /// [target_lo, target_hi], endpoints included.
    EcdfCurve compute_ecdf(const std::vector<Trajectory>& trajectories, int n_targets = 51,
                           double target_lo = 1e-8, double target_hi = 1e2,
                           int grid_points = 101);

    void write_ecdf_csv(const EcdfCurve& curve, std::ostream& out);

    void write_optima_csv(const Problem& problem, std::ostream& out);

    /// Fixture invariant suites behind the CLI `verify` subcommand. Prints
    /// one line per suite; returns the number of failed suites.
    int verify_fixtures(std::ostream& out);
}
