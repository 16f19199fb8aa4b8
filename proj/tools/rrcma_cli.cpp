#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rrcma/harness.hpp"

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitConfig = 2;
    constexpr int kExitRuntime = 3;

    void add_common_flags(CLI::App* cmd, rrcma::ExperimentConfig& cfg)
    {
        cmd->add_option("--problem", cfg.problems, "Problem names (see list-problems)");
        cmd->add_option("--dim", cfg.dims, "Dimensions to run");
        cmd->add_option("--instances", cfg.instances, "Instance seeds (0 = base problem)");
        cmd->add_option("--strategy", cfg.strategy, "Restart strategy: restart|ipop|bipop");
        cmd->add_flag("--repelling", cfg.repelling, "Enable repelling restarts");
        cmd->add_option("--coverage-c", cfg.coverage_c, "Coverage factor c (> 0)");
        cmd->add_option("--gamma", cfg.gamma, "Rejection shrinkage factor in (0, 1)");
        cmd->add_option("--sigma0", cfg.sigma0, "Initial step size (0 = 0.2 x box range)");
        cmd->add_option("--budget", cfg.budget, "Evaluation budget per run (0 = 1e4 x d)");
        cmd->add_option("--runs", cfg.runs, "Runs per (problem, dim, instance)");
        cmd->add_option("--seed", cfg.base_seed, "Base seed");
        cmd->add_option("--out", cfg.out_dir, "Output directory");
        cmd->add_option("--hv-points", cfg.hv_online, "Interior Hill-Valley points (online)");
        cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
        cmd->set_config("--config", "", "Config file with the same keys (flags override)");
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"CMA-ES with repelling restarts: experiment runner and analysis"};
    app.require_subcommand(1);

    rrcma::ExperimentConfig cfg;
    CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment batch");
    add_common_flags(cmd_run, cfg);

    std::string rrf_dir;
    std::string rrf_out;
    std::string rrf_summary_out;
    int hv_offline = rrcma::kHvOfflineDefault;
    CLI::App* cmd_rrf = app.add_subcommand("rrf", "Aggregate RRF from event logs");
    cmd_rrf->add_option("--logs", rrf_dir, "Directory with .events.jsonl files")->required();
    cmd_rrf->add_option("--out", rrf_out, "Per-run RRF CSV (default: stdout)");
    cmd_rrf->add_option("--summary", rrf_summary_out, "Aggregate summary CSV");
    cmd_rrf->add_option("--hv-points", hv_offline, "Interior Hill-Valley points (offline)");

    std::string ecdf_dir;
    std::string ecdf_out;
    int ecdf_targets = 51;
    CLI::App* cmd_ecdf = app.add_subcommand("ecdf", "ECDF over log-spaced targets");
    cmd_ecdf->add_option("--logs", ecdf_dir, "Directory with run logs")->required();
    cmd_ecdf->add_option("--out", ecdf_out, "Curve CSV (default: stdout)");
    cmd_ecdf->add_option("--targets", ecdf_targets, "Number of log-spaced targets");

    std::string optima_name;
    int optima_dim = 2;
    std::uint64_t optima_instance = 0;
    std::string optima_out;
    CLI::App* cmd_list = app.add_subcommand("list-problems", "Show the problem catalog");
    cmd_list->add_option("--optima-csv", optima_out, "Export an optima catalog as CSV");
    cmd_list->add_option("--problem", optima_name, "Problem for --optima-csv");
    cmd_list->add_option("--dim", optima_dim, "Dimension for --optima-csv");
    cmd_list->add_option("--instance", optima_instance, "Instance for --optima-csv");

    CLI::App* cmd_verify = app.add_subcommand("verify", "Run invariant suites on fixtures");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try
    {
        if (cmd_run->parsed())
        {
            rrcma::run_experiment(cfg);
            return kExitOk;
        }

        if (cmd_rrf->parsed())
        {
            const auto rows = rrcma::aggregate_rrf(rrcma::find_event_files(rrf_dir), hv_offline);
            if (rrf_out.empty())
            {
                rrcma::write_rrf_csv(rows, std::cout);
            }
            else
            {
                std::ofstream out(rrf_out);
                if (!out)
                    throw rrcma::IoError("cannot write " + rrf_out);
                rrcma::write_rrf_csv(rows, out);
            }
            if (!rrf_summary_out.empty())
            {
                std::ofstream out(rrf_summary_out);
                if (!out)
                    throw rrcma::IoError("cannot write " + rrf_summary_out);
                rrcma::write_rrf_summary_csv(rrcma::summarize_rrf(rows), out);
            }
            return kExitOk;
        }

        if (cmd_ecdf->parsed())
        {
            std::vector<rrcma::Trajectory> trajectories;
            for (const std::string& events_path : rrcma::find_event_files(ecdf_dir))
            {
                const rrcma::RunLog log = rrcma::load_run_log(events_path);
                const std::string traj_path =
                    events_path.substr(0, events_path.size() - 13) + ".traj.csv";
                trajectories.push_back(
                    rrcma::load_trajectory(traj_path, log.f_star, log.ledger.total_evals));
            }
            const rrcma::EcdfCurve curve = rrcma::compute_ecdf(trajectories, ecdf_targets);
            if (ecdf_out.empty())
            {
                rrcma::write_ecdf_csv(curve, std::cout);
            }
            else
            {
                std::ofstream out(ecdf_out);
                if (!out)
                    throw rrcma::IoError("cannot write " + ecdf_out);
                rrcma::write_ecdf_csv(curve, out);
            }
            return kExitOk;
        }

        if (cmd_list->parsed())
        {
            if (!optima_out.empty())
            {
                if (optima_name.empty())
                    throw rrcma::ConfigError("--optima-csv requires --problem");
                const rrcma::Problem problem =
                    rrcma::make_problem(optima_name, optima_dim, optima_instance);
                std::ofstream out(optima_out);
                if (!out)
                    throw rrcma::IoError("cannot write " + optima_out);
                rrcma::write_optima_csv(problem, out);
                return kExitOk;
            }
            std::cout << "name                    dims     note\n";
            for (const rrcma::ProblemSpec& spec : rrcma::problem_catalog())
            {
                char line[160];
                std::snprintf(line, sizeof(line), "%-23s %d..%-4d %s", spec.name.c_str(),
                              spec.min_d, spec.max_d, spec.note.c_str());
                std::cout << line << "\n";
            }
            return kExitOk;
        }

        if (cmd_verify->parsed())
            return rrcma::verify_fixtures(std::cout) == 0 ? kExitOk : kExitRuntime;
    }
    catch (const rrcma::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
