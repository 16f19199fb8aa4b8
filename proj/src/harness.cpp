#include "rrcma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace rrcma
{
    namespace
    {
        std::string format_double(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return buf;
        }

        json vector_to_json(const Vector& v)
        {
            json arr = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                arr.push_back(v[i]);
            return arr;
        }

        Vector vector_from_json(const json& arr)
        {
            Vector v(static_cast<Eigen::Index>(arr.size()));
            for (std::size_t i = 0; i < arr.size(); ++i)
                v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
            return v;
        }
    }

    void ExperimentConfig::validate() const
    {
        if (problems.empty())
            throw ConfigError("config field 'problems' must not be empty");
        if (dims.empty())
            throw ConfigError("config field 'dims' must not be empty");
        if (instances.empty())
            throw ConfigError("config field 'instances' must not be empty");
        if (runs < 1)
            throw ConfigError("config field 'runs' must be >= 1");
        if (budget < 0)
            throw ConfigError("config field 'budget' must be >= 0");
        if (sigma0 < 0.0)
            throw ConfigError("config field 'sigma0' must be >= 0");
        if (repelling && !(coverage_c > 0.0))
            throw ConfigError("config field 'coverage_c' must be positive when repelling is on");
        if (repelling && !(gamma > 0.0 && gamma < 1.0))
            throw ConfigError("config field 'gamma' must lie in (0, 1)");
        if (hv_online < 1)
            throw ConfigError("config field 'hv_online' must be >= 1");
        if (threads < 0)
            throw ConfigError("config field 'threads' must be >= 0");
        if (out_dir.empty())
            throw ConfigError("config field 'out_dir' must be set");
        strategy_from_name(strategy);
    }

    std::uint64_t run_seed(std::uint64_t base_seed, const std::string& problem, int d,
                           std::uint64_t instance, int run)
    {
        std::uint64_t s = splitmix64(base_seed ^ hash_string(problem));
        s = splitmix64(s ^ static_cast<std::uint64_t>(d));
        s = splitmix64(s ^ instance);
        return splitmix64(s ^ static_cast<std::uint64_t>(run));
    }

    std::string make_run_id(const ExperimentConfig& cfg, const std::string& problem, int d,
                            std::uint64_t instance, int run)
    {
        char tail[96];
        if (cfg.repelling)
        {
            char cbuf[24];
            std::snprintf(cbuf, sizeof(cbuf), "%g", cfg.coverage_c);
            std::snprintf(tail, sizeof(tail), "%s-rr-c%s_r%03d", cfg.strategy.c_str(), cbuf, run);
        }
        else
        {
            std::snprintf(tail, sizeof(tail), "%s_r%03d", cfg.strategy.c_str(), run);
        }
        return problem + "_d" + std::to_string(d) + "_i" + std::to_string(instance) + "_" + tail;
    }

    double default_sigma0(const Problem& problem)
    {
        return 0.2 * problem.bounds.max_range();
    }

    long default_budget(int d)
    {
        return 10000L * d;
    }

    namespace
    {
        struct RunTask
        {
            std::string problem;
            int d;
            std::uint64_t instance;
            int run;
        };

        void execute_run(const ExperimentConfig& cfg, const RunTask& task)
        {
            const Problem problem = make_problem(task.problem, task.d, task.instance);
            const double sigma0 = cfg.sigma0 > 0.0 ? cfg.sigma0 : default_sigma0(problem);
            const long budget = cfg.budget > 0 ? cfg.budget : default_budget(task.d);
            const std::string id = make_run_id(cfg, task.problem, task.d, task.instance, task.run);
            const std::uint64_t seed =
                run_seed(cfg.base_seed, task.problem, task.d, task.instance, task.run);

            std::optional<RepellingConfig> repelling;
            if (cfg.repelling)
            {
                RepellingConfig rc;
                rc.coverage_c = cfg.coverage_c;
                rc.gamma = cfg.gamma;
                rc.sigma0 = sigma0;
                rc.hv = HvConfig{cfg.hv_online};
                repelling = rc;
            }

            RngStream rng(seed);
            const RunLedger ledger = run_rr_cmaes(problem, strategy_from_name(cfg.strategy),
                                                  repelling, sigma0, budget, rng);

            const fs::path events_path = fs::path(cfg.out_dir) / (id + ".events.jsonl");
            const fs::path traj_path = fs::path(cfg.out_dir) / (id + ".traj.csv");

            std::ofstream events(events_path);
            if (!events)
                throw IoError("cannot write " + events_path.string());

            json start{{"type", "run_start"},
                       {"run_id", id},
                       {"problem", task.problem},
                       {"dim", task.d},
                       {"instance", task.instance},
                       {"strategy", cfg.strategy},
                       {"repelling", cfg.repelling},
                       {"coverage_c", cfg.coverage_c},
                       {"gamma", cfg.gamma},
                       {"sigma0", sigma0},
                       {"budget", budget},
                       {"seed", seed},
                       {"hv_online", cfg.hv_online}};
            events << start.dump() << "\n";

            for (const RestartRecord& rec : ledger.records)
            {
                json event{{"type", "restart"},
                           {"run_id", id},
                           {"restart_index", rec.index},
                           {"evals_at_restart", rec.evals_at_end},
                           {"evals_used", rec.evals_used},
                           {"mean", vector_to_json(rec.x)},
                           {"f_mean", rec.f},
                           {"criterion", rec.criterion},
                           {"lambda", rec.lambda},
                           {"sigma0", rec.sigma0},
                           {"archive_size", rec.archive_size},
                           {"redundant_online", rec.redundant_online}};
                events << event.dump() << "\n";
            }

            json end{{"type", "run_end"},
                     {"run_id", id},
                     {"total_evals", ledger.total_evals},
                     {"best_f", ledger.best_f},
                     {"best_x", vector_to_json(ledger.best_x)},
                     {"f_star", problem.f_star},
                     {"tail_evals", ledger.tail_evals},
                     {"saturated_rejections", ledger.saturated_rejections}};
            events << end.dump() << "\n";
            events.close();

            std::ofstream traj(traj_path);
            if (!traj)
                throw IoError("cannot write " + traj_path.string());
            traj << "evaluation_index,best_f\n";
            for (const TrajectoryPoint& point : ledger.trajectory)
                traj << point.eval << "," << format_double(point.best_f) << "\n";
            if (ledger.trajectory.empty() || ledger.trajectory.back().eval != ledger.total_evals)
                traj << ledger.total_evals << "," << format_double(ledger.best_f) << "\n";
        }
    }

    void run_experiment(const ExperimentConfig& cfg)
    {
        cfg.validate();
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        if (!fs::is_directory(cfg.out_dir))
            throw IoError("cannot create output directory " + cfg.out_dir);

        std::vector<RunTask> tasks;
        for (const std::string& problem : cfg.problems)
            for (const int d : cfg.dims)
                for (const std::uint64_t instance : cfg.instances)
                    for (int run = 0; run < cfg.runs; ++run)
                        tasks.push_back({problem, d, instance, run});

        const unsigned n_threads = cfg.threads > 0
                                       ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
        if (n_threads <= 1 || tasks.size() <= 1)
        {
            for (const RunTask& task : tasks)
                execute_run(cfg, task);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::string first_error;
        std::mutex error_mutex;
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < n_threads; ++t)
            workers.emplace_back([&] {
                while (!failed.load())
                {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size())
                        return;
                    try
                    {
                        execute_run(cfg, tasks[i]);
                    }
                    catch (const std::exception& e)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!failed.exchange(true))
                            first_error = e.what();
                    }
                }
            });
        for (std::thread& worker : workers)
            worker.join();
        if (failed.load())
            throw IoError("run_experiment worker failed: " + first_error);
    }

    RunLog load_run_log(const std::string& events_path)
    {
        std::ifstream in(events_path);
        if (!in)
            throw IoError("cannot open " + events_path);

        RunLog log;
        bool saw_start = false, saw_end = false;
        std::string line;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            const json event = json::parse(line, nullptr, false);
            if (event.is_discarded())
                throw ReportError("malformed event line in " + events_path);
            const std::string type = event.value("type", "");
            if (type == "run_start")
            {
                saw_start = true;
                log.run_id = event.at("run_id").get<std::string>();
                log.problem = event.at("problem").get<std::string>();
                log.dim = event.at("dim").get<int>();
                log.instance = event.at("instance").get<std::uint64_t>();
                log.strategy = event.at("strategy").get<std::string>();
                log.repelling = event.at("repelling").get<bool>();
                log.coverage_c = event.at("coverage_c").get<double>();
            }
            else if (type == "restart")
            {
                RestartRecord rec;
                rec.index = event.at("restart_index").get<int>();
                rec.evals_at_end = event.at("evals_at_restart").get<long>();
                rec.evals_used = event.at("evals_used").get<long>();
                rec.x = vector_from_json(event.at("mean"));
                rec.f = event.at("f_mean").get<double>();
                rec.criterion = event.at("criterion").get<std::string>();
                rec.lambda = event.at("lambda").get<int>();
                rec.sigma0 = event.at("sigma0").get<double>();
                rec.archive_size = event.at("archive_size").get<int>();
                rec.redundant_online = event.at("redundant_online").get<bool>();
                log.ledger.records.push_back(rec);
            }
            else if (type == "run_end")
            {
                saw_end = true;
                log.ledger.total_evals = event.at("total_evals").get<long>();
                log.ledger.best_f = event.at("best_f").get<double>();
                log.ledger.best_x = vector_from_json(event.at("best_x"));
                log.f_star = event.at("f_star").get<double>();
                log.ledger.tail_evals = event.at("tail_evals").get<long>();
                log.ledger.saturated_rejections = event.at("saturated_rejections").get<long>();
            }
        }
        if (!saw_start || !saw_end)
            throw ReportError("incomplete event log: " +
                              (log.run_id.empty() ? events_path : log.run_id));
        return log;
    }

    std::vector<std::string> find_event_files(const std::string& dir)
    {
        std::vector<std::string> files;
        if (!fs::is_directory(dir))
            throw IoError("not a directory: " + dir);
        for (const auto& entry : fs::directory_iterator(dir))
        {
            const std::string name = entry.path().filename().string();
            if (name.size() > 13 && name.substr(name.size() - 13) == ".events.jsonl")
                files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        return files;
    }

    std::vector<RrfRow> aggregate_rrf(const std::vector<std::string>& event_files, int hv_offline)
    {
        std::vector<RrfRow> rows;
        std::vector<std::string> bad_runs;
        for (const std::string& path : event_files)
        {
            RunLog log;
            try
            {
                log = load_run_log(path);
            }
            catch (const ReportError& e)
            {
                bad_runs.push_back(e.what());
                continue;
            }

            const Problem problem = make_problem(log.problem, log.dim, log.instance);
            log.ledger.x_star = problem.x_star;
            classify_redundancy(log.ledger, problem.evaluate, HvConfig{hv_offline});

            RrfRow row;
            row.run_id = log.run_id;
            row.problem = log.problem;
            row.dim = log.dim;
            row.instance = log.instance;
            row.strategy = log.strategy;
            row.rrf_value = log.ledger.total_evals > 0 ? rrf(log.ledger) : 0.0;
            row.n_restarts = static_cast<int>(log.ledger.records.size());
            for (const RestartRecord& rec : log.ledger.records)
                if (rec.redundant.value_or(false))
                    ++row.n_redundant;
            rows.push_back(row);
        }
        if (!bad_runs.empty())
        {
            std::string message = "incomplete runs:";
            for (const std::string& r : bad_runs)
                message += " " + r;
            throw ReportError(message);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const RrfRow& a, const RrfRow& b) { return a.run_id < b.run_id; });
        return rows;
    }

    namespace
    {
        double percentile(std::vector<double> values, double p)
        {
            std::sort(values.begin(), values.end());
            if (values.empty())
                return 0.0;
            const double idx = p * (static_cast<double>(values.size()) - 1.0);
            const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
            const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
            const double w = idx - static_cast<double>(lo);
            return values[lo] * (1.0 - w) + values[hi] * w;
        }
    }

    std::vector<RrfSummaryRow> summarize_rrf(const std::vector<RrfRow>& rows)
    {
        std::vector<RrfSummaryRow> out;
        auto key_of = [](const RrfRow& r) {
            return r.problem + "|" + std::to_string(r.dim) + "|" + std::to_string(r.instance) +
                   "|" + r.strategy;
        };
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        std::vector<const RrfRow*> representatives;
        for (const RrfRow& row : rows)
        {
            const std::string key = key_of(row);
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const auto& g) { return g.first == key; });
            if (it == groups.end())
            {
                groups.push_back({key, {row.rrf_value}});
                representatives.push_back(&row);
            }
            else
            {
                it->second.push_back(row.rrf_value);
            }
        }
        for (std::size_t i = 0; i < groups.size(); ++i)
        {
            const RrfRow& rep = *representatives[i];
            const std::vector<double>& values = groups[i].second;
            RrfSummaryRow s;
            s.problem = rep.problem;
            s.dim = rep.dim;
            s.instance = rep.instance;
            s.strategy = rep.strategy;
            s.runs = static_cast<int>(values.size());
            s.mean = 0.0;
            for (const double v : values)
                s.mean += v;
            s.mean /= static_cast<double>(values.size());
            s.median = percentile(values, 0.5);
            s.q25 = percentile(values, 0.25);
            s.q75 = percentile(values, 0.75);
            out.push_back(s);
        }
        return out;
    }

    void write_rrf_csv(const std::vector<RrfRow>& rows, std::ostream& out)
    {
        out << "run_id,function,dimension,instance,strategy,rrf,n_restarts,n_redundant\n";
        for (const RrfRow& r : rows)
            out << r.run_id << "," << r.problem << "," << r.dim << "," << r.instance << ","
                << r.strategy << "," << format_double(r.rrf_value) << "," << r.n_restarts << ","
                << r.n_redundant << "\n";
    }

    void write_rrf_summary_csv(const std::vector<RrfSummaryRow>& rows, std::ostream& out)
    {
        out << "function,dimension,instance,strategy,runs,mean,median,q25,q75\n";
        for (const RrfSummaryRow& r : rows)
            out << r.problem << "," << r.dim << "," << r.instance << "," << r.strategy << ","
                << r.runs << "," << format_double(r.mean) << "," << format_double(r.median) << ","
                << format_double(r.q25) << "," << format_double(r.q75) << "\n";
    }

    Trajectory load_trajectory(const std::string& traj_path, double f_star, long total_evals)
    {
        std::ifstream in(traj_path);
        if (!in)
            throw IoError("cannot open " + traj_path);
        Trajectory traj;
        traj.f_star = f_star;
        traj.total_evals = total_evals;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            const std::size_t comma = line.find(',');
            if (comma == std::string::npos)
                throw ReportError("malformed trajectory line in " + traj_path);
            traj.points.push_back(
                {std::stol(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        }
        if (traj.total_evals == 0 && !traj.points.empty())
            traj.total_evals = traj.points.back().eval;
        return traj;
    }

    EcdfCurve compute_ecdf(const std::vector<Trajectory>& trajectories, int n_targets,
                           double target_lo, double target_hi, int grid_points)
    {
        if (trajectories.empty())
            throw ReportError("compute_ecdf: no trajectories");
        if (n_targets < 2 || !(target_lo > 0.0) || !(target_hi > target_lo))
            throw ConfigError("compute_ecdf: invalid target grid");

        std::vector<double> targets(static_cast<std::size_t>(n_targets));
        const double log_lo = std::log10(target_lo);
        const double log_hi = std::log10(target_hi);
        for (int i = 0; i < n_targets; ++i)
            targets[static_cast<std::size_t>(i)] =
                std::pow(10.0, log_lo + (log_hi - log_lo) * i / (n_targets - 1));

        long max_evals = 1;
        for (const Trajectory& t : trajectories)
            max_evals = std::max(max_evals, t.total_evals);

        std::vector<long> grid;
        for (int i = 0; i < grid_points; ++i)
        {
            const double e = std::pow(static_cast<double>(max_evals),
                                      static_cast<double>(i) / (grid_points - 1));
            const long rounded = std::max(1L, static_cast<long>(std::llround(e)));
            if (grid.empty() || rounded > grid.back())
                grid.push_back(rounded);
        }
        if (grid.back() != max_evals)
            grid.push_back(max_evals);

        EcdfCurve curve;
        curve.evals = grid;
        curve.fraction.assign(grid.size(), 0.0);

        const double denom =
            static_cast<double>(trajectories.size()) * static_cast<double>(n_targets);
        for (const Trajectory& t : trajectories)
        {
            std::size_t pt = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t g = 0; g < grid.size(); ++g)
            {
                while (pt < t.points.size() && t.points[pt].eval <= grid[g])
                {
                    best = std::min(best, t.points[pt].best_f);
                    ++pt;
                }
                if (!std::isfinite(best))
                    continue;
                const double error = best - t.f_star;
                for (int i = 0; i < n_targets; ++i)
                    if (error <= targets[static_cast<std::size_t>(i)])
                        curve.fraction[g] += 1.0 / denom;
            }
        }
        for (std::size_t g = 1; g < curve.fraction.size(); ++g)
            curve.fraction[g] = std::max(curve.fraction[g], curve.fraction[g - 1]);
        return curve;
    }

    void write_ecdf_csv(const EcdfCurve& curve, std::ostream& out)
    {
        out << "evaluations,fraction\n";
        for (std::size_t i = 0; i < curve.evals.size(); ++i)
            out << curve.evals[i] << "," << format_double(curve.fraction[i]) << "\n";
    }

    void write_optima_csv(const Problem& problem, std::ostream& out)
    {
        out << "kind";
        for (int i = 0; i < problem.d; ++i)
            out << ",x" << i;
        out << ",f\n";
        out << "global";
        for (int i = 0; i < problem.d; ++i)
            out << "," << format_double(problem.x_star[i]);
        out << "," << format_double(problem.f_star) << "\n";
        for (const LocalOptimum& opt : problem.local_optima)
        {
            out << "local";
            for (int i = 0; i < problem.d; ++i)
                out << "," << format_double(opt.x[i]);
            out << "," << format_double(opt.f) << "\n";
        }
    }

    namespace
    {
        std::string read_file(const fs::path& path)
        {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            return buffer.str();
        }

        bool suite_hv_symmetry()
        {
            const Problem problem = make_problem("rastrigin", 2, 0);
            RngStream rng(0x5F3759DF);
            const HvConfig hv{10};
            for (int i = 0; i < 1000; ++i)
            {
                Vector a(2), b(2);
                for (int j = 0; j < 2; ++j)
                {
                    a[j] = rng.uniform(problem.bounds.lb[j], problem.bounds.ub[j]);
                    b[j] = rng.uniform(problem.bounds.lb[j], problem.bounds.ub[j]);
                }
                const double fa = problem.evaluate(a);
                const double fb = problem.evaluate(b);
                if (hv_test(a, b, fa, fb, problem.evaluate, hv).same_basin !=
                    hv_test(b, a, fb, fa, problem.evaluate, hv).same_basin)
                    return false;
            }
            return true;
        }

        bool suite_archive_and_containment()
        {
            const Problem problem = make_problem("himmelblau", 2, 0);
            RepellingConfig repelling;
            repelling.coverage_c = 2.0;
            repelling.sigma0 = 2.0;

            bool ok = true;
            long archive_restarts_seen = 0;
            RunObserver observer;
            observer.on_accept = [&](const AcceptanceEvent& event) {
                if (event.forced)
                    return;
                for (std::size_t t = 0; t < event.distance_over_sigma.size(); ++t)
                    if (event.distance_over_sigma[t] < event.threshold[t])
                        ok = false;
            };
            observer.on_archive_update = [&](const Archive& archive) {
                long hits = 0;
                for (const TabuPoint& point : archive.points)
                    hits += point.hits;
                if (hits != archive.restarts)
                    ok = false;
                archive_restarts_seen = archive.restarts;
            };

            RngStream rng(42);
            run_rr_cmaes(problem, StrategyKind::Naive, repelling, 2.0, 20000, rng, &observer);
            return ok && archive_restarts_seen > 0;
        }

        bool suite_log_monotonicity(const fs::path& dir)
        {
            ExperimentConfig cfg;
            cfg.problems = {"himmelblau"};
            cfg.dims = {2};
            cfg.instances = {0};
            cfg.runs = 3;
            cfg.budget = 4000;
            cfg.out_dir = (dir / "mono").string();
            run_experiment(cfg);

            std::vector<Trajectory> trajectories;
            for (const std::string& events_path : find_event_files(cfg.out_dir))
            {
                const RunLog log = load_run_log(events_path);
                const std::string traj_path =
                    events_path.substr(0, events_path.size() - 13) + ".traj.csv";
                const Trajectory traj =
                    load_trajectory(traj_path, log.f_star, log.ledger.total_evals);
                for (std::size_t i = 1; i < traj.points.size(); ++i)
                    if (traj.points[i].best_f > traj.points[i - 1].best_f ||
                        traj.points[i].eval <= traj.points[i - 1].eval)
                        return false;
                trajectories.push_back(traj);
            }
            const EcdfCurve curve = compute_ecdf(trajectories);
            for (std::size_t i = 1; i < curve.fraction.size(); ++i)
                if (curve.fraction[i] < curve.fraction[i - 1])
                    return false;
            return !trajectories.empty();
        }

        bool suite_determinism(const fs::path& dir)
        {
            ExperimentConfig cfg;
            cfg.problems = {"gallagher21"};
            cfg.dims = {2};
            cfg.instances = {0};
            cfg.runs = 2;
            cfg.budget = 3000;
            cfg.repelling = true;
            cfg.coverage_c = 2.0;

            cfg.out_dir = (dir / "det_a").string();
            run_experiment(cfg);
            cfg.out_dir = (dir / "det_b").string();
            run_experiment(cfg);

            const auto files_a = find_event_files((dir / "det_a").string());
            for (const std::string& file_a : files_a)
            {
                const fs::path name = fs::path(file_a).filename();
                if (read_file(file_a) != read_file(dir / "det_b" / name))
                    return false;
                const fs::path traj_name =
                    name.string().substr(0, name.string().size() - 13) + ".traj.csv";
                if (read_file(dir / "det_a" / traj_name) != read_file(dir / "det_b" / traj_name))
                    return false;
            }
            return !files_a.empty();
        }
    }

    int verify_fixtures(std::ostream& out)
    {
        const fs::path dir =
            fs::temp_directory_path() / ("rrcma_verify_" + std::to_string(::getpid()));
        fs::create_directories(dir);

        int failures = 0;
        const auto report = [&](const char* name, bool ok) {
            out << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
            if (!ok)
                ++failures;
        };

        report("hill-valley symmetry (1000 random pairs)", suite_hv_symmetry());
        report("archive hit-sum and rejection containment (replayed run)",
               suite_archive_and_containment());
        report("trajectory and ECDF monotonicity (smoke logs)", suite_log_monotonicity(dir));
        report("seed determinism (byte-identical rerun)", suite_determinism(dir));

        std::error_code ec;
        fs::remove_all(dir, ec);
        return failures;
    }
}
