// Command-line front end: synthetic data, counterexamples, completion,
// gamma sweeps, evaluation, timing benchmarks and the repeated comparison.
//
// Exit codes: 0 success, 1 usage, 2 io, 3 numeric failure, 4 certificate
// failure.

#include "tenscomp/experiment.hpp"
#include "tenscomp/models.hpp"
#include "tenscomp/tensor_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tenscomp;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumeric = 3, kCertificate = 4 };

struct SolverFlags {
    std::string gauge = "trace";
    std::string alpha = "estimate";
    double gamma = 1e-2;
    double beta = 1.0;
    int max_iters = 500;
    double tol = 1e-5;

    void add_to(CLI::App *cmd, bool with_gamma = true) {
        cmd->add_option("--gauge", gauge, "Spectral gauge")
            ->check(CLI::IsMember({"trace", "envelope"}))
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "'estimate' or a positive ball radius")
            ->capture_default_str();
        if (with_gamma)
            cmd->add_option("--gamma", gamma, "Regularization weight")
                ->check(CLI::PositiveNumber)
                ->capture_default_str();
        cmd->add_option("--beta", beta, "Augmented Lagrangian parameter")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--max-iters", max_iters, "ADMM iteration cap")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--tol", tol, "Relative primal residual tolerance")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
    }

    GaugeSpec::Kind kind() const {
        return gauge == "trace" ? GaugeSpec::Kind::L1 : GaugeSpec::Kind::CardEnvelope;
    }

    AdmmConfig base() const {
        AdmmConfig c;
        c.gamma = gamma;
        c.beta = beta;
        c.max_outer_iters = max_iters;
        c.primal_tol = tol;
        return c;
    }
};

void enable_config(CLI::App *cmd) {
    // Consumed by expand_config before parsing; declared for --help.
    static std::string unused;
    cmd->add_option("--config", unused, "key=value file; flags on the command line win");
}

bool has_flag(const std::vector<std::string> &args, const std::string &flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Replaces "--config FILE" with "--key value..." for every key in FILE that is
// not already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    fs::path file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (file.empty())
        return args;
    if (!fs::is_regular_file(file))
        throw IoError("cannot open config file '" + file.string() + "'");

    const std::vector<std::string> given = args;
    for (const CLI::ConfigItem &item : CLI::ConfigINI().from_file(file.string())) {
        std::string name = item.name;
        std::replace(name.begin(), name.end(), '_', '-');
        const std::string flag = "--" + name;
        if (has_flag(given, flag))
            continue;
        args.push_back(flag);
        for (const std::string &v : item.inputs) {
            std::istringstream words(v);
            for (std::string w; words >> w;)
                args.push_back(w);
        }
    }
    return args;
}

Shape to_shape(const std::vector<long> &dims) {
    return Shape(std::vector<Index>(dims.begin(), dims.end()));
}

std::ofstream open_out(const fs::path &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(path, mode);
    if (!os)
        throw IoError("cannot open '" + path.string() + "' for writing");
    os.precision(std::numeric_limits<double>::max_digits10);
    return os;
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

const char *gauge_name(const GaugeSpec &g) {
    return g.kind == GaugeSpec::Kind::L1 ? "trace" : "envelope";
}

void write_summary(const fs::path &path, const Solution &sol, const std::string &alpha_policy) {
    auto os = open_out(path);
    os << "key,value\n";
    os << "gauge," << gauge_name(sol.report.gauge) << '\n';
    os << "alpha_policy," << alpha_policy << '\n';
    os << "alpha," << sol.report.gauge.alpha << '\n';
    os << "gamma," << sol.report.gamma << '\n';
    os << "beta," << sol.report.beta << '\n';
    os << "iterations," << sol.report.iterations << '\n';
    os << "converged," << (sol.report.converged ? 1 : 0) << '\n';
    os << "seconds," << sol.report.seconds << '\n';
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Low-rank tensor completion with trace-norm and cardinality-envelope "
                 "spectral penalties"};
    app.require_subcommand(1);

    // gen-synthetic
    std::vector<long> shape{40, 20, 10};
    std::vector<long> ranks{12, 6, 3};
    double noise_var = 1e-3;
    std::uint64_t seed = 0;
    double train_frac = 0.10;
    double val_frac = 0.45;
    std::string out_dir = ".";
    auto *gen = app.add_subcommand("gen-synthetic", "Standardized Tucker tensor plus splits");
    gen->add_option("--shape", shape)->expected(1, -1)->capture_default_str();
    gen->add_option("--ranks", ranks)->expected(1, -1)->capture_default_str();
    gen->add_option("--noise-var", noise_var)->check(CLI::NonNegativeNumber)->capture_default_str();
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--train-frac", train_frac)->capture_default_str();
    gen->add_option("--val-frac", val_frac)->capture_default_str();
    gen->add_option("--out-dir", out_dir)->capture_default_str();
    enable_config(gen);

    // make-counterexample
    std::vector<long> cx_shape{2, 2, 3};
    std::uint64_t cx_seed = 0;
    std::string cx_out;
    auto *cx = app.add_subcommand("make-counterexample",
                                  "Tensor whose trace norm is strictly below its rank average");
    cx->add_option("--shape", cx_shape)->expected(3, -1)->capture_default_str();
    cx->add_option("--seed", cx_seed)->capture_default_str();
    cx->add_option("--out-dir", cx_out, "Also write counterexample.tns here");
    enable_config(cx);

    // complete
    SolverFlags complete_flags;
    std::string train_path;
    std::string complete_out = ".";
    auto *complete = app.add_subcommand("complete", "Run ADMM on an observation file");
    complete->add_option("--train", train_path, "Observation file")->required();
    complete->add_option("--out-dir", complete_out)->capture_default_str();
    complete_flags.add_to(complete);
    enable_config(complete);

    // sweep
    SolverFlags sweep_flags;
    std::string sweep_train, sweep_val, sweep_out = ".";
    std::vector<double> grid = default_gamma_grid();
    auto *sweep = app.add_subcommand("sweep", "Select gamma on a validation set");
    sweep->add_option("--train", sweep_train)->required();
    sweep->add_option("--val", sweep_val)->required();
    sweep->add_option("--gamma-grid", grid)->expected(1, -1)->capture_default_str();
    sweep->add_option("--out-dir", sweep_out)->capture_default_str();
    sweep_flags.add_to(sweep, false);
    enable_config(sweep);

    // eval
    std::string model_path, test_path, eval_csv;
    auto *eval = app.add_subcommand("eval", "Test RMSE of a model");
    eval->add_option("--model", model_path)->required();
    eval->add_option("--test", test_path)->required();
    eval->add_option("--out", eval_csv, "CSV file to append a row to");
    enable_config(eval);

    // bench
    SolverFlags bench_flags;
    std::vector<long> sizes{20, 40, 60};
    int bench_seeds = 1;
    std::uint64_t bench_seed = 0;
    std::string bench_out = ".";
    auto *bench = app.add_subcommand("bench", "Wall time of both gauges on p x p x p tensors");
    bench->add_option("--sizes", sizes)->expected(1, -1)->capture_default_str();
    bench->add_option("--seeds", bench_seeds)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--seed", bench_seed)->capture_default_str();
    bench->add_option("--noise-var", noise_var)->capture_default_str();
    bench->add_option("--out-dir", bench_out)->capture_default_str();
    bench_flags.add_to(bench);
    enable_config(bench);

    // compare
    SolverFlags cmp_flags;
    int reps = 20;
    std::uint64_t cmp_seed = 0;
    std::string cmp_out = ".";
    std::vector<double> cmp_grid = default_gamma_grid();
    auto *cmp = app.add_subcommand(
        "compare", "Repeated synthetic comparison of the two gauges with a paired t-test");
    cmp->add_option("--shape", shape)->expected(1, -1)->capture_default_str();
    cmp->add_option("--ranks", ranks)->expected(1, -1)->capture_default_str();
    cmp->add_option("--noise-var", noise_var)->capture_default_str();
    cmp->add_option("--reps", reps)->check(CLI::PositiveNumber)->capture_default_str();
    cmp->add_option("--seed", cmp_seed)->capture_default_str();
    cmp->add_option("--train-frac", train_frac)->capture_default_str();
    cmp->add_option("--val-frac", val_frac)->capture_default_str();
    cmp->add_option("--gamma-grid", cmp_grid)->expected(1, -1)->capture_default_str();
    cmp->add_option("--out-dir", cmp_out)->capture_default_str();
    cmp_flags.add_to(cmp, false);
    enable_config(cmp);

    try {
        std::vector<std::string> args = expand_config({argv + 1, argv + argc});
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen) {
            TuckerSpec spec;
            spec.shape = to_shape(shape);
            spec.core_ranks.assign(ranks.begin(), ranks.end());
            spec.noise_variance = noise_var;
            spec.seed = seed;
            const TuckerSample s = generate_tucker(spec);
            const SplitAssignment split =
                make_splits(s.ground_truth.size(), train_frac, val_frac, std::nullopt, seed);
            const fs::path dir(out_dir);
            ensure_dir(dir);
            save_tensor(dir / "ground_truth.tns", s.ground_truth);
            save_tensor(dir / "noiseless.tns", s.noiseless);
            save_observations(dir / "train.obs", ObservationSet::sample(s.ground_truth, split.train));
            save_observations(dir / "val.obs",
                              ObservationSet::sample(s.ground_truth, split.validation));
            save_observations(dir / "test.obs", ObservationSet::sample(s.ground_truth, split.test));
            std::cout << "shape " << spec.shape.to_string() << ", train " << split.train.size()
                      << ", validation " << split.validation.size() << ", test "
                      << split.test.size() << '\n';
        } else if (*cx) {
            CounterexampleSpec spec{to_shape(cx_shape), cx_seed};
            const DenseTensor W = build_counterexample(spec);
            const Certificate cert = certify_counterexample(W);
            print_certificate(std::cout, cert);
            if (!cx_out.empty()) {
                ensure_dir(cx_out);
                save_tensor(fs::path(cx_out) / "counterexample.tns", W);
            }
            if (!cert.passed())
                return kCertificate;
        } else if (*complete) {
            const ObservationSet train = load_observations(train_path);
            const AlphaPolicy alpha = AlphaPolicy::parse(complete_flags.alpha);
            const AdmmConfig cfg =
                configure(complete_flags.base(), complete_flags.kind(), alpha, train);
            const fs::path dir(complete_out);
            ensure_dir(dir);
            Solution sol;
            SolverReport progress;
            try {
                sol = solve(train, cfg, &progress);
            } catch (const NumericFailure &e) {
                std::cerr << "numeric failure: " << e.what() << '\n';
                auto os = open_out(dir / "report.csv");
                write_report_csv(os, progress);
                return kNumeric;
            }
            save_tensor(dir / "completed.tns", sol.W);
            auto os = open_out(dir / "report.csv");
            write_report_csv(os, sol.report);
            write_summary(dir / "summary.csv", sol, alpha.to_string());
            std::cout << "gauge " << gauge_name(cfg.gauge) << ", alpha " << cfg.gauge.alpha
                      << ", iterations " << sol.report.iterations << ", train RMSE "
                      << rmse(sol.W, train) << '\n';
        } else if (*sweep) {
            const ObservationSet train = load_observations(sweep_train);
            const ObservationSet val = load_observations(sweep_val);
            const AlphaPolicy alpha = AlphaPolicy::parse(sweep_flags.alpha);
            const AdmmConfig cfg = configure(sweep_flags.base(), sweep_flags.kind(), alpha, train);
            const SweepResult r = sweep_gamma(train, val, cfg, grid);
            const fs::path dir(sweep_out);
            ensure_dir(dir);
            auto os = open_out(dir / "sweep.csv");
            os << "gamma,val_rmse,iters,seconds\n";
            for (const auto &row : r.rows)
                os << row.gamma << ',' << row.val_rmse << ',' << row.iterations << ','
                   << row.seconds << '\n';
            save_tensor(dir / "model.tns", r.model.W);
            write_summary(dir / "summary.csv", r.model, alpha.to_string());
            std::cout << "best gamma " << r.rows[r.best].gamma << ", validation RMSE "
                      << r.rows[r.best].val_rmse << '\n';
        } else if (*eval) {
            const DenseTensor model = load_tensor(model_path);
            const ObservationSet test = load_observations(test_path);
            const double e = rmse(model, test);
            std::cout.precision(std::numeric_limits<double>::max_digits10);
            std::cout << "test RMSE " << e << '\n';
            if (!eval_csv.empty()) {
                const bool fresh = !fs::exists(eval_csv);
                auto os = open_out(eval_csv, std::ios::app);
                if (fresh)
                    os << "model,test,m,rmse\n";
                os << model_path << ',' << test_path << ',' << test.size() << ',' << e << '\n';
            }
        } else if (*bench) {
            BenchConfig cfg;
            cfg.sizes.assign(sizes.begin(), sizes.end());
            cfg.seeds = bench_seeds;
            cfg.first_seed = bench_seed;
            cfg.noise_variance = noise_var;
            cfg.alpha = AlphaPolicy::parse(bench_flags.alpha);
            cfg.admm = bench_flags.base();
            const auto rows = bench_gauges(cfg);
            ensure_dir(bench_out);
            auto os = open_out(fs::path(bench_out) / "bench.csv");
            os << "p,seed,gauge,seconds,iters\n";
            for (const auto &r : rows) {
                os << r.p << ',' << r.seed << ',' << r.gauge << ',' << r.seconds << ','
                   << r.iterations << '\n';
                std::cout << "p=" << r.p << " seed=" << r.seed << ' ' << r.gauge << ' '
                          << r.seconds << " s, " << r.iterations << " iterations\n";
            }
        } else if (*cmp) {
            CompareConfig cfg;
            cfg.tucker.shape = to_shape(shape);
            cfg.tucker.core_ranks.assign(ranks.begin(), ranks.end());
            cfg.tucker.noise_variance = noise_var;
            cfg.train_frac = train_frac;
            cfg.val_frac = val_frac;
            cfg.repetitions = reps;
            cfg.first_seed = cmp_seed;
            cfg.gamma_grid = cmp_grid;
            cfg.alpha = AlphaPolicy::parse(cmp_flags.alpha);
            cfg.admm = cmp_flags.base();
            cfg.admm.track_objective = false;
            const auto rows = compare_gauges(cfg);
            ensure_dir(cmp_out);
            auto os = open_out(fs::path(cmp_out) / "compare.csv");
            os << "seed,alpha,trace_gamma,trace_rmse,envelope_gamma,envelope_rmse\n";
            std::vector<double> tr, en;
            for (const auto &r : rows) {
                os << r.seed << ',' << r.alpha << ',' << r.trace_gamma << ',' << r.trace_rmse
                   << ',' << r.envelope_gamma << ',' << r.envelope_rmse << '\n';
                tr.push_back(r.trace_rmse);
                en.push_back(r.envelope_rmse);
            }
            double mt = 0, me = 0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                mt += tr[i] / static_cast<double>(rows.size());
                me += en[i] / static_cast<double>(rows.size());
            }
            std::cout << "mean test RMSE: trace " << mt << ", envelope " << me << '\n';
            if (rows.size() >= 2) {
                const PairedTTest t = paired_t_test_less(en, tr);
                std::cout << "paired t-test (envelope < trace): t = " << t.t
                          << ", p = " << t.p_value << '\n';
            }
        }
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericFailure &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const InvalidArgument &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
