#pragma once

// Experiment plumbing behind the command-line tool: observation files, random
// splits, gamma sweeps with validation, timing benchmarks, the repeated
// trace-vs-envelope comparison and the counterexample certificate.

#include "tenscomp/admm.hpp"
#include "tenscomp/models.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tenscomp {

// Observation files: header "N p_1 ... p_N", then rows "i_1,...,i_N,value"
// with 1-based indices.
void write_observations(std::ostream &os, const ObservationSet &obs);
ObservationSet read_observations(std::istream &is);
void save_observations(const std::filesystem::path &path, const ObservationSet &obs);
ObservationSet load_observations(const std::filesystem::path &path);

/// Disjoint train / validation / test flat positions, each sorted.
struct SplitAssignment {
    std::vector<Index> train;
    std::vector<Index> validation;
    std::vector<Index> test;
};

/// Shuffles all `total` positions with `seed` and cuts the leading
/// round(train_frac * total) and round(val_frac * total) positions off for
/// training and validation. The test set is the next round(test_frac * total)
/// positions, or everything left when test_frac is absent.
SplitAssignment make_splits(Index total, double train_frac, double val_frac,
                            std::optional<double> test_frac, std::uint64_t seed);

/// {10^j : j = -7, ..., 0}.
std::vector<double> default_gamma_grid();

/// Either a fixed alpha or the estimate from the training observations.
struct AlphaPolicy {
    std::optional<double> value; // empty means "estimate"

    static AlphaPolicy parse(const std::string &text);
    double resolve(const ObservationSet &train) const;
    std::string to_string() const;
};

/// Solver configuration for one gauge with alpha resolved against `train`.
AdmmConfig configure(const AdmmConfig &base, GaugeSpec::Kind kind,
                     const AlphaPolicy &alpha, const ObservationSet &train);

struct SweepRow {
    double gamma = 0;
    double val_rmse = 0;
    int iterations = 0;
    double seconds = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows; // in grid order
    std::size_t best = 0;       // lowest validation RMSE, ties to smaller gamma
    Solution model;             // solution at the winning gamma, not refit
};

/// Solves on `train` for every gamma in `grid` (cfg.gamma is overridden) and
/// scores each model on `validation`.
SweepResult sweep_gamma(const ObservationSet &train, const ObservationSet &validation,
                        const AdmmConfig &cfg, const std::vector<double> &grid);

/// One repetition of the synthetic comparison.
struct CompareRow {
    std::uint64_t seed = 0;
    double alpha = 0;
    double trace_gamma = 0;
    double trace_rmse = 0;
    double envelope_gamma = 0;
    double envelope_rmse = 0;
};

struct CompareConfig {
    TuckerSpec tucker;
    double train_frac = 0.10;
    double val_frac = 0.45;
    int repetitions = 20;
    std::uint64_t first_seed = 0;
    std::vector<double> gamma_grid = default_gamma_grid();
    AlphaPolicy alpha;
    AdmmConfig admm;
};

/// Generates a Tucker instance per seed, splits it, sweeps gamma for both
/// gauges on the same split and records test RMSE. Test entries are only
/// touched after the sweep has picked its model.
std::vector<CompareRow> compare_gauges(const CompareConfig &cfg);

struct PairedTTest {
    double mean_difference = 0; // mean(a - b)
    double t = 0;
    int dof = 0;
    double p_value = 1; // H1: mean(a - b) < 0
};

/// One-sided paired t-test of mean(a - b) < 0.
PairedTTest paired_t_test_less(const std::vector<double> &a,
                               const std::vector<double> &b);

struct BenchRow {
    Index p = 0;
    std::uint64_t seed = 0;
    std::string gauge;
    double seconds = 0;
    int iterations = 0;
};

struct BenchConfig {
    std::vector<Index> sizes{20, 40, 60};
    int seeds = 1;
    std::uint64_t first_seed = 0;
    double train_frac = 0.10;
    double noise_variance = 1e-3;
    AlphaPolicy alpha;
    AdmmConfig admm;
};

/// p x p x p Tucker instances with ranks scaled from (12, 6, 3) at p = 40,
/// timed end to end for both gauges at the same gamma.
std::vector<BenchRow> bench_gauges(const BenchConfig &cfg);

/// Core ranks used by bench_gauges for a cube of side p.
std::vector<Index> bench_ranks(Index p);

struct Certificate {
    Shape shape;
    double frobenius = 0;
    std::vector<double> spectral_norms;
    MultilinearRank rank;
    double trace_norm = 0;
    double trace_norm_formula = 0;
    double rank_formula = 0;
    double envelope_bound = 0; // certified lower bound on Omega_alpha, alpha = sqrt(p_min)

    bool norm_ok = false;     // ||W||_2 = sqrt(p_min)
    bool spectral_ok = false; // all spectral norms <= 1
    bool rank_gap_ok = false; // min rank < max rank
    bool formulas_ok = false; // trace norm and rank match the closed forms
    bool gap_ok = false;      // trace norm < rank average

    bool passed() const {
        return norm_ok && spectral_ok && rank_gap_ok && formulas_ok && gap_ok;
    }
};

Certificate certify_counterexample(const DenseTensor &W, double rank_tol = 1e-8);
void print_certificate(std::ostream &os, const Certificate &c);

/// Writes the per-iteration solver history as CSV.
void write_report_csv(std::ostream &os, const SolverReport &report);

} // namespace tenscomp
