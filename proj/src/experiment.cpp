#include "tenscomp/experiment.hpp"

#include "tenscomp/spectral.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace tenscomp {

// ---------------------------------------------------------------------------
// Observation files

void write_observations(std::ostream &os, const ObservationSet &obs) {
    const auto &dims = obs.shape().dims();
    os << dims.size();
    for (Index p : dims)
        os << ' ' << p;
    os << '\n';
    os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto &e : obs.entries()) {
        for (Index i : e.index)
            os << i << ',';
        os << e.value << '\n';
    }
    if (!os)
        throw IoError("observations: write failed");
}

ObservationSet read_observations(std::istream &is) {
    std::string line;
    long line_no = 0;
    auto fail = [&](const std::string &what) -> IoError {
        return IoError("observations line " + std::to_string(line_no) + ": " + what);
    };
    auto next = [&] {
        while (std::getline(is, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return true;
        }
        return false;
    };

    if (!next())
        throw fail("missing header");
    std::vector<Index> dims;
    {
        std::istringstream ss(line);
        long order = 0;
        if (!(ss >> order) || order < 1)
            throw fail("invalid header '" + line + "'");
        Index p;
        while (ss >> p)
            dims.push_back(p);
        if (static_cast<long>(dims.size()) != order)
            throw fail("header declares order " + std::to_string(order) +
                       " but lists " + std::to_string(dims.size()) + " dimensions");
    }
    Shape shape;
    try {
        shape = Shape(dims);
    } catch (const InvalidArgument &e) {
        throw fail(e.what());
    }

    std::vector<Observation> entries;
    std::unordered_set<Index> seen;
    std::vector<Index> zero_based(dims.size());
    while (next()) {
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (static_cast<int>(fields.size()) != shape.order() + 1)
            throw fail("expected " + std::to_string(shape.order() + 1) +
                       " comma-separated fields");
        Observation o;
        try {
            for (int k = 0; k < shape.order(); ++k)
                o.index.push_back(std::stoll(fields[static_cast<std::size_t>(k)]));
            o.value = std::stod(fields.back());
        } catch (const std::exception &) {
            throw fail("cannot parse '" + line + "'");
        }
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (o.index[k] < 1 || o.index[k] > dims[k])
                throw fail("index " + std::to_string(o.index[k]) +
                           " out of bounds in mode " + std::to_string(k + 1));
            zero_based[k] = o.index[k] - 1;
        }
        if (!seen.insert(shape.linear_index(zero_based)).second)
            throw fail("duplicate index");
        entries.push_back(std::move(o));
    }
    try {
        return ObservationSet(shape, std::move(entries));
    } catch (const InvalidArgument &e) {
        throw IoError(std::string("observations: ") + e.what());
    }
}

void save_observations(const std::filesystem::path &path, const ObservationSet &obs) {
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open '" + path.string() + "' for writing");
    write_observations(os, obs);
}

ObservationSet load_observations(const std::filesystem::path &path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open '" + path.string() + "'");
    try {
        return read_observations(is);
    } catch (const IoError &e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Splits and configuration

SplitAssignment make_splits(Index total, double train_frac, double val_frac,
                            std::optional<double> test_frac, std::uint64_t seed) {
    const double test = test_frac.value_or(1.0 - train_frac - val_frac);
    auto in_unit = [](double f) { return f > 0 && f < 1; };
    if (!in_unit(train_frac) || !in_unit(val_frac) || !(test >= 0 && test < 1) ||
        train_frac + val_frac + test > 1 + 1e-12)
        throw InvalidArgument("make_splits: fractions must lie in (0,1) and sum to at most 1");

    std::vector<Index> perm(static_cast<std::size_t>(total));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    auto count = [&](double f) {
        return static_cast<std::size_t>(std::llround(f * static_cast<double>(total)));
    };
    const std::size_t n_train = count(train_frac);
    const std::size_t n_val = count(val_frac);
    const std::size_t n_test =
        test_frac ? std::min(count(*test_frac), perm.size() - n_train - n_val)
                  : perm.size() - n_train - n_val;

    SplitAssignment s;
    auto take = [&](std::size_t from, std::size_t n) {
        std::vector<Index> v(perm.begin() + static_cast<std::ptrdiff_t>(from),
                             perm.begin() + static_cast<std::ptrdiff_t>(from + n));
        std::sort(v.begin(), v.end());
        return v;
    };
    s.train = take(0, n_train);
    s.validation = take(n_train, n_val);
    s.test = take(n_train + n_val, n_test);
    return s;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int j = -7; j <= 0; ++j)
        g.push_back(std::pow(10.0, j));
    return g;
}

AlphaPolicy AlphaPolicy::parse(const std::string &text) {
    if (text == "estimate")
        return {};
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || !(v > 0) || !std::isfinite(v))
        throw InvalidArgument("alpha must be 'estimate' or a positive number, got '" +
                              text + "'");
    return {v};
}

double AlphaPolicy::resolve(const ObservationSet &train) const {
    return value ? *value : estimate_alpha(train);
}

std::string AlphaPolicy::to_string() const {
    if (!value)
        return "estimate";
    std::ostringstream ss;
    ss.precision(std::numeric_limits<double>::max_digits10);
    ss << *value;
    return ss.str();
}

AdmmConfig configure(const AdmmConfig &base, GaugeSpec::Kind kind,
                     const AlphaPolicy &alpha, const ObservationSet &train) {
    AdmmConfig cfg = base;
    cfg.gauge = kind == GaugeSpec::Kind::L1
                    ? GaugeSpec::l1()
                    : GaugeSpec::card_envelope(alpha.resolve(train));
    return cfg;
}

// ---------------------------------------------------------------------------
// Sweep

SweepResult sweep_gamma(const ObservationSet &train, const ObservationSet &validation,
                        const AdmmConfig &cfg, const std::vector<double> &grid) {
    if (grid.empty())
        throw InvalidArgument("sweep_gamma: empty gamma grid");
    if (!(train.shape() == validation.shape()))
        throw InvalidArgument("sweep_gamma: train and validation shapes differ");

    SweepResult result;
    std::optional<Solution> best;
    for (double gamma : grid) {
        AdmmConfig c = cfg;
        c.gamma = gamma;
        Solution sol = solve(train, c);
        SweepRow row{gamma, rmse(sol.W, validation), sol.report.iterations,
                     sol.report.seconds};
        result.rows.push_back(row);
        const SweepRow *incumbent =
            best ? &result.rows[result.best] : nullptr;
        const bool better =
            !incumbent || row.val_rmse < incumbent->val_rmse ||
            (row.val_rmse == incumbent->val_rmse && row.gamma < incumbent->gamma);
        if (better) {
            result.best = result.rows.size() - 1;
            best = std::move(sol);
        }
    }
    result.model = std::move(*best);
    return result;
}

// ---------------------------------------------------------------------------
// Repeated comparison

std::vector<CompareRow> compare_gauges(const CompareConfig &cfg) {
    std::vector<CompareRow> rows;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t seed = cfg.first_seed + static_cast<std::uint64_t>(rep);
        TuckerSpec spec = cfg.tucker;
        spec.seed = seed;
        const TuckerSample sample = generate_tucker(spec);
        const SplitAssignment split =
            make_splits(sample.ground_truth.size(), cfg.train_frac, cfg.val_frac,
                        std::nullopt, seed ^ 0x5eed5eed5eedULL);
        const auto train = ObservationSet::sample(sample.ground_truth, split.train);
        const auto val = ObservationSet::sample(sample.ground_truth, split.validation);

        CompareRow row;
        row.seed = seed;
        const AdmmConfig tr = configure(cfg.admm, GaugeSpec::Kind::L1, cfg.alpha, train);
        const AdmmConfig en =
            configure(cfg.admm, GaugeSpec::Kind::CardEnvelope, cfg.alpha, train);
        row.alpha = en.gauge.alpha;
        const SweepResult st = sweep_gamma(train, val, tr, cfg.gamma_grid);
        const SweepResult se = sweep_gamma(train, val, en, cfg.gamma_grid);

        const auto test = ObservationSet::sample(sample.ground_truth, split.test);
        row.trace_gamma = st.rows[st.best].gamma;
        row.trace_rmse = rmse(st.model.W, test);
        row.envelope_gamma = se.rows[se.best].gamma;
        row.envelope_rmse = rmse(se.model.W, test);
        rows.push_back(row);
    }
    return rows;
}

PairedTTest paired_t_test_less(const std::vector<double> &a,
                               const std::vector<double> &b) {
    if (a.size() != b.size() || a.size() < 2)
        throw InvalidArgument("paired_t_test_less: need two equal-length samples of size >= 2");
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = a[i] - b[i];
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0;
    for (double x : d)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedTTest r;
    r.mean_difference = mean;
    r.dof = static_cast<int>(n - 1);
    if (sd == 0) {
        r.t = mean < 0 ? -std::numeric_limits<double>::infinity()
                       : (mean > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        r.p_value = mean < 0 ? 0.0 : (mean > 0 ? 1.0 : 0.5);
        return r;
    }
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    boost::math::students_t dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(dist, r.t);
    return r;
}

// ---------------------------------------------------------------------------
// Bench

std::vector<Index> bench_ranks(Index p) {
    auto scale = [&](double r) {
        return std::clamp<Index>(std::llround(r * static_cast<double>(p) / 40.0), 1, p);
    };
    return {scale(12), scale(6), scale(3)};
}

std::vector<BenchRow> bench_gauges(const BenchConfig &cfg) {
    std::vector<BenchRow> rows;
    for (Index p : cfg.sizes) {
        for (int s = 0; s < cfg.seeds; ++s) {
            const std::uint64_t seed = cfg.first_seed + static_cast<std::uint64_t>(s);
            TuckerSpec spec;
            spec.shape = Shape{p, p, p};
            spec.core_ranks = bench_ranks(p);
            spec.noise_variance = cfg.noise_variance;
            spec.seed = seed;
            const TuckerSample sample = generate_tucker(spec);
            const SplitAssignment split = make_splits(
                sample.ground_truth.size(), cfg.train_frac,
                std::min(0.45, (1.0 - cfg.train_frac) / 2), std::nullopt, seed);
            const auto train = ObservationSet::sample(sample.ground_truth, split.train);

            for (auto kind : {GaugeSpec::Kind::L1, GaugeSpec::Kind::CardEnvelope}) {
                AdmmConfig c = configure(cfg.admm, kind, cfg.alpha, train);
                c.track_objective = false;
                const Solution sol = solve(train, c);
                rows.push_back({p, seed, kind == GaugeSpec::Kind::L1 ? "trace" : "envelope",
                                sol.report.seconds, sol.report.iterations});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Counterexample certificate

Certificate certify_counterexample(const DenseTensor &W, double rank_tol) {
    Certificate c;
    c.shape = W.shape();
    const double p_min = static_cast<double>(W.shape().min_dim());
    c.frobenius = frobenius_norm(W);
    double max_spec = 0;
    for (int n = 1; n <= W.order(); ++n) {
        c.spectral_norms.push_back(spectral_norm(unfold(W, n)));
        max_spec = std::max(max_spec, c.spectral_norms.back());
    }
    c.rank = tensor_rank(W, rank_tol);
    c.trace_norm = tensor_trace_norm(W);
    c.trace_norm_formula = counterexample_trace_norm(W.shape());
    c.rank_formula = counterexample_rank(W.shape());
    c.envelope_bound = envelope_regularizer_lower_bound(W, std::sqrt(p_min), 1e3);

    const auto [lo, hi] = std::minmax_element(c.rank.ranks.begin(), c.rank.ranks.end());
    c.norm_ok = std::abs(c.frobenius - std::sqrt(p_min)) <= 1e-10;
    c.spectral_ok = max_spec <= 1 + 1e-8;
    c.rank_gap_ok = *lo < *hi;
    // Integer rank total compared exactly: total / N == (p_min N + 1) / N.
    c.formulas_ok = std::abs(c.trace_norm - c.trace_norm_formula) <= 1e-6 &&
                    c.rank.total() == static_cast<int>(p_min) * W.order() + 1;
    c.gap_ok = c.trace_norm < c.rank.value();
    return c;
}

void print_certificate(std::ostream &os, const Certificate &c) {
    auto flag = [](bool ok) { return ok ? "ok" : "FAIL"; };
    os << std::setprecision(10);
    os << "shape                 " << c.shape.to_string() << '\n';
    os << "frobenius norm        " << c.frobenius << "  (sqrt(p_min) = "
       << std::sqrt(static_cast<double>(c.shape.min_dim())) << ") " << flag(c.norm_ok)
       << '\n';
    os << "spectral norms        ";
    for (double s : c.spectral_norms)
        os << s << ' ';
    os << flag(c.spectral_ok) << '\n';
    os << "mode ranks            ";
    for (int r : c.rank.ranks)
        os << r << ' ';
    os << flag(c.rank_gap_ok) << '\n';
    os << "trace norm            " << c.trace_norm << "  (closed form "
       << c.trace_norm_formula << ")\n";
    os << "rank average R(W)     " << c.rank.value() << "  (closed form "
       << c.rank_formula << ") " << flag(c.formulas_ok) << '\n';
    os << "envelope lower bound  " << c.envelope_bound << '\n';
    os << "trace norm < R(W)     " << flag(c.gap_ok) << '\n';
    os << "certificate           " << (c.passed() ? "PASS" : "FAIL") << '\n';
}

void write_report_csv(std::ostream &os, const SolverReport &report) {
    os << "iteration,primal_residual,dual_residual,objective,elapsed_ms\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto &r : report.history)
        os << r.iteration << ',' << r.primal_residual << ',' << r.dual_residual << ','
           << r.objective << ',' << r.elapsed_ms << '\n';
}

} // namespace tenscomp
