#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cpldpc/channel.hpp"
#include "cpldpc/decoder.hpp"
#include "cpldpc/density_evolution.hpp"
#include "cpldpc/ensemble.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/rng.hpp"

namespace cpldpc {

/// All floating-point output carries 17 significant digits.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum class CodewordMode { zero, uniform };

struct SweepSpec {
    EnsembleParams ensemble;
    std::vector<double> delta_grid;
    std::vector<double> p_grid;
    int trials = 10;
    std::size_t max_decoder_iters = 200;
    std::uint64_t base_seed = 1;
    bool quenched = false;  // one fixed graph per grid point instead of one per trial
    CodewordMode codewords = CodewordMode::zero;
    unsigned jobs = 1;

    void validate() const {
        ensemble.validate();
        if (delta_grid.empty() || p_grid.empty()) throw config_error("sweep: empty grid");
        if (trials < 1) throw config_error("sweep: trials must be >= 1");
        for (double d : delta_grid)
            if (!(d >= 0.0 && d <= 1.0)) throw config_error("sweep: delta outside [0, 1]");
        for (double p : p_grid)
            if (!(p >= 0.0 && p <= 1.0)) throw config_error("sweep: p outside [0, 1]");
    }
};

struct SweepRow {
    double delta = 0.0;
    double p = 0.0;
    std::size_t n = 0;
    int trials = 0;
    double ber_x1_mean = 0.0, ber_x1_se = 0.0;
    double ber_x2_mean = 0.0, ber_x2_se = 0.0;
    double avg_iters = 0.0;
    std::string error;  // set when a trial aborted the point
};

namespace detail {

struct TrialStats {
    double x1 = 0.0, x2 = 0.0, iters = 0.0;
};

inline TrialStats run_trial(const EnsembleParams& base, double delta, double p,
                            std::size_t max_iters, CodewordMode mode, std::uint64_t seed,
                            const LdgmLdpcGraph* fixed_graph) {
    Rng rng(seed);
    EnsembleParams params = base;
    params.puncture_p = p;
    LdgmLdpcGraph sampled;
    const LdgmLdpcGraph* graph = fixed_graph;
    if (graph == nullptr) {
        sampled = sample_graph(params, rng);
        graph = &sampled;
    }
    BitVec codeword(graph->n());
    if (mode == CodewordMode::uniform) codeword = sample_codeword(*graph, rng);
    const PuncturePattern pattern = sample_puncture_pattern(params, rng);
    const std::vector<double> received = transmit(ChannelModel::bec(delta), codeword, pattern, rng);
    const DecodeResult result = decode(*graph, received, max_iters);
    for (std::size_t i = 0; i < graph->n(); ++i)
        if (result.known_mask.get(i) && result.resolved.get(i) != codeword.get(i))
            throw integrity_error("trial: resolved bit differs from transmitted bit");
    TrialStats t;
    t.x1 = bit_erasure_rate(result, Block::X1);
    t.x2 = bit_erasure_rate(result, Block::X2);
    t.iters = static_cast<double>(result.iterations);
    return t;
}

inline void mean_se(const std::vector<double>& xs, double& mean, double& se) {
    const double n = static_cast<double>(xs.size());
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) {
        se = 0.0;
        return;
    }
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    se = std::sqrt(var / n);
}

}  // namespace detail

/// Monte-Carlo sweep over the (delta, p) grid. Per-trial seeds are derived
/// from (base_seed, point index, trial index), so the jobs count cannot
/// change any output; rows come back in grid order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    struct Point {
        double delta, p;
        std::size_t index;
    };
    std::vector<Point> points;
    for (double d : spec.delta_grid)
        for (double p : spec.p_grid) points.push_back({d, p, points.size()});

    std::vector<SweepRow> rows(points.size());
    const unsigned jobs = std::max(1u, spec.jobs);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= points.size()) return;
            const Point& pt = points[k];
            SweepRow row;
            row.delta = pt.delta;
            row.p = pt.p;
            row.n = spec.ensemble.n();
            row.trials = spec.trials;
            try {
                LdgmLdpcGraph quenched_graph;
                const LdgmLdpcGraph* fixed = nullptr;
                if (spec.quenched) {
                    Rng grng(derive_seed(spec.base_seed, pt.index, 0));
                    EnsembleParams params = spec.ensemble;
                    params.puncture_p = pt.p;
                    quenched_graph = sample_graph(params, grng);
                    fixed = &quenched_graph;
                }
                std::vector<double> x1s, x2s, iters;
                for (int t = 0; t < spec.trials; ++t) {
                    const auto stats = detail::run_trial(
                        spec.ensemble, pt.delta, pt.p, spec.max_decoder_iters, spec.codewords,
                        derive_seed(spec.base_seed, pt.index, static_cast<std::uint64_t>(t) + 1),
                        fixed);
                    x1s.push_back(stats.x1);
                    x2s.push_back(stats.x2);
                    iters.push_back(stats.iters);
                }
                detail::mean_se(x1s, row.ber_x1_mean, row.ber_x1_se);
                detail::mean_se(x2s, row.ber_x2_mean, row.ber_x2_se);
                double dummy;
                detail::mean_se(iters, row.avg_iters, dummy);
            } catch (const std::exception& e) {
                row.error = e.what();
                row.ber_x1_mean = row.ber_x1_se = std::nan("");
                row.ber_x2_mean = row.ber_x2_se = std::nan("");
                row.avg_iters = std::nan("");
            }
            rows[pt.index] = std::move(row);
        }
    };
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "delta,p,n,trials,ber_x1_mean,ber_x1_se,ber_x2_mean,ber_x2_se,avg_iters\n";
    for (const SweepRow& r : rows) {
        os << g17(r.delta) << ',' << g17(r.p) << ',' << r.n << ',' << r.trials << ','
           << g17(r.ber_x1_mean) << ',' << g17(r.ber_x1_se) << ',' << g17(r.ber_x2_mean) << ','
           << g17(r.ber_x2_se) << ',' << g17(r.avg_iters) << '\n';
    }
    return os.str();
}

struct CompareSpec {
    EnsembleParams ensemble;
    double delta = 0.0;
    double p = 0.0;
    std::size_t iterations = 30;
    int trials = 1;
    std::uint64_t base_seed = 1;
    double tolerance = 0.02;
};

struct CompareRow {
    std::size_t iter = 0;   // decoder round
    double de_x2 = 0.0;     // DE prediction for that round
    double mc_x2 = 0.0;     // empirical X2-edge erasure fraction, trial mean
    double mc_se = 0.0;
    double gap = 0.0;
    bool pass = true;
};

/// DE-vs-Monte-Carlo concentration table over the BEC. Alignment: from the
/// all-ones initialization, DE iterate l+1 equals the decoder's round-l
/// message statistics (iterate 1 is the channel prior), so row l pairs DE
/// iterate l+1 with the decoder trace after round l.
inline std::vector<CompareRow> compare_de_mc(const CompareSpec& spec) {
    spec.ensemble.validate();
    if (spec.trials < 1) throw config_error("compare: trials must be >= 1");

    DEConfig cfg{spec.ensemble.lambda_g, spec.ensemble.rho_g, spec.ensemble.lambda_h,
                 spec.ensemble.rho_h};
    cfg.delta = spec.delta;
    cfg.p = spec.p;
    std::vector<DEState> traj = de_trajectory(cfg, spec.iterations + 1);
    while (traj.size() < spec.iterations + 2) traj.push_back(traj.back());

    std::vector<std::vector<double>> traces;
    for (int t = 0; t < spec.trials; ++t) {
        Rng rng(derive_seed(spec.base_seed, 0, static_cast<std::uint64_t>(t) + 1));
        EnsembleParams params = spec.ensemble;
        params.puncture_p = spec.p;
        const LdgmLdpcGraph graph = sample_graph(params, rng);
        const BitVec codeword(graph.n());
        const PuncturePattern pattern = sample_puncture_pattern(params, rng);
        const std::vector<double> received =
            transmit(ChannelModel::bec(spec.delta), codeword, pattern, rng);
        std::vector<double> trace;
        decode_traced(graph, received, spec.iterations, trace);
        traces.push_back(std::move(trace));
    }

    std::vector<CompareRow> rows;
    for (std::size_t l = 0; l <= spec.iterations; ++l) {
        std::vector<double> vals;
        for (const auto& tr : traces) vals.push_back(tr[l]);
        CompareRow row;
        row.iter = l;
        row.de_x2 = traj[l + 1].x2;
        detail::mean_se(vals, row.mc_x2, row.mc_se);
        row.gap = std::abs(row.de_x2 - row.mc_x2);
        row.pass = row.gap <= spec.tolerance;
        rows.push_back(row);
    }
    return rows;
}

inline std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "iter,de_x2,mc_x2,mc_se,gap,pass\n";
    for (const CompareRow& r : rows)
        os << r.iter << ',' << g17(r.de_x2) << ',' << g17(r.mc_x2) << ',' << g17(r.mc_se) << ','
           << g17(r.gap) << ',' << (r.pass ? 1 : 0) << '\n';
    return os.str();
}

/// Per-iteration DE trace in the CLI trace format.
inline std::string de_trace_csv(const std::vector<DEState>& traj) {
    std::ostringstream os;
    os << "l,x1,x2,x3,y1,y2,y3\n";
    for (std::size_t l = 0; l < traj.size(); ++l) {
        const DEState& s = traj[l];
        os << l << ',' << g17(s.x1) << ',' << g17(s.x2) << ',' << g17(s.x3) << ',' << g17(s.y1)
           << ',' << g17(s.y2) << ',' << g17(s.y3) << '\n';
    }
    return os.str();
}

}  // namespace cpldpc
