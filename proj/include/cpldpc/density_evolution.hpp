#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "cpldpc/degree_dist.hpp"
#include "cpldpc/errors.hpp"

namespace cpldpc {

/// Per-edge erasure probabilities of one density-evolution iteration.
/// x1/y1: X1 bits <-> accumulate nodes, x2/y2: X2 bits <-> accumulate
/// nodes, x3/y3: X2 bits <-> LDPC checks.
struct DEState {
    double x1 = 1.0, x2 = 1.0, x3 = 1.0;
    double y1 = 1.0, y2 = 1.0, y3 = 1.0;

    static DEState all_ones() { return {}; }
};

struct DEConfig {
    DegreeDistribution lambda_g;
    DegreeDistribution rho_g;
    DegreeDistribution lambda_h;
    DegreeDistribution rho_h;
    double delta = 0.0;  // BEC erasure probability
    double p = 0.0;      // puncturing probability of X2
    double tol = 1e-10;
    std::size_t max_iters = 100000;

    // Sensitivity variants, both off by default:
    //  - x1_extrinsic: degree-1 X1 bits send the channel value alone
    //    (standard BP) instead of channel AND incoming. Required for the
    //    exact pure-LDPC degeneration; the default matches the recursion the
    //    fixed-point system is written in.
    //  - rg_edge_perspective: accumulate-to-X1 messages use the
    //    edge-perspective rho_G instead of the node-perspective R_G.
    bool x1_extrinsic = false;
    bool rg_edge_perspective = false;

    double prior() const { return 1.0 - (1.0 - delta) * (1.0 - p); }

    void validate() const {
        if (!(delta >= 0.0 && delta <= 1.0)) throw config_error("DE: delta outside [0, 1]");
        if (!(p >= 0.0 && p <= 1.0)) throw config_error("DE: p outside [0, 1]");
        if (!(tol > 0.0)) throw config_error("DE: tolerance must be positive");
    }
};

namespace detail {

/// Precomputed generating polynomials for one configuration.
struct DeOps {
    explicit DeOps(const DEConfig& cfg)
        : cfg(&cfg),
          L_G(cfg.lambda_g.node_perspective()),
          R_G(cfg.rho_g.node_perspective()),
          L_H(cfg.lambda_h.node_perspective()),
          prior(cfg.prior()) {}

    const DEConfig* cfg;
    DegreeDistribution L_G, R_G, L_H;
    double prior;

    static double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

    DEState step(const DEState& s) const {
        DEState n;
        n.y1 = 1.0 - (cfg->rg_edge_perspective ? cfg->rho_g.eval(1.0 - s.x2)
                                               : R_G.eval(1.0 - s.x2));
        n.y2 = 1.0 - (1.0 - s.x1) * cfg->rho_g.eval(1.0 - s.x2);
        n.y3 = 1.0 - cfg->rho_h.eval(1.0 - s.x3);
        n.x1 = cfg->x1_extrinsic ? cfg->delta : cfg->delta * n.y1;
        n.x2 = clamp01(prior * cfg->lambda_g.eval(n.y2) * L_H.eval(n.y3));
        n.x3 = clamp01(prior * L_G.eval(n.y2) * cfg->lambda_h.eval(n.y3));
        return n;
    }

    /// x1 at its slaved fixed-point value for a given x2.
    double x1_of(double x2) const {
        if (cfg->x1_extrinsic) return cfg->delta;
        const double y1 = 1.0 - (cfg->rg_edge_perspective ? cfg->rho_g.eval(1.0 - x2)
                                                          : R_G.eval(1.0 - x2));
        return cfg->delta * y1;
    }

    /// The two-equation fixed-point maps in (x2, x3).
    double psi_a(double x2, double x3) const {
        const double u = 1.0 - (1.0 - x1_of(x2)) * cfg->rho_g.eval(1.0 - x2);
        const double v = 1.0 - cfg->rho_h.eval(1.0 - x3);
        return prior * cfg->lambda_g.eval(u) * L_H.eval(v);
    }
    double psi_b(double x2, double x3) const {
        const double u = 1.0 - (1.0 - x1_of(x2)) * cfg->rho_g.eval(1.0 - x2);
        const double v = 1.0 - cfg->rho_h.eval(1.0 - x3);
        return prior * L_G.eval(u) * cfg->lambda_h.eval(v);
    }
};

}  // namespace detail

/// One synchronous iteration: the y messages from the previous x values,
/// then the x messages from the fresh y values.
inline DEState de_step(const DEConfig& cfg, const DEState& s) {
    cfg.validate();
    return detail::DeOps(cfg).step(s);
}

/// Max-norm residual of the converged two-equation fixed-point system at
/// (state.x2, state.x3).
inline double fixed_point_residual(const DEConfig& cfg, const DEState& state) {
    const detail::DeOps ops(cfg);
    return std::max(std::abs(state.x2 - ops.psi_a(state.x2, state.x3)),
                    std::abs(state.x3 - ops.psi_b(state.x2, state.x3)));
}

struct FixedPointResult {
    DEState state;
    std::size_t iterations = 0;
    bool converged = false;
    bool monotone = true;  // trajectory was coordinate-wise nonincreasing
};

inline FixedPointResult run_to_fixed_point(const DEConfig& cfg,
                                           const DEState& init = DEState::all_ones()) {
    cfg.validate();
    const detail::DeOps ops(cfg);
    FixedPointResult r;
    r.state = init;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const DEState next = ops.step(r.state);
        const double change = std::max(
            {std::abs(next.x1 - r.state.x1), std::abs(next.x2 - r.state.x2),
             std::abs(next.x3 - r.state.x3), std::abs(next.y1 - r.state.y1),
             std::abs(next.y2 - r.state.y2), std::abs(next.y3 - r.state.y3)});
        if (next.x1 > r.state.x1 + 1e-12 || next.x2 > r.state.x2 + 1e-12 ||
            next.x3 > r.state.x3 + 1e-12)
            r.monotone = false;
        r.state = next;
        r.iterations = it + 1;
        if (change < cfg.tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

/// Per-iteration trajectory (index 0 = init), at most max_rows entries past
/// the initial state; stops early at the fixed point.
inline std::vector<DEState> de_trajectory(const DEConfig& cfg, std::size_t max_rows,
                                          const DEState& init = DEState::all_ones()) {
    cfg.validate();
    const detail::DeOps ops(cfg);
    std::vector<DEState> traj{init};
    for (std::size_t it = 0; it < max_rows; ++it) {
        const DEState next = ops.step(traj.back());
        const double change =
            std::max({std::abs(next.x1 - traj.back().x1), std::abs(next.x2 - traj.back().x2),
                      std::abs(next.x3 - traj.back().x3)});
        traj.push_back(next);
        if (change < cfg.tol) break;
    }
    return traj;
}

struct ThresholdResult {
    double delta_star = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

/// True when DE from all-ones drives x2 and x3 below `target`.
inline bool de_clears(DEConfig cfg, double delta, double target) {
    cfg.delta = delta;
    cfg.validate();
    const DeOps ops(cfg);
    DEState s = DEState::all_ones();
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const DEState next = ops.step(s);
        if (next.x2 < target && next.x3 < target) return true;
        const double change = std::max({std::abs(next.x1 - s.x1), std::abs(next.x2 - s.x2),
                                        std::abs(next.x3 - s.x3)});
        s = next;
        if (change < cfg.tol) break;  // stalled above target
    }
    return false;
}

}  // namespace detail

/// Bisection for the largest delta whose DE from all-ones reaches
/// x2, x3 < clear_target. `jobs` > 1 evaluates that many interior candidates
/// per refinement round concurrently (deterministic either way). The
/// success/failure records are checked for bracket consistency afterwards.
inline ThresholdResult threshold_search(const DEConfig& cfg, double precision = 1e-6,
                                        double clear_target = 1e-8, unsigned jobs = 1) {
    cfg.validate();
    ThresholdResult res;
    std::vector<std::pair<double, bool>> evals;
    auto probe = [&](double d) {
        const bool ok = detail::de_clears(cfg, d, clear_target);
        evals.emplace_back(d, ok);
        ++res.evaluations;
        return ok;
    };
    if (!probe(0.0)) {
        res.delta_star = 0.0;
        return res;
    }
    if (probe(1.0)) {
        res.delta_star = 1.0;
        return res;
    }
    double lo = 0.0, hi = 1.0;
    const unsigned fanout = std::max(1u, jobs);
    while (hi - lo > precision) {
        std::vector<double> mids(fanout);
        for (unsigned k = 0; k < fanout; ++k)
            mids[k] = lo + (hi - lo) * static_cast<double>(k + 1) /
                               static_cast<double>(fanout + 1);
        std::vector<char> ok(fanout);
        if (fanout == 1) {
            ok[0] = detail::de_clears(cfg, mids[0], clear_target);
        } else {
            std::vector<std::future<bool>> futs;
            futs.reserve(fanout);
            for (unsigned k = 0; k < fanout; ++k)
                futs.push_back(std::async(std::launch::async, [&, k] {
                    return detail::de_clears(cfg, mids[k], clear_target);
                }));
            for (unsigned k = 0; k < fanout; ++k) ok[k] = futs[k].get();
        }
        for (unsigned k = 0; k < fanout; ++k) {
            evals.emplace_back(mids[k], ok[k] != 0);
            ++res.evaluations;
        }
        double new_lo = lo, new_hi = hi;
        for (unsigned k = 0; k < fanout; ++k)
            if (ok[k])
                new_lo = std::max(new_lo, mids[k]);
            else
                new_hi = std::min(new_hi, mids[k]);
        lo = new_lo;
        hi = new_hi;
    }
    // Empirical monotonicity: every success must sit below every failure.
    double max_ok = 0.0, min_fail = 1.0;
    for (const auto& [d, ok] : evals) {
        if (ok)
            max_ok = std::max(max_ok, d);
        else
            min_fail = std::min(min_fail, d);
    }
    if (max_ok > min_fail)
        throw numerical_error("threshold_search: non-monotone bracket (success at " +
                              std::to_string(max_ok) + " above failure at " +
                              std::to_string(min_fail) + ")");
    res.delta_star = lo;
    return res;
}

struct StabilityResult {
    double value = 0.0;
    bool stable = true;
};

/// Closed-form stability condition at the zero fixed point:
/// (1-(1-delta)(1-p))^2 lambda_G(0) L_G'(0) rho_H'(1) lambda_H(0) L_H'(0)
/// [delta L_G'(1) + rho_G'(1)] < 1.
inline StabilityResult stability_closed_form(const DEConfig& cfg) {
    cfg.validate();
    const DegreeDistribution L_G = cfg.lambda_g.node_perspective();
    const DegreeDistribution L_H = cfg.lambda_h.node_perspective();
    const double pi = cfg.prior();
    const double value = pi * pi * cfg.lambda_g.eval(0.0) * L_G.derivative_at(0.0) *
                         cfg.rho_h.derivative_at(1.0) * cfg.lambda_h.eval(0.0) *
                         L_H.derivative_at(0.0) *
                         (cfg.delta * L_G.derivative_at(1.0) + cfg.rho_g.derivative_at(1.0));
    return {value, value < 1.0};
}

/// Same expression with the prior factor at its capacity-approaching limit
/// (p -> 1 under the schedule, so the squared prior is 1).
inline StabilityResult capacity_limit_stability(const DEConfig& cfg) {
    cfg.validate();
    const DegreeDistribution L_G = cfg.lambda_g.node_perspective();
    const DegreeDistribution L_H = cfg.lambda_h.node_perspective();
    const double value = cfg.lambda_g.eval(0.0) * L_G.derivative_at(0.0) *
                         cfg.rho_h.derivative_at(1.0) * cfg.lambda_h.eval(0.0) *
                         L_H.derivative_at(0.0) *
                         (cfg.delta * L_G.derivative_at(1.0) + cfg.rho_g.derivative_at(1.0));
    return {value, value < 1.0};
}

/// Numerical linearization criterion
///   dpsiA/dx2 + dpsiA/dx3 * (dpsiB/dx2) / (1 - dpsiB/dx3)
/// at (x2, x3), with one-sided Richardson differences at 0 coordinates and
/// central differences elsewhere.
inline StabilityResult stability_jacobian(const DEConfig& cfg, double at_x2 = 0.0,
                                          double at_x3 = 0.0) {
    cfg.validate();
    const detail::DeOps ops(cfg);
    auto d_coord = [&](auto&& f, double x, double other, bool x_is_first) {
        auto eval = [&](double v) { return x_is_first ? f(v, other) : f(other, v); };
        if (x == 0.0) {
            const double h1 = 1e-6, h2 = 5e-7;
            const double f0 = eval(0.0);
            const double d1 = (eval(h1) - f0) / h1;
            const double d2 = (eval(h2) - f0) / h2;
            return 2.0 * d2 - d1;  // one-sided Richardson
        }
        const double h = 1e-7;
        return (eval(std::min(1.0, x + h)) - eval(std::max(0.0, x - h))) /
               (std::min(1.0, x + h) - std::max(0.0, x - h));
    };
    auto fa = [&](double a, double b) { return ops.psi_a(a, b); };
    auto fb = [&](double a, double b) { return ops.psi_b(a, b); };
    const double pA2 = d_coord(fa, at_x2, at_x3, true);
    const double pA3 = d_coord(fa, at_x3, at_x2, false);
    const double pB2 = d_coord(fb, at_x2, at_x3, true);
    const double pB3 = d_coord(fb, at_x3, at_x2, false);
    const double denom = 1.0 - pB3;
    if (std::abs(denom) < 1e-12)
        throw numerical_error("stability_jacobian: degenerate linearization (1 - dpsiB/dx3 = 0)");
    const double value = pA2 + pA3 * pB2 / denom;
    return {value, value < 1.0};
}

}  // namespace cpldpc
