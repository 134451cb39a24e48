#pragma once

#include <cmath>
#include <string>

#include "cpldpc/channel.hpp"
#include "cpldpc/errors.hpp"

namespace cpldpc {

/// How the 1/(2 log 2) constant of the rate/entropy bounds is read.
/// `natural_log` (default) takes log 2 = ln 2 with entropies in bits;
/// `log_base_two` reads every log as log2, making the constant 1/2.
enum class BoundLogConvention { natural_log, log_base_two };

inline double bound_log_constant(BoundLogConvention conv) {
    return conv == BoundLogConvention::natural_log ? 1.0 / (2.0 * std::log(2.0)) : 0.5;
}

/// Inputs of the information-theoretic bounds: block fractions, channel
/// capacity, puncturing, the lower-LDPC design rate, average check degrees
/// and the order-1 channel moments of the two bit classes.
struct BoundInputs {
    double p1 = 0.5;       // n1 / n
    double p2 = 0.5;       // n2 / n
    double C = 1.0;        // channel capacity, bits/use
    double p = 0.0;        // puncturing probability of class 2
    double R_H = 0.0;      // design rate of the lower LDPC code
    double a_L = 2.0;      // average accumulate-node degree (X2 side)
    double a_R = 2.0;      // average LDPC check degree
    double g11 = 1.0;      // order-1 moment, unpunctured class
    double g21 = 1.0;      // order-1 moment, punctured class
    double epsilon = 0.1;  // multiplicative capacity gap
    double kappa = 1.0;    // schedule constant in p = 1 - kappa epsilon

    void validate() const {
        if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0) ||
            std::abs(p1 + p2 - 1.0) > 1e-12)
            throw config_error("bounds: p1 + p2 must equal 1");
        if (!(C >= 0.0 && C <= 1.0)) throw config_error("bounds: capacity outside [0, 1]");
        if (!(p >= 0.0 && p <= 1.0)) throw config_error("bounds: p outside [0, 1]");
        if (!(R_H >= 0.0 && R_H < 1.0)) throw config_error("bounds: R_H outside [0, 1)");
        if (!(a_L >= 1.0 && a_R >= 1.0)) throw config_error("bounds: average degrees must be >= 1");
        if (!(g11 >= 0.0 && g11 <= 1.0 && g21 >= 0.0 && g21 <= 1.0))
            throw config_error("bounds: g moments outside [0, 1]");
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw config_error("bounds: epsilon outside (0, 1]");
    }
};

/// C-bar = (1 - p2 p) C, the capacity seen once a p2-fraction of bits is
/// punctured with probability p.
inline double effective_capacity(double C, double p2, double p) {
    if (!(C >= 0.0 && C <= 1.0 && p2 >= 0.0 && p2 <= 1.0 && p >= 0.0 && p <= 1.0))
        throw config_error("effective_capacity: arguments outside [0, 1]");
    return (1.0 - p2 * p) * C;
}

/// p = 1 - kappa epsilon.
inline double puncture_schedule(double epsilon, double kappa) {
    if (!(kappa * epsilon <= 1.0) || !(kappa >= 0.0) || !(epsilon >= 0.0))
        throw config_error("puncture_schedule: kappa * epsilon must lie in [0, 1]");
    return 1.0 - kappa * epsilon;
}

/// Design-rate upper bound:
///   R_d <= 1 - [1 - (p1 + (1-p) p2) C] /
///              [1 - c0 (g11 p1 + (1-R_H) p2) / (p1 + (1-R_H) p2)
///                   * g21^((g11 p1 a_L + (1-R_H) p2 a_R) / (g11 p1 + (1-R_H) p2))]
/// with c0 = 1/(2 log 2). The exponent's weights use g11 p1 where the
/// prefactor uses p1, exactly as printed.
inline double rate_upper_bound(const BoundInputs& b,
                               BoundLogConvention conv = BoundLogConvention::natural_log) {
    b.validate();
    const double c0 = bound_log_constant(conv);
    const double numer = 1.0 - (b.p1 + (1.0 - b.p) * b.p2) * b.C;
    const double w = (1.0 - b.R_H) * b.p2;
    const double exp_weight = b.g11 * b.p1 + w;
    const double prefactor = exp_weight / (b.p1 + w);
    double g_term = 0.0;
    if (exp_weight > 0.0) {
        const double exponent = (b.g11 * b.p1 * b.a_L + w * b.a_R) / exp_weight;
        g_term = b.g21 == 0.0 ? 0.0 : std::pow(b.g21, exponent);
    }
    const double denom = 1.0 - c0 * prefactor * g_term;
    if (!(denom > 0.0))
        throw numerical_error("rate_upper_bound: nonpositive denominator (" +
                              std::to_string(denom) + ")");
    return 1.0 - numer / denom;
}

/// Lower bound on the weighted degree average
///   (p1 g11 a_L + (1-R_H) p2 a_R) / (p1 g11 + (1-R_H) p2)
/// at design rate (1-epsilon) C-bar. Can be vacuous (<= 1 or negative);
/// returned as-is.
inline double complexity_lower_bound(const BoundInputs& b,
                                     BoundLogConvention conv = BoundLogConvention::natural_log) {
    b.validate();
    if (b.g21 <= 0.0 || b.g21 >= 1.0)
        throw numerical_error("complexity_lower_bound: degenerate for g21 = " +
                              std::to_string(b.g21));
    const double c_bar = effective_capacity(b.C, b.p2, b.p);
    if (!(c_bar > 0.0))
        throw numerical_error("complexity_lower_bound: effective capacity is zero");
    const double c0 = bound_log_constant(conv);
    const double w = (1.0 - b.R_H) * b.p2;
    const double frac = (b.p1 * b.g11 + w) / (b.p1 + w);
    const double arg = c0 * frac * (1.0 - (1.0 - b.epsilon) * c_bar) / (b.epsilon * c_bar);
    return std::log(arg) / std::log(1.0 / b.g21);
}

/// Truncated conditional-entropy lower bound specialized to the two-class
/// compound code: the per-check sum of order k is the Jensen form
///   p1 g_{1,k} g_{2,k}^{a_L} + (1-R_H) p2 g_{2,k}^{a_R},
/// weighted by 1/(k(2k-1)) up to P_max. d1/d2 are the class LLR densities
/// (class 2 already punctured). Monotone nondecreasing in P_max.
inline double prop1_entropy_bound(const BoundInputs& b, const LlrDensity& d1,
                                  const LlrDensity& d2, int p_max,
                                  BoundLogConvention conv = BoundLogConvention::natural_log) {
    b.validate();
    if (p_max < 1) throw config_error("prop1_entropy_bound: P_max must be >= 1");
    const double w = (1.0 - b.R_H) * b.p2;
    const double one_minus_rd = b.p1 + w;
    double series = 0.0;
    for (int k = 1; k <= p_max; ++k) {
        const double g1k = g_functional(d1, k);
        const double g2k = g_functional(d2, k);
        const double inner =
            b.p1 * g1k * std::pow(g2k, b.a_L) + w * std::pow(g2k, b.a_R);
        series += inner / (static_cast<double>(k) * (2.0 * static_cast<double>(k) - 1.0));
    }
    const double c0 = bound_log_constant(conv);
    const double class_capacity = (b.p1 + (1.0 - b.p) * b.p2) * b.C;
    return 1.0 - class_capacity - one_minus_rd + c0 * series;
}

}  // namespace cpldpc
