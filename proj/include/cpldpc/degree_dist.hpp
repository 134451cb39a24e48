#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cpldpc/errors.hpp"

namespace cpldpc {

/// Edge-perspective degree distribution: coefficient for degree i is the
/// fraction of edges attached to degree-i nodes, and the generating
/// polynomial is sum_i c_i x^(i-1).
///
/// Also used for node-perspective generating polynomials L(x), R(x): the
/// object returned by node_perspective() has polynomial equal to the
/// normalized integral of the input, so eval/derivative_at compose directly
/// into the density-evolution and stability formulas. Its degree labels are
/// shifted up by one relative to the node degrees.
class DegreeDistribution {
  public:
    static constexpr int kDefaultMaxDegree = 100;
    static constexpr double kRenormalizeTol = 1e-9;

    /// coeffs[0] is the degree-1 weight. Weights must be nonnegative and sum
    /// to 1; sums within 1e-9 of 1 are renormalized, anything further off is
    /// rejected.
    explicit DegreeDistribution(std::vector<double> coeffs, int max_degree = kDefaultMaxDegree)
        : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw config_error("degree distribution: no coefficients");
        if (static_cast<int>(coeffs_.size()) > max_degree)
            throw config_error("degree distribution: degree " + std::to_string(coeffs_.size()) +
                               " exceeds max degree " + std::to_string(max_degree));
        double sum = 0.0;
        for (double c : coeffs_) {
            if (!(c >= 0.0)) throw config_error("degree distribution: negative weight");
            sum += c;
        }
        if (sum <= 0.0) throw config_error("degree distribution: all weights zero");
        if (std::abs(sum - 1.0) > kRenormalizeTol)
            throw config_error("degree distribution: weights sum to " + std::to_string(sum) +
                               ", not 1");
        for (double& c : coeffs_) c /= sum;
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    static DegreeDistribution regular(int degree, int max_degree = kDefaultMaxDegree) {
        if (degree < 1) throw config_error("degree distribution: degree must be >= 1");
        std::vector<double> c(static_cast<std::size_t>(degree), 0.0);
        c.back() = 1.0;
        return DegreeDistribution(std::move(c), max_degree);
    }

    static DegreeDistribution from_map(const std::map<int, double>& degree_to_weight,
                                       int max_degree = kDefaultMaxDegree) {
        if (degree_to_weight.empty()) throw config_error("degree distribution: empty map");
        const int top = degree_to_weight.rbegin()->first;
        if (degree_to_weight.begin()->first < 1)
            throw config_error("degree distribution: degrees start at 1");
        if (top > max_degree)
            throw config_error("degree distribution: degree " + std::to_string(top) +
                               " exceeds max degree " + std::to_string(max_degree));
        std::vector<double> c(static_cast<std::size_t>(top), 0.0);
        for (const auto& [d, w] : degree_to_weight) c[static_cast<std::size_t>(d - 1)] = w;
        return DegreeDistribution(std::move(c), max_degree);
    }

    /// sum_i c_i x^(i-1) for x in [0, 1].
    double eval(double x) const {
        check_domain(x);
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    /// sum_i c_i (i-1) x^(i-2); the degree-1 term contributes nothing.
    double derivative_at(double x) const {
        check_domain(x);
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 1;)
            acc = acc * x + coeffs_[i] * static_cast<double>(i);
        return acc;
    }

    /// Distribution whose polynomial is int_0^x poly / int_0^1 poly.
    DegreeDistribution node_perspective() const {
        std::vector<double> out(coeffs_.size() + 1, 0.0);
        double norm = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            out[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
            norm += out[i + 1];
        }
        for (double& c : out) c /= norm;
        return DegreeDistribution(std::move(out), static_cast<int>(coeffs_.size()) + 1);
    }

    /// Node-average degree, 1 / sum_i (c_i / i); exact for regular
    /// distributions (1/(1/k) is off by an ulp for some k).
    double average_degree() const {
        std::size_t nonzero = 0, last = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0.0) {
                ++nonzero;
                last = i;
            }
        if (nonzero == 1) return static_cast<double>(last + 1);
        double s = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            s += coeffs_[i] / static_cast<double>(i + 1);
        return 1.0 / s;
    }

    /// Fraction of nodes having each degree (index 0 = degree 1).
    std::vector<double> node_fractions() const {
        std::vector<double> f(coeffs_.size(), 0.0);
        double norm = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            f[i] = coeffs_[i] / static_cast<double>(i + 1);
            norm += f[i];
        }
        for (double& v : f) v /= norm;
        return f;
    }

    int max_degree() const { return static_cast<int>(coeffs_.size()); }

    int min_degree() const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] > 0.0) return static_cast<int>(i) + 1;
        return max_degree();
    }

    double coefficient(int degree) const {
        if (degree < 1 || degree > max_degree()) return 0.0;
        return coeffs_[static_cast<std::size_t>(degree - 1)];
    }

    const std::vector<double>& coefficients() const { return coeffs_; }

    bool operator==(const DegreeDistribution& o) const { return coeffs_ == o.coeffs_; }

  private:
    static void check_domain(double x) {
        if (!(x >= 0.0 && x <= 1.0))
            throw config_error("degree distribution: argument " + std::to_string(x) +
                               " outside [0, 1]");
    }

    std::vector<double> coeffs_;
};

/// 1 - int(rho) / int(lambda).
inline double design_rate(const DegreeDistribution& lambda, const DegreeDistribution& rho) {
    const double rate = 1.0 - lambda.average_degree() / rho.average_degree();
    if (rate < 0.0) throw config_error("design rate is negative: more checks than variables");
    return rate;
}

}  // namespace cpldpc
