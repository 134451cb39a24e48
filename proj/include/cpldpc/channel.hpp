#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cpldpc/ensemble.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/gf2.hpp"
#include "cpldpc/numerics.hpp"
#include "cpldpc/rng.hpp"

namespace cpldpc {

inline constexpr double kLlrInfinity = std::numeric_limits<double>::infinity();

/// Binary-input symmetric-output memoryless channels.
struct ChannelModel {
    enum class Kind { BEC, BSC, BIAWGN };

    Kind kind;
    double param;  // erasure delta / crossover q / noise sigma

    static ChannelModel bec(double delta) {
        if (!(delta >= 0.0 && delta <= 1.0)) throw config_error("BEC: delta outside [0, 1]");
        return {Kind::BEC, delta};
    }
    static ChannelModel bsc(double q) {
        if (!(q >= 0.0 && q <= 0.5))
            throw config_error("BSC: crossover outside canonical [0, 0.5]");
        return {Kind::BSC, q};
    }
    static ChannelModel biawgn(double sigma) {
        if (!(sigma > 0.0)) throw config_error("BIAWGN: sigma must be positive");
        return {Kind::BIAWGN, sigma};
    }

    std::string name() const {
        switch (kind) {
            case Kind::BEC: return "bec";
            case Kind::BSC: return "bsc";
            default: return "biawgn";
        }
    }
};

/// LLR density conditioned on input 0: point atoms plus a quadrature grid
/// for the continuous part. Grid entries store (location, node weight x
/// density), covering both signs of l; the +inf atom is an exact sentinel,
/// never a large float.
class LlrDensity {
  public:
    struct Atom {
        double loc;
        double mass;
    };

    LlrDensity(std::vector<Atom> atoms, std::vector<Atom> grid)
        : atoms_(std::move(atoms)), grid_(std::move(grid)) {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
        merge_duplicate_atoms();
        validate();
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Atom>& grid() const { return grid_; }

    double total_mass() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.mass;
        for (const Atom& g : grid_) m += g.mass;
        return m;
    }

    double atom_mass_at(double loc) const {
        for (const Atom& a : atoms_)
            if (a.loc == loc) return a.mass;
        return 0.0;
    }

    /// Mean of the density (inf atoms excluded; meaningful for continuous
    /// densities and moment checks).
    double mean() const {
        double m = 0.0;
        for (const Atom& a : atoms_)
            if (std::isfinite(a.loc)) m += a.loc * a.mass;
        for (const Atom& g : grid_) m += g.loc * g.mass;
        return m;
    }

    double variance() const {
        const double mu = mean();
        double v = 0.0;
        for (const Atom& a : atoms_)
            if (std::isfinite(a.loc)) v += (a.loc - mu) * (a.loc - mu) * a.mass;
        for (const Atom& g : grid_) v += (g.loc - mu) * (g.loc - mu) * g.mass;
        return v;
    }

    /// a(-l) = a(l) e^{-l}, checked pairwise on atoms and on the mirrored
    /// grid within 1e-6. Mass must total 1 within 1e-9.
    void validate() const {
        const double mass = total_mass();
        if (std::abs(mass - 1.0) > 1e-9)
            throw numerical_error("llr density: total mass " + std::to_string(mass) + " != 1");
        for (const Atom& a : atoms_) {
            if (a.mass < -1e-15) throw numerical_error("llr density: negative atom mass");
            if (!std::isfinite(a.loc)) continue;
            if (a.loc == 0.0) continue;
            const double pos = std::abs(a.loc);
            const double mp = atom_mass_at(pos);
            const double mn = atom_mass_at(-pos);
            if (std::abs(mn - mp * std::exp(-pos)) > 1e-6 * std::max(1.0, mp))
                throw numerical_error("llr density: atom symmetry violated at l=" +
                                      std::to_string(pos));
        }
        // Grid entries are produced in +/- pairs: (l_i, w a(l_i)) followed by
        // (-l_i, w a(-l_i)) share a quadrature weight, so the symmetry
        // relation can be checked directly on the stored values.
        for (std::size_t i = 0; i + 1 < grid_.size(); i += 2) {
            const Atom& p = grid_[i];
            const Atom& n = grid_[i + 1];
            if (p.loc != -n.loc) throw numerical_error("llr density: grid not sign-paired");
            if (std::abs(n.mass - p.mass * std::exp(-p.loc)) > 1e-6 * std::max(1.0, p.mass))
                throw numerical_error("llr density: grid symmetry violated at l=" +
                                      std::to_string(p.loc));
        }
        if (grid_.size() % 2 != 0) throw numerical_error("llr density: unpaired grid entry");
    }

  private:
    void merge_duplicate_atoms() {
        std::vector<Atom> merged;
        for (const Atom& a : atoms_) {
            if (!merged.empty() && merged.back().loc == a.loc)
                merged.back().mass += a.mass;
            else
                merged.push_back(a);
        }
        atoms_ = std::move(merged);
    }

    std::vector<Atom> atoms_;
    std::vector<Atom> grid_;
};

namespace detail {

inline constexpr std::size_t kBiawgnQuadNodes = 2048;

/// Two-sided quadrature grid for the N(2/sigma^2, 4/sigma^2) LLR density:
/// Gauss-Legendre on [0, mean + 10 stddev] with the negative side attached
/// through the symmetry relation, stored as +/- pairs.
inline std::vector<LlrDensity::Atom> biawgn_grid(double sigma) {
    const double mean = 2.0 / (sigma * sigma);
    const double sd = 2.0 / sigma;
    const auto [nodes, weights] = gauss_legendre(kBiawgnQuadNodes, 0.0, mean + 10.0 * sd);
    std::vector<LlrDensity::Atom> grid;
    grid.reserve(2 * nodes.size());
    const double inv_norm = 1.0 / (sd * std::sqrt(2.0 * 3.14159265358979323846));
    auto density = [&](double l) {
        const double z = (l - mean) / sd;
        return inv_norm * std::exp(-0.5 * z * z);
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        grid.push_back({nodes[i], weights[i] * density(nodes[i])});
        grid.push_back({-nodes[i], weights[i] * density(-nodes[i])});
    }
    return grid;
}

}  // namespace detail

/// LLR density of the channel given input 0.
inline LlrDensity llr_density(const ChannelModel& ch) {
    switch (ch.kind) {
        case ChannelModel::Kind::BEC:
            return LlrDensity({{0.0, ch.param}, {kLlrInfinity, 1.0 - ch.param}}, {});
        case ChannelModel::Kind::BSC: {
            const double q = ch.param;
            if (q == 0.0) return LlrDensity({{kLlrInfinity, 1.0}}, {});
            if (q == 0.5) return LlrDensity({{0.0, 1.0}}, {});
            const double L = std::log((1.0 - q) / q);
            return LlrDensity({{-L, q}, {L, 1.0 - q}}, {});
        }
        default:
            return LlrDensity({}, detail::biawgn_grid(ch.param));
    }
}

/// Channel capacity in bits per use.
inline double capacity(const ChannelModel& ch) {
    switch (ch.kind) {
        case ChannelModel::Kind::BEC:
            return 1.0 - ch.param;
        case ChannelModel::Kind::BSC:
            return 1.0 - binary_entropy(ch.param);
        default: {
            // C = 1 - E[log2(1 + e^{-L})] over the LLR density.
            const LlrDensity d = llr_density(ch);
            double loss = 0.0;
            for (const auto& g : d.grid()) loss += g.mass * softplus(-g.loc);
            return 1.0 - loss / std::log(2.0);
        }
    }
}

/// Mixture of Lemma-style puncturing: an atom of mass p lands at l = 0 and
/// everything else is scaled by 1 - p.
inline LlrDensity puncture_density(const LlrDensity& d, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("puncture_density: p outside [0, 1]");
    std::vector<LlrDensity::Atom> atoms;
    atoms.reserve(d.atoms().size() + 1);
    atoms.push_back({0.0, p});
    for (const auto& a : d.atoms()) atoms.push_back({a.loc, (1.0 - p) * a.mass});
    std::vector<LlrDensity::Atom> grid = d.grid();
    for (auto& g : grid) g.mass *= (1.0 - p);
    return LlrDensity(std::move(atoms), std::move(grid));
}

/// g_p = int_0^inf a(l)(1 + e^{-l}) tanh^{2p}(l/2) dl, the channel moment
/// of order p. Negative-l mass is folded through the symmetry relation,
/// which reduces the integral to E[tanh^{2p}(|l|/2)]: the l = 0 atom
/// contributes nothing and the +inf atom contributes its mass.
inline double g_functional(const LlrDensity& d, int order) {
    if (order < 1) throw config_error("g_functional: order must be >= 1");
    auto term = [order](double loc, double mass) {
        if (mass == 0.0) return 0.0;
        if (std::isinf(loc)) return mass;
        const double t = std::tanh(std::abs(loc) * 0.5);
        return mass * std::pow(t * t, order);
    };
    double g = 0.0;
    for (const auto& a : d.atoms()) g += term(a.loc, a.mass);
    for (const auto& q : d.grid()) g += term(q.loc, q.mass);
    return g;
}

/// Transmit a codeword: punctured positions yield LLR 0 deterministically
/// (no randomness consumed); the rest are sampled from the channel law.
inline std::vector<double> transmit(const ChannelModel& ch, const BitVec& codeword,
                                    const PuncturePattern& mask, Rng& rng) {
    if (mask.mask.size() != codeword.size())
        throw config_error("transmit: mask/codeword length mismatch");
    std::vector<double> out(codeword.size(), 0.0);
    const double L = ch.kind == ChannelModel::Kind::BSC && ch.param > 0.0
                         ? std::log((1.0 - ch.param) / ch.param)
                         : kLlrInfinity;
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        if (mask.mask.get(i)) continue;  // punctured -> LLR 0
        const bool bit = codeword.get(i);
        switch (ch.kind) {
            case ChannelModel::Kind::BEC:
                out[i] = rng.bernoulli(ch.param) ? 0.0 : (bit ? -kLlrInfinity : kLlrInfinity);
                break;
            case ChannelModel::Kind::BSC: {
                const bool flipped = rng.bernoulli(ch.param);
                const bool received = bit != flipped;
                if (ch.param == 0.5)
                    out[i] = 0.0;
                else
                    out[i] = received ? -L : L;
                break;
            }
            default: {
                const double y = (bit ? -1.0 : 1.0) + ch.param * rng.gauss();
                out[i] = 2.0 * y / (ch.param * ch.param);
                break;
            }
        }
    }
    return out;
}

}  // namespace cpldpc
