#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cpldpc/degree_dist.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/gf2.hpp"
#include "cpldpc/rng.hpp"

namespace cpldpc {

/// Compound ensemble (n1, n2, lambda_G, rho_G, lambda_H, rho_H) with X2
/// puncturing probability p.
///
/// Convention: rho_G describes the X2-side sockets of the LDGM accumulate
/// nodes. Every accumulate node additionally carries one identity edge to
/// its X1 bit, so its total degree in the mother graph is 1 + (rho_G degree).
struct EnsembleParams {
    std::size_t n1;
    std::size_t n2;
    DegreeDistribution lambda_g;
    DegreeDistribution rho_g;
    DegreeDistribution lambda_h;
    DegreeDistribution rho_h;
    double puncture_p = 0.0;
    std::uint64_t seed = 0;

    std::size_t n() const { return n1 + n2; }

    /// Number of lower-LDPC checks, n2 * (1 - design_rate(lambda_H, rho_H)).
    std::size_t c_h() const {
        return static_cast<std::size_t>(
            std::llround(static_cast<double>(n2) * (1.0 - design_rate(lambda_h, rho_h))));
    }

    void validate() const {
        if (n1 < 1 || n2 < 1) throw config_error("ensemble: n1 and n2 must be >= 1");
        if (!(puncture_p >= 0.0 && puncture_p <= 1.0))
            throw config_error("ensemble: puncture probability outside [0, 1]");
        check_layer("G", static_cast<double>(n2) * lambda_g.average_degree(),
                    static_cast<double>(n1) * rho_g.average_degree());
        check_layer("H", static_cast<double>(n2) * lambda_h.average_degree(),
                    static_cast<double>(c_h()) * rho_h.average_degree());
        if (c_h() < 1) throw config_error("ensemble: H layer has no checks (design rate 1)");
    }

  private:
    static void check_layer(const char* name, double var_sockets, double chk_sockets) {
        const double scale = std::max(var_sockets, chk_sockets);
        // Absolute slack covers c_H rounding at small n.
        const double slack = std::max(0.01 * scale, 8.0);
        if (std::abs(var_sockets - chk_sockets) > slack)
            throw config_error(std::string("ensemble: infeasible socket counts in layer ") + name +
                               " (" + std::to_string(var_sockets) + " vs " +
                               std::to_string(chk_sockets) + ")");
    }
};

struct LdgmLdpcGraph {
    SparseBinMatrix G;       // n2 x n1, X1 = X2 * G
    SparseBinMatrix H;       // c_H x n2, X2 * H^T = 0
    SparseBinMatrix mother;  // (n1 + c_H) x (n1 + n2)
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    std::size_t n() const { return n1 + n2; }
};

struct PuncturePattern {
    BitVec mask;  // true = punctured; bits [0, n1) always false
    std::size_t n1 = 0;

    void validate() const {
        for (std::size_t i = 0; i < n1; ++i)
            if (mask.get(i)) throw config_error("puncture pattern: X1 bit punctured");
    }
};

namespace detail {

/// Integer node counts per degree (index d-1) by largest-remainder
/// apportionment of the node-perspective fractions.
inline std::vector<std::size_t> apportion_degrees(const DegreeDistribution& d, std::size_t nodes) {
    const std::vector<double> frac = d.node_fractions();
    std::vector<std::size_t> count(frac.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;  // (remainder, degree index)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < frac.size(); ++i) {
        const double target = frac[i] * static_cast<double>(nodes);
        count[i] = static_cast<std::size_t>(target);
        assigned += count[i];
        rem.emplace_back(target - std::floor(target), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; assigned < nodes; ++k, ++assigned) ++count[rem[k % rem.size()].second];
    return count;
}

inline std::size_t socket_total(const std::vector<std::size_t>& count) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < count.size(); ++i) s += count[i] * (i + 1);
    return s;
}

/// Move nodes between adjacent degree classes until the socket total hits
/// `target`. Residual sockets go to the most probable degree class.
inline void patch_sockets(std::vector<std::size_t>& count, const std::vector<double>& node_frac,
                          std::size_t target) {
    auto preferred = [&](bool need_ge2) -> std::size_t {
        std::size_t best = count.size();
        double best_frac = -1.0;
        for (std::size_t i = 0; i < count.size(); ++i) {
            if (count[i] == 0) continue;
            if (need_ge2 && i == 0) continue;
            const double f = i < node_frac.size() ? node_frac[i] : 0.0;
            if (f > best_frac) {
                best_frac = f;
                best = i;
            }
        }
        if (best == count.size()) throw config_error("ensemble: cannot patch degree sequence");
        return best;
    };
    std::size_t have = socket_total(count);
    while (have < target) {
        const std::size_t i = preferred(false);
        --count[i];
        if (i + 2 > count.size()) count.resize(i + 2, 0);
        ++count[i + 1];
        ++have;
    }
    while (have > target) {
        const std::size_t i = preferred(true);
        --count[i];
        ++count[i - 1];
        --have;
    }
}

/// Per-node degree list from class counts, assigned to node ids in order;
/// the caller shuffles node order where it matters.
inline std::vector<std::size_t> expand_degrees(const std::vector<std::size_t>& count) {
    std::vector<std::size_t> deg;
    deg.reserve(socket_total(count));
    for (std::size_t i = 0; i < count.size(); ++i)
        for (std::size_t k = 0; k < count[i]; ++k) deg.push_back(i + 1);
    return deg;
}

struct BipartiteEdges {
    std::vector<std::uint32_t> var_of_edge;
    std::vector<std::uint32_t> chk_of_edge;
};

/// Configuration model: match variable sockets to check sockets uniformly,
/// then repair parallel edges by socket swaps (degree-preserving), up to 100
/// sweeps before rejecting.
inline BipartiteEdges match_sockets(const std::vector<std::size_t>& var_deg,
                                    const std::vector<std::size_t>& chk_deg, Rng& rng) {
    BipartiteEdges e;
    for (std::size_t v = 0; v < var_deg.size(); ++v)
        for (std::size_t k = 0; k < var_deg[v]; ++k)
            e.var_of_edge.push_back(static_cast<std::uint32_t>(v));
    for (std::size_t c = 0; c < chk_deg.size(); ++c)
        for (std::size_t k = 0; k < chk_deg[c]; ++k)
            e.chk_of_edge.push_back(static_cast<std::uint32_t>(c));
    if (e.var_of_edge.size() != e.chk_of_edge.size())
        throw config_error("ensemble: socket totals differ after apportionment");
    rng.shuffle(e.chk_of_edge);

    const std::size_t m = e.var_of_edge.size();
    const std::uint64_t key_stride = chk_deg.size() + 1;
    auto key = [&](std::size_t i) {
        return static_cast<std::uint64_t>(e.var_of_edge[i]) * key_stride + e.chk_of_edge[i];
    };
    for (int sweep = 0; sweep < 100; ++sweep) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(m * 2);
        std::vector<std::size_t> dups;
        for (std::size_t i = 0; i < m; ++i)
            if (!seen.insert(key(i)).second) dups.push_back(i);
        if (dups.empty()) return e;
        for (std::size_t i : dups) {
            const std::size_t j = static_cast<std::size_t>(rng.below(m));
            std::swap(e.chk_of_edge[i], e.chk_of_edge[j]);
        }
    }
    throw config_error("ensemble: could not remove parallel edges after 100 sweeps");
}

inline SparseBinMatrix edges_to_matrix(const BipartiteEdges& e, std::size_t chk_count,
                                       std::size_t var_count) {
    std::vector<std::vector<std::uint32_t>> rows(chk_count);
    for (std::size_t i = 0; i < e.var_of_edge.size(); ++i)
        rows[e.chk_of_edge[i]].push_back(e.var_of_edge[i]);
    for (auto& r : rows) std::sort(r.begin(), r.end());
    return SparseBinMatrix(chk_count, var_count, std::move(rows));
}

}  // namespace detail

/// Assemble the mother constraint matrix from G and H: check m < n1 is
/// (e_m | column m of G), check m >= n1 is (0 | row m - n1 of H).
inline SparseBinMatrix build_mother_matrix(const SparseBinMatrix& G, const SparseBinMatrix& H) {
    if (H.cols() != G.rows())
        throw config_error("mother matrix: H columns must match G rows (n2)");
    const std::size_t n1 = G.cols();
    const std::size_t n2 = G.rows();
    const SparseBinMatrix Gt = G.transposed();
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(n1 + H.rows());
    for (std::size_t m = 0; m < n1; ++m) {
        std::vector<std::uint32_t> r;
        r.reserve(1 + Gt.row(m).size());
        r.push_back(static_cast<std::uint32_t>(m));
        for (std::uint32_t v : Gt.row(m)) r.push_back(static_cast<std::uint32_t>(n1 + v));
        rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < H.rows(); ++j) {
        std::vector<std::uint32_t> r;
        r.reserve(H.row(j).size());
        for (std::uint32_t c : H.row(j)) r.push_back(static_cast<std::uint32_t>(n1 + c));
        rows.push_back(std::move(r));
    }
    return SparseBinMatrix(n1 + H.rows(), n1 + n2, std::move(rows));
}

inline LdgmLdpcGraph sample_graph(const EnsembleParams& params, Rng& rng) {
    params.validate();

    // G layer: n2 variables under lambda_G vs n1 accumulate nodes under
    // rho_G (X2-side sockets only; identity edges are added structurally).
    auto g_var = detail::apportion_degrees(params.lambda_g, params.n2);
    auto g_chk = detail::apportion_degrees(params.rho_g, params.n1);
    detail::patch_sockets(g_chk, params.rho_g.node_fractions(), detail::socket_total(g_var));

    // H layer: n2 variables under lambda_H vs c_H checks under rho_H.
    const std::size_t c_h = params.c_h();
    auto h_var = detail::apportion_degrees(params.lambda_h, params.n2);
    auto h_chk = detail::apportion_degrees(params.rho_h, c_h);
    detail::patch_sockets(h_chk, params.rho_h.node_fractions(), detail::socket_total(h_var));

    // Degrees are assigned to node ids by independent shuffles, so a node's
    // G-layer and H-layer degrees are independent (the DE assumption).
    auto g_var_deg = detail::expand_degrees(g_var);
    auto g_chk_deg = detail::expand_degrees(g_chk);
    auto h_var_deg = detail::expand_degrees(h_var);
    auto h_chk_deg = detail::expand_degrees(h_chk);
    rng.shuffle(g_var_deg);
    rng.shuffle(g_chk_deg);
    rng.shuffle(h_var_deg);
    rng.shuffle(h_chk_deg);

    auto g_edges = detail::match_sockets(g_var_deg, g_chk_deg, rng);
    auto h_edges = detail::match_sockets(h_var_deg, h_chk_deg, rng);

    LdgmLdpcGraph graph;
    graph.n1 = params.n1;
    graph.n2 = params.n2;
    // G rows = X2 nodes, G cols = accumulate nodes: transpose the
    // check-major edge layout.
    graph.G = detail::edges_to_matrix(g_edges, params.n1, params.n2).transposed();
    graph.H = detail::edges_to_matrix(h_edges, c_h, params.n2);
    graph.mother = build_mother_matrix(graph.G, graph.H);
    return graph;
}

inline LdgmLdpcGraph sample_graph(const EnsembleParams& params) {
    Rng rng(params.seed);
    return sample_graph(params, rng);
}

/// Uniform codeword sampling: X2 uniform over null(H), X1 = X2 G. The
/// nullspace basis is computed once at construction; sampling is cheap and
/// const thereafter.
class CodewordSampler {
  public:
    explicit CodewordSampler(const LdgmLdpcGraph& graph)
        : graph_(&graph), basis_(nullspace_basis(graph.H)) {}

    std::size_t dimension() const { return basis_.size(); }

    BitVec operator()(Rng& rng) const {
        const BitVec x2 = random_combination(basis_, graph_->n2, rng);
        const BitVec x1 = vecmat(x2, graph_->G);
        BitVec x(graph_->n());
        for (std::size_t i = 0; i < graph_->n1; ++i)
            if (x1.get(i)) x.set(i, true);
        for (std::size_t i = 0; i < graph_->n2; ++i)
            if (x2.get(i)) x.set(graph_->n1 + i, true);
        return x;
    }

  private:
    const LdgmLdpcGraph* graph_;
    std::vector<BitVec> basis_;
};

inline BitVec sample_codeword(const LdgmLdpcGraph& graph, Rng& rng) {
    return CodewordSampler(graph)(rng);
}

/// Bits [0, n1) stay unpunctured; each X2 bit is punctured independently
/// with probability p.
inline PuncturePattern sample_puncture_pattern(const EnsembleParams& params, Rng& rng) {
    PuncturePattern pat;
    pat.n1 = params.n1;
    pat.mask = BitVec(params.n());
    for (std::size_t i = params.n1; i < params.n(); ++i)
        if (rng.bernoulli(params.puncture_p)) pat.mask.set(i, true);
    return pat;
}

/// Check the block structure: every check m < n1 touches exactly one X1
/// variable (its own), checks m >= n1 touch none.
inline void audit_beta_structure(const LdgmLdpcGraph& graph) {
    for (std::size_t m = 0; m < graph.mother.rows(); ++m) {
        std::size_t x1_touch = 0;
        bool self = false;
        for (std::uint32_t c : graph.mother.row(m))
            if (c < graph.n1) {
                ++x1_touch;
                self = (c == m);
            }
        if (m < graph.n1) {
            if (x1_touch != 1 || !self)
                throw integrity_error("mother matrix: identity block violated at check " +
                                      std::to_string(m));
        } else if (x1_touch != 0) {
            throw integrity_error("mother matrix: H-layer check touches X1 at check " +
                                  std::to_string(m));
        }
    }
}

}  // namespace cpldpc
