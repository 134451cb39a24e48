#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cpldpc/ensemble.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/gf2.hpp"

namespace cpldpc {

/// BEC received symbols are LLRs restricted to {+inf (bit 0), -inf (bit 1),
/// 0 (erasure or punctured)}.
inline constexpr double kLlrKnownZero = std::numeric_limits<double>::infinity();
inline constexpr double kLlrKnownOne = -std::numeric_limits<double>::infinity();
inline constexpr double kLlrErased = 0.0;

struct DecodeResult {
    BitVec resolved;    // values; meaningful where known_mask is set
    BitVec known_mask;  // true = bit recovered (channel or decoding)
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t n1 = 0;  // X1/X2 boundary, for block-selective rates
};

enum class Block { X1, X2, All };

inline double bit_erasure_rate(const DecodeResult& result, Block which) {
    const std::size_t n = result.known_mask.size();
    std::size_t lo = 0, hi = n;
    if (which == Block::X1)
        hi = result.n1;
    else if (which == Block::X2)
        lo = result.n1;
    std::size_t unknown = 0;
    for (std::size_t i = lo; i < hi; ++i)
        if (!result.known_mask.get(i)) ++unknown;
    return hi > lo ? static_cast<double>(unknown) / static_cast<double>(hi - lo) : 0.0;
}

namespace detail {

/// Flooding erasure message passing over the mother graph.
///
/// Schedule per iteration: all check messages from the previous variable
/// messages, then all variable messages from the fresh check messages.
/// X2 variables send extrinsic messages; the degree-1 X1 variables send
/// their belief (channel AND incoming), matching the density-evolution
/// recursion this decoder is compared against.
class ErasureDecoder {
  public:
    ErasureDecoder(const LdgmLdpcGraph& graph, const std::vector<double>& received)
        : n1_(graph.n1), n_(graph.n()), checks_(graph.mother.rows()) {
        if (received.size() != n_) throw config_error("decode: received length != n");

        edge_var_.reserve(graph.mother.entry_count());
        chk_off_.assign(checks_ + 1, 0);
        for (std::size_t c = 0; c < checks_; ++c) {
            chk_off_[c + 1] = chk_off_[c] + graph.mother.row(c).size();
            for (std::uint32_t v : graph.mother.row(c)) edge_var_.push_back(v);
        }
        const std::size_t n_edges = edge_var_.size();
        edge_chk_.resize(n_edges);
        for (std::size_t c = 0; c < checks_; ++c)
            for (std::size_t e = chk_off_[c]; e < chk_off_[c + 1]; ++e)
                edge_chk_[e] = static_cast<std::uint32_t>(c);
        var_edges_.resize(n_);
        for (std::size_t e = 0; e < n_edges; ++e) var_edges_[edge_var_[e]].push_back(e);

        channel_known_.assign(n_, false);
        channel_val_.assign(n_, 0);
        known_.assign(n_, false);
        value_.assign(n_, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            const double llr = received[v];
            if (llr == kLlrErased) continue;
            if (std::isinf(llr)) {
                channel_known_[v] = true;
                channel_val_[v] = llr < 0 ? 1 : 0;
                known_[v] = true;
                value_[v] = channel_val_[v];
            } else {
                throw config_error("decode: non-BEC symbol (finite nonzero LLR)");
            }
        }

        var_msg_.assign(n_edges, kErased);
        chk_msg_.assign(n_edges, kErased);
        for (std::size_t v = 0; v < n_; ++v)
            if (channel_known_[v])
                for (std::size_t e : var_edges_[v]) var_msg_[e] = channel_val_[v];
    }

    /// One flooding round; returns the number of newly resolved bits.
    std::size_t iterate() {
        for (std::size_t c = 0; c < checks_; ++c) {
            std::size_t erased = 0;
            int xor_known = 0;
            for (std::size_t e = chk_off_[c]; e < chk_off_[c + 1]; ++e) {
                if (var_msg_[e] == kErased)
                    ++erased;
                else
                    xor_known ^= var_msg_[e];
            }
            if (erased == 0 && xor_known != 0)
                throw integrity_error("decode: fully known check has nonzero parity");
            for (std::size_t e = chk_off_[c]; e < chk_off_[c + 1]; ++e) {
                if (var_msg_[e] == kErased)
                    chk_msg_[e] = erased == 1 ? static_cast<std::int8_t>(xor_known) : kErased;
                else
                    chk_msg_[e] = erased == 0
                                      ? static_cast<std::int8_t>(xor_known ^ var_msg_[e])
                                      : kErased;
            }
        }

        std::size_t newly_known = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            std::size_t in_known = 0;
            std::size_t known_from = 0;
            int in_val = 0;
            for (std::size_t e : var_edges_[v]) {
                if (chk_msg_[e] == kErased) continue;
                if (in_known == 0) {
                    in_val = chk_msg_[e];
                    known_from = edge_chk_[e];
                } else if (chk_msg_[e] != in_val) {
                    throw integrity_error("decode: conflicting check messages at variable " +
                                          std::to_string(v));
                }
                ++in_known;
            }
            if (in_known > 0 && channel_known_[v] && in_val != channel_val_[v])
                throw integrity_error("decode: check message conflicts with channel at variable " +
                                      std::to_string(v));
            if (!known_[v] && (channel_known_[v] || in_known > 0)) {
                known_[v] = true;
                value_[v] = channel_known_[v] ? channel_val_[v] : static_cast<std::int8_t>(in_val);
                ++newly_known;
            }
            if (v < n1_) {
                // Degree-1 systematic bit: belief out.
                for (std::size_t e : var_edges_[v])
                    var_msg_[e] = known_[v] ? value_[v] : kErased;
            } else {
                for (std::size_t e : var_edges_[v]) {
                    const bool extrinsic_known =
                        channel_known_[v] || in_known >= 2 ||
                        (in_known == 1 && known_from != edge_chk_[e]);
                    var_msg_[e] = extrinsic_known ? value_[v] : kErased;
                }
            }
        }
        return newly_known;
    }

    /// Fraction of erased X2-to-accumulate messages (the DE x2 statistic).
    double x2_edge_erasure_fraction() const {
        std::size_t total = 0, erased = 0;
        for (std::size_t e = 0; e < edge_var_.size(); ++e) {
            if (edge_chk_[e] < n1_ && edge_var_[e] >= n1_) {
                ++total;
                if (var_msg_[e] == kErased) ++erased;
            }
        }
        return total > 0 ? static_cast<double>(erased) / static_cast<double>(total) : 0.0;
    }

    bool all_known() const {
        for (std::size_t v = 0; v < n_; ++v)
            if (!known_[v]) return false;
        return true;
    }

    DecodeResult result(std::size_t iterations) const {
        DecodeResult r;
        r.n1 = n1_;
        r.resolved = BitVec(n_);
        r.known_mask = BitVec(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            if (known_[v]) {
                r.known_mask.set(v, true);
                if (value_[v]) r.resolved.set(v, true);
            }
        }
        r.iterations = iterations;
        r.converged = all_known();
        return r;
    }

  private:
    static constexpr std::int8_t kErased = -1;

    std::size_t n1_, n_, checks_;
    std::vector<std::uint32_t> edge_var_, edge_chk_;
    std::vector<std::size_t> chk_off_;
    std::vector<std::vector<std::size_t>> var_edges_;
    std::vector<bool> channel_known_;
    std::vector<std::int8_t> channel_val_;
    std::vector<bool> known_;
    std::vector<std::int8_t> value_;
    std::vector<std::int8_t> var_msg_, chk_msg_;
};

}  // namespace detail

/// Iterative erasure decoding; stops at the first round that resolves no
/// new bit, or after max_iters productive rounds. `iterations` counts the
/// productive rounds; `converged` means every bit was recovered.
inline DecodeResult decode(const LdgmLdpcGraph& graph, const std::vector<double>& received,
                           std::size_t max_iters = 200) {
    detail::ErasureDecoder dec(graph, received);
    std::size_t it = 0;
    while (it < max_iters) {
        if (dec.iterate() == 0) break;
        ++it;
    }
    return dec.result(it);
}

/// Runs exactly `rounds` flooding rounds (no early stop, so the message
/// statistics stay aligned with the DE trajectory) and records the X2
/// edge-message erasure fraction after initialization and after each round.
inline DecodeResult decode_traced(const LdgmLdpcGraph& graph, const std::vector<double>& received,
                                  std::size_t rounds, std::vector<double>& x2_trace) {
    detail::ErasureDecoder dec(graph, received);
    x2_trace.clear();
    x2_trace.push_back(dec.x2_edge_erasure_fraction());
    for (std::size_t t = 0; t < rounds; ++t) {
        dec.iterate();
        x2_trace.push_back(dec.x2_edge_erasure_fraction());
    }
    return dec.result(rounds);
}

}  // namespace cpldpc
