#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pebbling/constructions.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/oracle.hpp"
#include "pebbling/util.hpp"

namespace pebbling::shf {

using graph::Dag;
using graph::NodeIndex;

// Domain tags prepended to every oracle input. enc(v) is the tag followed by
// the 8-byte little-endian node index.
enum class DomainTag : std::uint8_t { Source = 0x01, Internal = 0x02, Mask = 0x03 };

inline void append_enc(Bytes& out, DomainTag tag, std::uint64_t v) {
    out.push_back(static_cast<std::uint8_t>(tag));
    append_le64(out, v);
}

// Oracle input whose evaluation yields label(v): enc(v) followed by zeta for
// sources, or by the predecessor labels in ascending node-index order.
inline Bytes pre_label_input(const Dag& d, NodeIndex v, const std::vector<Bytes>& labels,
                             const Bytes& zeta) {
    Bytes in;
    auto preds = d.predecessors(v);
    if (preds.empty()) {
        append_enc(in, DomainTag::Source, v);
        in.insert(in.end(), zeta.begin(), zeta.end());
    } else {
        append_enc(in, DomainTag::Internal, v);
        for (auto u : preds) in.insert(in.end(), labels[u].begin(), labels[u].end());
    }
    return in;
}

inline Bytes truncate_label(Bytes full, std::uint32_t label_bits) {
    full.resize(label_bits / 8);  // the first bits of the oracle output
    return full;
}

// Labels every node with exactly one oracle call per node, in index order
// (which is topological).
inline std::vector<Bytes> label_all(const Dag& d, const Oracle& oracle, const Bytes& zeta,
                                    std::uint32_t label_bits = 0) {
    if (zeta.size() != oracle.word_bits() / 8)
        throw std::invalid_argument("zeta must be one oracle word");
    if (label_bits == 0) label_bits = oracle.word_bits();
    std::vector<Bytes> labels(d.node_count());
    for (NodeIndex v = 0; v < d.node_count(); ++v)
        labels[v] = truncate_label(oracle.eval(pre_label_input(d, v, labels, zeta)), label_bits);
    return labels;
}

// Label of a single node, evaluating only its ancestor cone (memoized).
inline Bytes label(const Dag& d, const Oracle& oracle, const Bytes& zeta, NodeIndex v,
                   std::uint32_t label_bits = 0) {
    if (label_bits == 0) label_bits = oracle.word_bits();
    std::vector<Bytes> memo(d.node_count());
    std::vector<NodeIndex> stack{v};
    std::vector<NodeIndex> order;
    std::vector<char> seen(d.node_count(), 0);
    while (!stack.empty()) {
        NodeIndex cur = stack.back();
        stack.pop_back();
        if (seen[cur]) continue;
        seen[cur] = 1;
        order.push_back(cur);
        for (auto u : d.predecessors(cur)) stack.push_back(u);
    }
    std::sort(order.begin(), order.end());
    for (auto u : order)
        memo[u] = truncate_label(oracle.eval(pre_label_input(d, u, memo, zeta)), label_bits);
    return memo[v];
}

// --- static table -------------------------------------------------------------

struct StaticTable {
    std::uint32_t word_bits = 0;
    std::uint32_t label_bits = 0;
    std::vector<Bytes> labels;  // one per target, in canonical target order
    Bytes params_digest;        // 32-byte commitment to (params, zeta, sizes)
    std::string params_text;    // not serialized; human-readable provenance

    std::uint64_t total_bits() const { return std::uint64_t(labels.size()) * label_bits; }
};

inline Bytes table_digest(const std::string& params_text, const Bytes& zeta,
                          std::uint32_t word_bits, std::uint32_t label_bits) {
    Bytes material(params_text.begin(), params_text.end());
    material.push_back(0);
    material.insert(material.end(), zeta.begin(), zeta.end());
    append_le32(material, word_bits);
    append_le32(material, label_bits);
    Bytes out(32);
    crypto_generichash(out.data(), out.size(), material.data(), material.size(), nullptr, 0);
    return out;
}

// H1 on an explicit graph: the table of target labels.
inline StaticTable h1_on_dag(const Dag& d, const Oracle& oracle, const Bytes& zeta,
                             std::uint32_t label_bits = 0, const std::string& params_text = "") {
    if (label_bits == 0) label_bits = oracle.word_bits();
    auto labels = label_all(d, oracle, zeta, label_bits);
    StaticTable t;
    t.word_bits = oracle.word_bits();
    t.label_bits = label_bits;
    for (auto v : d.targets()) t.labels.push_back(labels[v]);
    t.params_text = params_text;
    t.params_digest = table_digest(params_text, zeta, t.word_bits, t.label_bits);
    return t;
}

// H1 from construction parameters.
inline StaticTable h1(const construct::ConstructionParams& params, const Oracle& oracle,
                      const Bytes& zeta, std::uint32_t label_bits = 0) {
    Dag d = construct::make(params);
    std::string text = "family=" + std::to_string(static_cast<int>(params.family)) +
                       " h=" + std::to_string(params.h_or_s);
    return h1_on_dag(d, oracle, zeta, label_bits, text);
}

// --- SHFR1 binary format -------------------------------------------------------
//
// "SHFR1" | u32 word_bits | u32 label_bits | u32 count | 32-byte digest |
// labels back to back.

inline Bytes write_table(const StaticTable& t) {
    Bytes out{'S', 'H', 'F', 'R', '1'};
    append_le32(out, t.word_bits);
    append_le32(out, t.label_bits);
    append_le32(out, static_cast<std::uint32_t>(t.labels.size()));
    if (t.params_digest.size() != 32) throw std::invalid_argument("SHFR1: digest must be 32 bytes");
    out.insert(out.end(), t.params_digest.begin(), t.params_digest.end());
    for (const auto& l : t.labels) {
        if (l.size() != t.label_bits / 8) throw std::invalid_argument("SHFR1: bad label size");
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

inline StaticTable read_table(const Bytes& data) {
    if (data.size() < 5 + 12 + 32 || std::string(data.begin(), data.begin() + 5) != "SHFR1")
        throw std::runtime_error("SHFR1: bad magic or truncated header");
    StaticTable t;
    t.word_bits = read_le32(data.data() + 5);
    t.label_bits = read_le32(data.data() + 9);
    std::uint32_t count = read_le32(data.data() + 13);
    t.params_digest.assign(data.begin() + 17, data.begin() + 49);
    std::size_t lb = t.label_bits / 8;
    if (data.size() != 49 + std::size_t(count) * lb)
        throw std::runtime_error("SHFR1: body size mismatch");
    for (std::uint32_t i = 0; i < count; ++i)
        t.labels.emplace_back(data.begin() + 49 + i * lb, data.begin() + 49 + (i + 1) * lb);
    return t;
}

// Random access into the table by 1-based word index, with an access log.
class SeekOracle {
public:
    explicit SeekOracle(const StaticTable& t) : table_(t) {}

    std::uint64_t word_count() const { return table_.labels.size(); }

    const Bytes& seek(std::uint64_t iota) const {
        if (iota < 1 || iota > table_.labels.size())
            throw std::out_of_range("seek index out of range");
        log_.push_back(iota);
        return table_.labels[iota - 1];
    }

    const std::vector<std::uint64_t>& access_log() const { return log_; }
    void clear_log() { log_.clear(); }

private:
    const StaticTable& table_;
    mutable std::vector<std::uint64_t> log_;
};

// --- H2 -------------------------------------------------------------------------

namespace detail {

// Uniform indices in [1, m] drawn from rho0 read as a big-endian stream of
// 64-bit windows, rejection-sampled to avoid modulo bias; the stream extends
// itself with mask-domain oracle calls when exhausted.
class IndexSampler {
public:
    IndexSampler(const Oracle& oracle, Bytes rho0, std::uint64_t m)
        : oracle_(oracle), rho0_(std::move(rho0)), buffer_(rho0_), m_(m) {
        if (m_ == 0) throw std::invalid_argument("empty table");
    }

    std::uint64_t next_index() {
        const std::uint64_t rem = (UINT64_MAX % m_ + 1) % m_;  // 2^64 mod m
        const std::uint64_t limit = UINT64_MAX - rem;          // accept u <= limit
        while (true) {
            std::uint64_t u = next_window();
            if (u <= limit) return 1 + u % m_;
        }
    }

    std::uint64_t expansion_calls() const { return expansions_; }

private:
    std::uint64_t next_window() {
        if (pos_ + 8 > buffer_.size()) {
            Bytes in;
            append_enc(in, DomainTag::Mask, ++expansions_);
            in.insert(in.end(), rho0_.begin(), rho0_.end());
            Bytes block = oracle_.eval(in);
            buffer_.insert(buffer_.end(), block.begin(), block.end());
        }
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u = u << 8 | buffer_[pos_ + i];
        pos_ += 8;
        return u;
    }

    const Oracle& oracle_;
    Bytes rho0_;
    Bytes buffer_;
    std::uint64_t m_;
    std::size_t pos_ = 0;
    std::uint64_t expansions_ = 0;
};

inline Bytes increment_be(Bytes x) {
    for (std::size_t i = x.size(); i-- > 0;) {
        if (++x[i] != 0) break;  // carry until a byte does not wrap
    }
    return x;
}

}  // namespace detail

// H2 with q' table lookups: rho0 = O(x) drives the index sampling, rho1 =
// O(x+1) masks the concatenated labels. q' = 1 with full-width labels is the
// single-lookup variant. x+1 is taken modulo 2^w on the big-endian integer
// reading of x.
inline Bytes h2_q(const StaticTable& table, const SeekOracle& seek, const Oracle& oracle,
                  const Bytes& x, std::uint32_t q_prime) {
    const std::uint32_t w = oracle.word_bits();
    if (table.word_bits != w) throw std::invalid_argument("h2: table/oracle word size mismatch");
    if (x.size() != w / 8) throw std::invalid_argument("h2: input must be one word");
    if (q_prime == 0 || w % q_prime != 0 || table.label_bits != w / q_prime)
        throw std::invalid_argument("h2: table labels do not match q'");
    if (table.labels.empty()) throw std::invalid_argument("h2: empty table");

    Bytes rho0 = oracle.eval(x);
    Bytes rho1 = oracle.eval(detail::increment_be(x));
    detail::IndexSampler sampler(oracle, rho0, seek.word_count());
    Bytes gathered;
    for (std::uint32_t i = 0; i < q_prime; ++i) {
        const Bytes& y = seek.seek(sampler.next_index());
        gathered.insert(gathered.end(), y.begin(), y.end());
    }
    for (std::size_t i = 0; i < gathered.size(); ++i) gathered[i] ^= rho1[i];
    return gathered;
}

inline Bytes h2(const StaticTable& table, const SeekOracle& seek, const Oracle& oracle,
                const Bytes& x) {
    return h2_q(table, seek, oracle, x, 1);
}

// --- row-streaming H1 (cylinder evaluator) ---------------------------------------

struct StreamParams {
    std::uint64_t row_bits = 0;   // l: one full row of labels
    std::uint32_t in_bits = 0;    // i: bits read per hash call
    std::uint32_t out_bits = 0;   // n: bits written per hash call (= label size)
    std::uint32_t rows = 0;       // 0: derive as l/(i-n)
};

struct StreamResult {
    StaticTable table;
    std::uint64_t source_calls = 0;
    std::uint64_t derivation_calls = 0;  // (l/n) * rows
    std::uint64_t buffer_bytes = 0;      // row plus the wraparound copy
};

// Evaluates the wraparound grid row by row in a single flat buffer: each
// call reads in_bits starting at its own offset (using a copy of the
// leftmost in_bits - out_bits to close the wrap) and overwrites its own
// label in place. Equals h1_on_dag over construct::wraparound(width, rows)
// bit for bit.
inline StreamResult h1_streaming(const Oracle& oracle, const Bytes& zeta,
                                 const StreamParams& p) {
    const std::uint64_t l = p.row_bits;
    const std::uint32_t i = p.in_bits, n = p.out_bits;
    if (n == 0 || n != oracle.word_bits())
        throw std::invalid_argument("streaming: out_bits must equal the oracle word size");
    if (i <= n) throw std::invalid_argument("streaming: input size must exceed output size");
    if (l % n != 0 || i % n != 0) throw std::invalid_argument("streaming: l and i must be multiples of n");
    std::uint32_t rows = p.rows;
    if (rows == 0) {
        if (l % (i - n) != 0)
            throw std::invalid_argument("streaming: i-n must divide l for the default height");
        rows = static_cast<std::uint32_t>(l / (i - n));
    }
    const std::uint32_t width = static_cast<std::uint32_t>(l / n);
    const std::uint32_t degree = i / n;
    if (degree > width) throw std::invalid_argument("streaming: degree exceeds row width");
    const std::size_t nB = n / 8;

    StreamResult res;
    res.buffer_bytes = l / 8 + std::size_t(i - n) / 8;
    Bytes row(l / 8);
    for (std::uint32_t j = 0; j < width; ++j) {
        Bytes in;
        append_enc(in, DomainTag::Source, j);
        in.insert(in.end(), zeta.begin(), zeta.end());
        Bytes out = oracle.eval(in);
        std::copy(out.begin(), out.end(), row.begin() + j * nB);
        ++res.source_calls;
    }
    Bytes tail((i - n) / 8);
    for (std::uint32_t t = 1; t <= rows; ++t) {
        std::copy(row.begin(), row.begin() + tail.size(), tail.begin());  // wraparound copy
        for (std::uint32_t j = 0; j < width; ++j) {
            Bytes in;
            append_enc(in, DomainTag::Internal, std::uint64_t(t) * width + j);
            if (j + degree <= width) {
                in.insert(in.end(), row.begin() + j * nB, row.begin() + (j + degree) * nB);
            } else {
                // seam: predecessor labels in ascending node order, the
                // wrapped ones (from the copy) first
                std::uint32_t wrapped = j + degree - width;
                in.insert(in.end(), tail.begin(), tail.begin() + wrapped * nB);
                in.insert(in.end(), row.begin() + j * nB, row.end());
            }
            Bytes out = oracle.eval(in);
            std::copy(out.begin(), out.end(), row.begin() + j * nB);
            ++res.derivation_calls;
        }
    }
    res.table.word_bits = oracle.word_bits();
    res.table.label_bits = n;
    for (std::uint32_t j = 0; j < width; ++j)
        res.table.labels.emplace_back(row.begin() + j * nB, row.begin() + (j + 1) * nB);
    res.table.params_text = "stream l=" + std::to_string(l) + " i=" + std::to_string(i) +
                            " n=" + std::to_string(n) + " rows=" + std::to_string(rows);
    res.table.params_digest = table_digest(res.table.params_text, zeta, res.table.word_bits, n);
    return res;
}

}  // namespace pebbling::shf
