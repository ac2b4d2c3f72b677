#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pebbling/util.hpp"

namespace pebbling::shf {

// One recorded oracle query: exact input bytes and the returned output.
struct TracedQuery {
    Bytes input;
    Bytes output;
};

// Ordered batches of oracle queries from one PROM execution. Batches are the
// parallel rounds; the auditor replays them in order.
struct QueryTrace {
    std::vector<std::vector<TracedQuery>> batches;
    std::uint64_t declared_input_bits = 0;  // |x|: the adversary's declared hint size

    std::size_t query_count() const {
        std::size_t c = 0;
        for (const auto& b : batches) c += b.size();
        return c;
    }
};

// --- PTRACE1 text format -----------------------------------------------------
//
// header: PTRACE1 <declared_input_bits>
// then one line per batch, entries "hex(input):hex(output)" separated by spaces.

inline std::string write_trace(const QueryTrace& t) {
    std::ostringstream os;
    os << "PTRACE1 " << t.declared_input_bits << '\n';
    for (const auto& batch : t.batches) {
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (i) os << ' ';
            os << to_hex(batch[i].input) << ':' << to_hex(batch[i].output);
        }
        os << '\n';
    }
    return os.str();
}

inline QueryTrace read_trace(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("PTRACE1: empty file");
    std::istringstream hs(header);
    std::string magic;
    QueryTrace t;
    if (!(hs >> magic >> t.declared_input_bits) || magic != "PTRACE1")
        throw std::runtime_error("PTRACE1: bad header");
    std::string line;
    while (std::getline(is, line)) {
        std::vector<TracedQuery> batch;
        std::istringstream ls(line);
        std::string entry;
        while (ls >> entry) {
            auto colon = entry.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("PTRACE1: entry without ':'");
            TracedQuery q;
            q.input = from_hex(entry.substr(0, colon));
            q.output = from_hex(entry.substr(colon + 1));
            batch.push_back(std::move(q));
        }
        t.batches.push_back(std::move(batch));
    }
    return t;
}

}  // namespace pebbling::shf
