#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pebbling/engine.hpp"

namespace pebbling::engine {

// --- PSTRAT1 text format -----------------------------------------------------
//
// header:  PSTRAT1 <std|magic> <magic bound | inf>
// then one line per move made of directive groups:
//   +b <idx...>   place black pebbles        -b <idx...>   remove black pebbles
//   +m <idx...>   place magic pebbles        -m <idx...>   remove magic pebbles
//   > <from>:<to> ...   slide black pebbles along edges
// An empty line is a move with no actions.

inline std::string write_pstrat(const Strategy& s) {
    std::ostringstream os;
    os << "PSTRAT1 " << (s.kind == Kind::Standard ? "std" : "magic") << ' ';
    if (s.kind == Kind::Magic && s.magic_bound)
        os << *s.magic_bound;
    else
        os << "inf";
    os << '\n';
    for (std::size_t i = 1; i < s.configs.size(); ++i) {
        const Config& prev = s.configs[i - 1];
        const Config& cur = s.configs[i];
        std::vector<std::string> groups;
        auto delta = [&](const NodeSet& from, const NodeSet& to, const char* op) {
            std::string g;
            to.for_each([&](std::size_t v) {
                if (!from.test(v)) g += ' ' + std::to_string(v);
            });
            if (!g.empty()) groups.push_back(op + g);
        };
        delta(prev.black, cur.black, "+b");
        delta(cur.black, prev.black, "-b");
        delta(prev.magic, cur.magic, "+m");
        delta(cur.magic, prev.magic, "-m");
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            os << (gi ? " " : "") << groups[gi];
        os << '\n';
    }
    return os.str();
}

inline Strategy read_pstrat(const std::string& text, std::size_t node_count) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("PSTRAT1: empty file");
    std::istringstream hs(header);
    std::string magic_word, kind_word, bound_word;
    hs >> magic_word >> kind_word >> bound_word;
    if (magic_word != "PSTRAT1") throw std::runtime_error("PSTRAT1: bad header");
    Strategy s;
    if (kind_word == "std") {
        s = standard_strategy(node_count);
    } else if (kind_word == "magic") {
        std::optional<std::uint32_t> bound;
        if (bound_word != "inf" && !bound_word.empty())
            bound = static_cast<std::uint32_t>(std::stoul(bound_word));
        s = magic_strategy(node_count, bound);
    } else {
        throw std::runtime_error("PSTRAT1: unknown strategy kind '" + kind_word + "'");
    }

    std::string line;
    while (std::getline(is, line)) {
        Config cfg = s.configs.back();
        std::istringstream ls(line);
        std::string tok;
        enum class Op { None, AddB, RemB, AddM, RemM, Slide } op = Op::None;
        auto apply_index = [&](const std::string& t) {
            if (op == Op::Slide) {
                auto colon = t.find(':');
                if (colon == std::string::npos)
                    throw std::runtime_error("PSTRAT1: bad slide token '" + t + "'");
                std::size_t from = std::stoul(t.substr(0, colon));
                std::size_t to = std::stoul(t.substr(colon + 1));
                if (from >= node_count || to >= node_count)
                    throw std::runtime_error("PSTRAT1: slide index out of range");
                if (!cfg.black.test(from))
                    throw std::runtime_error("PSTRAT1: slide from unpebbled node " +
                                             std::to_string(from));
                cfg.black.reset(from);
                cfg.black.set(to);
                return;
            }
            std::size_t v = std::stoul(t);
            if (v >= node_count) throw std::runtime_error("PSTRAT1: node index out of range");
            switch (op) {
                case Op::AddB: cfg.black.set(v); break;
                case Op::RemB: cfg.black.reset(v); break;
                case Op::AddM: cfg.magic.set(v); break;
                case Op::RemM: cfg.magic.reset(v); break;
                default: throw std::runtime_error("PSTRAT1: index before directive");
            }
        };
        while (ls >> tok) {
            if (tok == "+b") op = Op::AddB;
            else if (tok == "-b") op = Op::RemB;
            else if (tok == "+m") op = Op::AddM;
            else if (tok == "-m") op = Op::RemM;
            else if (tok == ">") op = Op::Slide;
            else apply_index(tok);
        }
        s.configs.push_back(std::move(cfg));
    }
    return s;
}

}  // namespace pebbling::engine
