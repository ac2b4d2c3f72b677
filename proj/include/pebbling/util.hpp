#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebbling {

using Bytes = std::vector<std::uint8_t>;

inline std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline Bytes from_hex(const std::string& s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(s[2 * i]);
        int lo = hex_nibble(s[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

inline void append_le64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t read_le32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

inline void append_le32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Dynamic bitset sized at construction. Engine-side pebble configurations use
// this; the exhaustive solver has its own 64-bit fast path.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t n) : size_(n), blocks_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { blocks_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const {
        return (blocks_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : blocks_) c += static_cast<std::size_t>(__builtin_popcountll(b));
        return c;
    }

    bool none() const {
        for (auto b : blocks_)
            if (b) return false;
        return true;
    }
    bool any() const { return !none(); }

    bool subset_of(const NodeSet& other) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & ~other.blocks_[i]) return false;
        return true;
    }

    bool intersects(const NodeSet& other) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & other.blocks_[i]) return true;
        return false;
    }

    NodeSet& operator|=(const NodeSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
        return *this;
    }
    NodeSet& operator&=(const NodeSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= o.blocks_[i];
        return *this;
    }
    NodeSet& subtract(const NodeSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= ~o.blocks_[i];
        return *this;
    }

    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }

    bool operator==(const NodeSet& o) const {
        return size_ == o.size_ && blocks_ == o.blocks_;
    }
    bool operator!=(const NodeSet& o) const { return !(*this == o); }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            std::uint64_t b = blocks_[bi];
            while (b) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(b));
                f(bi * 64 + bit);
                b &= b - 1;
            }
        }
    }

    std::vector<std::uint32_t> to_indices() const {
        std::vector<std::uint32_t> out;
        for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
        return out;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> blocks_;
};

using u128 = unsigned __int128;

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// pow with overflow detection; returns false if the result would not fit.
inline bool checked_pow_u128(std::uint64_t base, std::uint32_t exp, u128& out) {
    u128 r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > ~u128{0} / base) return false;
        r *= base;
    }
    out = r;
    return true;
}

}  // namespace pebbling
