#pragma once

#include <sodium.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "pebbling/trace.hpp"
#include "pebbling/util.hpp"

namespace pebbling::shf {

// Fixed-output-length hash oracle. Implementations must be deterministic and
// stateless; wrappers add call counting and trace capture.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual std::uint32_t word_bits() const = 0;
    virtual Bytes eval(const Bytes& input) const = 0;
};

// blake2b with the requested output width; a nonzero seed keys the hash,
// giving the seeded deterministic test oracle used for golden vectors.
class Blake2bOracle final : public Oracle {
public:
    explicit Blake2bOracle(std::uint32_t word_bits, std::uint64_t seed = 0)
        : word_bits_(word_bits), seed_(seed) {
        if (word_bits % 8 != 0) throw std::invalid_argument("oracle: word size not in bytes");
        std::uint32_t bytes = word_bits / 8;
        if (bytes < crypto_generichash_BYTES_MIN || bytes > crypto_generichash_BYTES_MAX)
            throw std::invalid_argument("oracle: unsupported word size " +
                                        std::to_string(word_bits));
        if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
        if (seed_ != 0) {
            key_.resize(crypto_generichash_KEYBYTES);
            for (std::size_t i = 0; i < key_.size(); ++i)
                key_[i] = static_cast<std::uint8_t>(seed_ >> (8 * (i % 8)));
        }
    }

    std::uint32_t word_bits() const override { return word_bits_; }

    Bytes eval(const Bytes& input) const override {
        Bytes out(word_bits_ / 8);
        crypto_generichash(out.data(), out.size(), input.data(), input.size(),
                           key_.empty() ? nullptr : key_.data(), key_.size());
        return out;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint32_t word_bits_;
    std::uint64_t seed_;
    Bytes key_;
};

struct OracleSpec {
    std::uint32_t word_bits = 512;
    std::string hash_id = "blake2b";
    std::uint64_t seed = 0;                 // 0 = unkeyed
    std::uint32_t truncate_to_bits = 0;     // 0 = full-width labels

    std::uint32_t label_bits() const { return truncate_to_bits ? truncate_to_bits : word_bits; }

    void check() const {
        if (word_bits % 8) throw std::invalid_argument("word_bits must be a multiple of 8");
        if (truncate_to_bits &&
            (word_bits % truncate_to_bits != 0 || truncate_to_bits % 8 != 0))
            throw std::invalid_argument("truncate_to_bits must divide word_bits");
        if (hash_id != "blake2b") throw std::invalid_argument("unknown hash_id: " + hash_id);
    }
};

inline std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec) {
    spec.check();
    return std::make_unique<Blake2bOracle>(spec.word_bits, spec.seed);
}

class CountingOracle final : public Oracle {
public:
    explicit CountingOracle(const Oracle& inner) : inner_(inner) {}
    std::uint32_t word_bits() const override { return inner_.word_bits(); }
    Bytes eval(const Bytes& input) const override {
        ++calls_;
        return inner_.eval(input);
    }
    std::uint64_t calls() const { return calls_; }
    void reset() { calls_ = 0; }

private:
    const Oracle& inner_;
    mutable std::uint64_t calls_ = 0;
};

// Records every query into a QueryTrace. Callers group queries into batches
// with begin_batch(); without an explicit batch every query lands in its own.
class TracingOracle final : public Oracle {
public:
    TracingOracle(const Oracle& inner, QueryTrace& sink) : inner_(inner), sink_(sink) {}

    std::uint32_t word_bits() const override { return inner_.word_bits(); }

    void begin_batch() { explicit_batch_ = true; sink_.batches.emplace_back(); }

    Bytes eval(const Bytes& input) const override {
        Bytes out = inner_.eval(input);
        if (!explicit_batch_ || sink_.batches.empty()) sink_.batches.emplace_back();
        sink_.batches.back().push_back(TracedQuery{input, out});
        return out;
    }

private:
    const Oracle& inner_;
    QueryTrace& sink_;
    bool explicit_batch_ = false;
};

}  // namespace pebbling::shf
