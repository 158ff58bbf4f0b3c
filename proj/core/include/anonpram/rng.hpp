#pragma once

#include <cstdint>
#include <deque>
#include <memory>

namespace anonpram {

/// splitmix64 finalizer. Fixed across platforms; documented so that report
/// files are portable.
constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kSeedGamma = 0x9e3779b97f4a7c15ULL;

/// Combines a seed with a stream tag. Seed derivation everywhere is built
/// from this one function:
///   trial seed     = mix_seed(master, trial_index)
///   processor seed = mix_seed(mix_seed(trial_seed, 1), processor_index)
///   selector seed  = mix_seed(trial_seed, 2)
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix_mix(seed + kSeedGamma * (tag + 1));
}

/// A stream of private random bits with exact accounting.
///
/// `bits_consumed` counts every bit actually drawn from the stream,
/// including bits burned by rejection sampling. `bits_nominal` counts
/// ceil(lg m) per uniform draw, the accounting the analyses use; both are
/// reported so either view is recoverable.
class BitSource {
public:
    virtual ~BitSource() = default;

    /// Draws `width` fresh bits (width <= 64) and returns them in the low
    /// bits of the result. width == 0 returns 0 and consumes nothing.
    std::uint64_t draw_bits(unsigned width) {
        if (width == 0) return 0;
        std::uint64_t v = next_bits(width);
        bits_consumed_ += width;
        return v;
    }

    std::uint64_t bits_consumed() const { return bits_consumed_; }
    std::uint64_t bits_nominal() const { return bits_nominal_; }
    void add_nominal(std::uint64_t n) { bits_nominal_ += n; }

protected:
    virtual std::uint64_t next_bits(unsigned width) = 0;

private:
    std::uint64_t bits_consumed_ = 0;
    std::uint64_t bits_nominal_ = 0;
};

/// Default bit source: buffered splitmix64 words.
class SplitMixSource final : public BitSource {
public:
    explicit SplitMixSource(std::uint64_t seed) : state_(seed) {}

protected:
    std::uint64_t next_bits(unsigned width) override {
        std::uint64_t out = 0;
        unsigned got = 0;
        while (got < width) {
            if (buffered_ == 0) {
                state_ += kSeedGamma;
                buffer_ = splitmix_mix(state_);
                buffered_ = 64;
            }
            unsigned take = width - got;
            if (take > buffered_) take = buffered_;
            out |= (buffer_ & (take == 64 ? ~0ULL : ((1ULL << take) - 1))) << got;
            buffer_ >>= take == 64 ? 0 : take;
            buffered_ -= take;
            got += take;
        }
        return out;
    }

private:
    std::uint64_t state_;
    std::uint64_t buffer_ = 0;
    unsigned buffered_ = 0;
};

/// Scripted bit source for tests: each draw_bits call pops the next scripted
/// value. Running past the script is an error the test wants to hear about.
class FixedBitSource final : public BitSource {
public:
    explicit FixedBitSource(std::deque<std::uint64_t> script)
        : script_(std::move(script)) {}

    /// Appends one more scripted draw.
    void push(std::uint64_t v) { script_.push_back(v); }

    bool exhausted() const { return script_.empty(); }

protected:
    std::uint64_t next_bits(unsigned width) override {
        if (script_.empty())
            throw std::runtime_error("FixedBitSource: script exhausted");
        std::uint64_t v = script_.front();
        script_.pop_front();
        std::uint64_t mask = width == 64 ? ~0ULL : ((1ULL << width) - 1);
        return v & mask;
    }

private:
    std::deque<std::uint64_t> script_;
};

inline unsigned bit_width_u64(std::uint64_t v) {
    unsigned w = 0;
    while (v != 0) {
        ++w;
        v >>= 1;
    }
    return w;
}

/// Uniform draw over [1, m] by rejection sampling on ceil(lg m)-bit words.
/// Exactly uniform; consumes a multiple of ceil(lg m) bits.
inline std::uint64_t draw_uniform(BitSource& src, std::uint64_t m) {
    if (m <= 1) return 1;
    unsigned w = bit_width_u64(m - 1);
    src.add_nominal(w);
    for (;;) {
        std::uint64_t r = src.draw_bits(w);
        if (r < m) return r + 1;
    }
}

/// Uniform draw over [1, 2^bits] charged exactly `bits` bits. For bits > 62
/// the drawn word is XOR-folded to 62 bits: the full number of random bits
/// is consumed and accounted, only the stored value is narrowed (which can
/// only raise the per-pair collision probability, to ~2^-62).
inline std::int64_t draw_uniform_pow2(BitSource& src, unsigned bits) {
    src.add_nominal(bits);
    if (bits == 0) return 1;
    std::uint64_t acc = 0;
    unsigned left = bits;
    while (left > 0) {
        unsigned take = left > 62 ? 62 : left;
        acc ^= src.draw_bits(take);
        left -= take;
    }
    return static_cast<std::int64_t>(acc & ((1ULL << 62) - 1)) + 1;
}

using BitSourcePtr = std::unique_ptr<BitSource>;

}  // namespace anonpram
