#ifndef CSD_BITS_HPP
#define CSD_BITS_HPP

// bits.hpp - raw bit containers. Bit i of a bit_buffer lives in word i/64 at
// bit position i%64 (LSB-first), so masked popcounts count prefix bits.

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "csd/io.hpp"

namespace csd {

inline std::uint64_t words_for_bits(std::uint64_t n_bits) {
    return (n_bits + 63) / 64;
}

class bit_buffer {
public:
    bit_buffer() = default;
    explicit bit_buffer(std::uint64_t n_bits, bool fill = false)
        : words_(words_for_bits(n_bits), fill ? ~0ull : 0ull), n_(n_bits) {
        clear_tail();
    }

    void push_back(bool b) {
        if (n_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= 1ull << (n_ % 64);
        ++n_;
    }

    void set(std::uint64_t i, bool b) {
        if (b)
            words_[i / 64] |= 1ull << (i % 64);
        else
            words_[i / 64] &= ~(1ull << (i % 64));
    }

    bool get(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

    std::uint64_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    std::span<const std::uint64_t> words() const { return words_; }

    std::uint64_t popcount() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    // From a '0'/'1' string, for tests and small fixtures.
    static bit_buffer parse(std::string_view s) {
        bit_buffer b;
        for (char c : s) b.push_back(c == '1');
        return b;
    }

private:
    void clear_tail() {
        if (n_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ull << (n_ % 64)) - 1;
    }
    std::vector<std::uint64_t> words_;
    std::uint64_t n_ = 0;
};

// Fixed-width unsigned integers packed back to back in 64-bit words.
class packed_vector {
public:
    packed_vector() = default;
    packed_vector(std::uint64_t count, unsigned width)
        : words_(words_for_bits(count * width), 0), n_(count), width_(width) {
        if (width == 0 || width > 64) throw std::invalid_argument("packed_vector: width must be 1..64");
    }

    static packed_vector from_values(std::span<const std::uint64_t> values, unsigned width) {
        packed_vector pv(values.size(), width);
        for (std::uint64_t i = 0; i < values.size(); ++i) pv.set(i, values[i]);
        return pv;
    }

    void set(std::uint64_t i, std::uint64_t v) {
        std::uint64_t bit = i * width_;
        std::uint64_t w = bit / 64, off = bit % 64;
        std::uint64_t mask = width_ == 64 ? ~0ull : (1ull << width_) - 1;
        v &= mask;
        words_[w] = (words_[w] & ~(mask << off)) | (v << off);
        if (off + width_ > 64) {
            unsigned hi = static_cast<unsigned>(off + width_ - 64);
            std::uint64_t himask = (1ull << hi) - 1;
            words_[w + 1] = (words_[w + 1] & ~himask) | (v >> (64 - off));
        }
    }

    std::uint64_t get(std::uint64_t i) const {
        std::uint64_t bit = i * width_;
        std::uint64_t w = bit / 64, off = bit % 64;
        std::uint64_t mask = width_ == 64 ? ~0ull : (1ull << width_) - 1;
        std::uint64_t v = words_[w] >> off;
        if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
        return v & mask;
    }

    std::uint64_t size() const { return n_; }
    unsigned width() const { return width_; }
    std::span<const std::uint64_t> words() const { return words_; }
    std::uint64_t bits() const { return n_ * width_; }

    void save(byte_writer& w) const {
        w.u64(n_);
        w.u8(static_cast<std::uint8_t>(width_));
        w.words(words_);
    }
    static packed_vector load(byte_reader& r) {
        std::uint64_t n = r.u64();
        unsigned width = r.u8();
        if (width == 0 || width > 64) throw format_error("bad packed width", r.position() - 1);
        packed_vector pv(n, width);
        pv.words_ = r.words(words_for_bits(n * width));
        return pv;
    }

private:
    std::vector<std::uint64_t> words_;
    std::uint64_t n_ = 0;
    unsigned width_ = 1;
};

// Smallest width that can hold v (at least 1).
inline unsigned bits_needed(std::uint64_t v) {
    unsigned w = std::bit_width(v);
    return w == 0 ? 1u : w;
}

}  // namespace csd

#endif
