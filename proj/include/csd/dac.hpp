#ifndef CSD_DAC_HPP
#define CSD_DAC_HPP

// dac.hpp - directly addressable sequences of variable length.
//
// The k-th symbols of all sequences that are at least k long are concatenated
// into a fixed-width level array A_k; a continuation bitmap B_k marks the
// sequences that extend further. Random access to sequence i chains
// rank1(B_k, i) across levels. Bitmaps use the RG layout with x = 0.25, so
// their overhead is at most 1.25 bits per stored symbol.

#include <cstdint>
#include <vector>

#include "csd/bits.hpp"
#include "csd/bitseq.hpp"
#include "csd/io.hpp"

namespace csd {

class dac_array {
public:
    dac_array() = default;

    static dac_array build(const std::vector<std::vector<std::uint32_t>>& sequences, unsigned width);

    std::uint64_t size() const { return n_; }
    unsigned width() const { return width_; }
    std::size_t levels() const { return levels_.size(); }
    std::uint64_t total_symbols() const;
    std::uint64_t bitmap_bits() const;
    std::uint64_t size_in_bits() const;

    // i is 1-based; returns the original sequence.
    std::vector<std::uint32_t> access(std::uint64_t i) const;
    // First min(limit, length) symbols of sequence i.
    std::vector<std::uint32_t> access_prefix(std::uint64_t i, std::size_t limit) const;

    void save(byte_writer& w) const;
    static dac_array load(byte_reader& r);

private:
    static constexpr double kBitmapOverhead = 0.25;

    struct level {
        packed_vector syms;
        bit_sequence cont;
    };
    std::vector<level> levels_;
    std::uint64_t n_ = 0;
    unsigned width_ = 1;
};

}  // namespace csd

#endif
