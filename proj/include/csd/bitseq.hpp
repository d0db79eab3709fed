#ifndef CSD_BITSEQ_HPP
#define CSD_BITSEQ_HPP

// bitseq.hpp - bit sequences with rank/select in two layouts.
//
//   RG  - plain bits plus absolute 32-bit rank counters every K = ceil(32/x)
//         bits, for a total of about (1+x)n bits.
//   RRR - 15-bit blocks stored as a 4-bit class (popcount) and an enumerative
//         offset of ceil(log2 C(15,class)) bits, plus rank/offset samples
//         every ceil(64/(15x)) blocks. Compresses when the bitmap is skewed.
//
// Positions handed to access/select are 1-based; rank takes a prefix length
// in 0..n. Structures are immutable once built and safe to share across
// threads.

#include <atomic>
#include <cstdint>
#include <vector>

#include "csd/bits.hpp"
#include "csd/io.hpp"

namespace csd {

enum class bit_layout : std::uint8_t { rg = 0, rrr = 1 };

class bit_sequence {
public:
    bit_sequence() = default;
    bit_sequence(const bit_buffer& bits, bit_layout layout, double x);

    std::uint64_t size() const { return n_; }
    std::uint64_t ones() const { return m_; }
    std::uint64_t zeros() const { return n_ - m_; }
    bit_layout layout() const { return layout_; }
    double overhead_param() const { return x_; }

    bool access(std::uint64_t pos) const;          // pos in [1,n]
    std::uint64_t rank1(std::uint64_t i) const;    // ones in the first i bits
    std::uint64_t rank0(std::uint64_t i) const;
    std::uint64_t rank(bool b, std::uint64_t i) const;
    std::uint64_t select1(std::uint64_t j) const;  // position of j-th one
    std::uint64_t select0(std::uint64_t j) const;
    std::uint64_t select(bool b, std::uint64_t j) const;

    std::uint64_t size_in_bits() const;  // serialized footprint

    void save(byte_writer& w) const;
    static bit_sequence load(byte_reader& r);

    // Query instrumentation (public entry points only).
    static std::uint64_t rank_calls();
    static std::uint64_t select_calls();
    static void reset_op_counters();

private:
    static constexpr unsigned kBlock = 15;

    void build_rg(const bit_buffer& bits);
    void build_rrr(const bit_buffer& bits);

    std::uint64_t rank1_impl(std::uint64_t i) const;
    std::uint64_t rg_rank1(std::uint64_t i) const;
    std::uint64_t rrr_rank1(std::uint64_t i) const;
    std::uint64_t rg_select(bool b, std::uint64_t j) const;
    std::uint64_t rrr_select(bool b, std::uint64_t j) const;

    std::uint32_t block_class(std::uint64_t b) const { return static_cast<std::uint32_t>(classes_.get(b)); }
    std::uint32_t block_pattern(std::uint64_t b, std::uint64_t off_bitpos) const;
    std::uint64_t num_blocks() const { return (n_ + kBlock - 1) / kBlock; }

    bit_layout layout_ = bit_layout::rg;
    std::uint64_t n_ = 0;
    std::uint64_t m_ = 0;
    double x_ = 0.25;

    // RG payload
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> rg_samples_;  // rank1(t*K), t = 1..
    std::uint64_t rg_k_ = 0;

    // RRR payload
    packed_vector classes_;                      // 4 bits per block
    std::vector<std::uint64_t> off_words_;       // enumerative offsets
    std::uint64_t off_bits_ = 0;
    std::vector<std::uint32_t> rrr_rank_samples_;  // ones before block t*T
    std::vector<std::uint32_t> rrr_off_samples_;   // offset bits before block t*T
    std::uint64_t rrr_t_ = 0;
};

}  // namespace csd

#endif
