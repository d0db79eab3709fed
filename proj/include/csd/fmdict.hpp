#ifndef CSD_FMDICT_HPP
#define CSD_FMDICT_HPP

// fmdict.hpp - FM-index dictionary over the text T = $s1$s2$...$sn$, strings
// in lexicographic order, $ = byte 0 (smaller than every symbol).
//
// T^bwt is kept in a balanced wavelet tree whose bitmaps are RG for the SSA
// variant and RRR for SSA* (the latter reaches higher-order compression with
// the identical query code). locate backward-searches $p$ from the interval
// (1, n+1); extract starts at the BWT slot holding a string's final character
// and LF-steps until it reaches a $, with no position sampling at all.
//
// Id i maps to BWT row i+2 (or row 1 for i = n): the first n+1 sorted
// suffixes of T are exactly the $-suffixes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csd/bitseq.hpp"
#include "csd/io.hpp"

namespace csd {

enum class fm_variant : std::uint8_t { ssa = 0, ssa_star = 1 };

// Suffix array (0-based positions) by prefix doubling; handles repeated
// symbols and embedded zero bytes.
std::vector<std::uint32_t> suffix_array_doubling(std::span<const std::uint8_t> text);

class fm_dictionary {
public:
    fm_dictionary() = default;

    static fm_dictionary build(std::span<const std::string> sorted_unique, fm_variant variant,
                               double x);

    std::int64_t locate(std::string_view p) const;
    std::optional<std::string> extract(std::uint64_t id) const;

    fm_variant variant() const { return variant_; }
    std::uint64_t text_length() const { return text_len_; }
    std::uint64_t string_count() const { return n_; }

    // FM primitives, 1-based positions.
    std::uint8_t bwt_at(std::uint64_t j) const;
    std::uint64_t lf(std::uint64_t j) const;
    // (sp', ep') extending the interval with a leading c; empty iff sp' > ep'.
    std::pair<std::uint64_t, std::uint64_t> backward_step(std::uint64_t sp, std::uint64_t ep,
                                                          std::uint8_t c) const;
    // occurrences of c in T^bwt[1..j]
    std::uint64_t symbol_rank(std::uint8_t c, std::uint64_t j) const;

    std::uint64_t size_in_bits() const;
    void save(byte_writer& w) const;
    static fm_dictionary load(byte_reader& r);

private:
    struct wt_node {
        bit_sequence bits;
        std::uint32_t left = UINT32_MAX;   // child over the lower half
        std::uint32_t right = UINT32_MAX;  // child over the upper half
    };

    std::uint32_t build_node(std::vector<std::uint16_t>& codes, std::uint32_t lo, std::uint32_t hi);
    std::pair<std::uint8_t, std::uint64_t> access_rank(std::uint64_t j) const;

    fm_variant variant_ = fm_variant::ssa;
    double x_ = 0.1;
    std::uint64_t text_len_ = 0;
    std::uint64_t n_ = 0;
    std::vector<std::uint8_t> alphabet_;          // occurring bytes, ascending
    std::array<std::int16_t, 256> sym_code_{};    // byte -> dense code, -1 absent
    std::array<std::uint64_t, 257> c_table_{};    // C[c]: symbols smaller than c
    std::vector<wt_node> nodes_;
    std::uint32_t root_ = UINT32_MAX;
};

}  // namespace csd

#endif
