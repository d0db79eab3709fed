#ifndef CSD_CODES_HPP
#define CSD_CODES_HPP

// codes.hpp - statistical prefix codes over byte symbols.
//
// Two constructions share one table type: canonical Huffman (optimal) and
// Hu-Tucker (optimal among codes that preserve the symbol order, so encoded
// strings compare like the originals). Symbol 256 is a reserved end-of-string
// marker used by encoders that need self-delimiting payloads after zero
// padding. Code streams are MSB-first within each byte, which makes bytewise
// comparison of padded Hu-Tucker streams equivalent to bitwise comparison.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csd/io.hpp"

namespace csd {

inline constexpr std::uint32_t kEndOfString = 256;
inline constexpr std::uint32_t kSymbolSpace = 257;

class symbol_freq_table {
public:
    void add(std::uint32_t sym, std::uint64_t count = 1) { freq_.at(sym) += count; }
    std::uint64_t count(std::uint32_t sym) const { return freq_.at(sym); }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto f : freq_) t += f;
        return t;
    }
    unsigned alphabet_size() const {
        unsigned k = 0;
        for (auto f : freq_)
            if (f > 0) ++k;
        return k;
    }
    std::vector<std::uint32_t> symbols() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t s = 0; s < kSymbolSpace; ++s)
            if (freq_[s] > 0) out.push_back(s);
        return out;
    }

    static symbol_freq_table from_strings(std::span<const std::string> strings, bool with_terminator) {
        symbol_freq_table t;
        for (const auto& s : strings) {
            for (unsigned char c : s) t.add(c);
            if (with_terminator) t.add(kEndOfString);
        }
        return t;
    }
    static symbol_freq_table from_bytes(std::span<const std::uint8_t> bytes) {
        symbol_freq_table t;
        for (std::uint8_t c : bytes) t.add(c);
        return t;
    }

private:
    std::array<std::uint64_t, kSymbolSpace> freq_{};
};

struct codeword {
    std::uint64_t bits = 0;  // value of the codeword, MSB = first bit
    std::uint8_t len = 0;    // 0 means the symbol has no code
    bool operator==(const codeword&) const = default;
};

struct encoded_bits {
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_len = 0;  // meaningful bits, padding excluded
};

// Lexicographic comparison of two encoded streams; a full-prefix tie is
// broken by bit length (shorter is smaller).
int compare_encoded(const encoded_bits& a, const encoded_bits& b);

class prefix_code_table {
public:
    enum class code_kind : std::uint8_t { huffman = 0, hu_tucker = 1 };

    prefix_code_table() = default;
    static prefix_code_table build_huffman(const symbol_freq_table& freqs);
    static prefix_code_table build_hu_tucker(const symbol_freq_table& freqs);

    code_kind kind() const { return kind_; }
    bool has_code(std::uint32_t sym) const { return sym < kSymbolSpace && code_[sym].len > 0; }
    codeword code(std::uint32_t sym) const { return code_.at(sym); }
    unsigned max_code_len() const { return max_len_; }
    unsigned alphabet_size() const;

    bool encodable(std::span<const std::uint8_t> s) const;
    // Concatenated codewords; bytes are sized to the next byte boundary with
    // zero padding bits, bit_len excludes the padding.
    encoded_bits encode(std::span<const std::uint8_t> s, bool add_terminator) const;
    void append_symbol(encoded_bits& out, std::uint32_t sym) const;

    // Decodes one symbol from an MSB-first stream, advancing bitpos.
    std::uint32_t decode_one(std::span<const std::uint8_t> data, std::uint64_t& bitpos,
                             std::uint64_t bit_limit) const;
    // Decodes until the terminator symbol or bit_len, whichever comes first.
    std::string decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_len) const;

    std::uint64_t total_encoded_bits(const symbol_freq_table& freqs) const;

    void save(byte_writer& w) const;
    static prefix_code_table load(byte_reader& r);

    bool operator==(const prefix_code_table&) const = default;

private:
    void assign_canonical();   // codes from lengths, huffman numbering
    void build_decode_tree();  // alphabetic tree from lengths (hu-tucker)
    void check_kraft() const;

    code_kind kind_ = code_kind::huffman;
    std::array<codeword, kSymbolSpace> code_{};
    unsigned max_len_ = 0;

    // canonical decode tables (huffman)
    std::vector<std::uint32_t> syms_by_code_;
    std::vector<std::uint64_t> first_code_;   // per length 0..max_len_
    std::vector<std::uint32_t> first_index_;  // per length, into syms_by_code_
    std::vector<std::uint32_t> len_count_;

    // decode tree (hu-tucker): leaves carry sym, internal nodes children
    struct tree_node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t sym = -1;
        bool operator==(const tree_node&) const = default;
    };
    std::vector<tree_node> tree_;
    std::int32_t root_ = -1;
};

void vbyte_encode(std::uint64_t v, std::vector<std::uint8_t>& out);
// Returns (value, bytes consumed); throws coding_error on a missing stop bit
// or truncated input.
std::pair<std::uint64_t, std::size_t> vbyte_decode(std::span<const std::uint8_t> bytes, std::size_t pos);

}  // namespace csd

#endif
