#ifndef CSD_RPDICT_HPP
#define CSD_RPDICT_HPP

// rpdict.hpp - Re-Pair compressed dictionary.
//
// The terminator-joined concatenation of the sorted strings is grammar
// compressed (rules never contain the terminator, so every string maps to a
// whole number of grammar symbols), the compressed sequence is split at the
// terminators, and the per-string symbol runs go into a DAC for direct
// access. locate binary-searches the ids, expanding each candidate lazily one
// grammar symbol at a time and stopping as soon as the comparison is decided.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csd/dac.hpp"
#include "csd/io.hpp"
#include "csd/repair.hpp"

namespace csd {

class repair_dictionary {
public:
    repair_dictionary() = default;

    static repair_dictionary build(std::span<const std::string> sorted_unique);

    std::int64_t locate(std::string_view p) const;
    std::optional<std::string> extract(std::uint64_t id) const;

    std::uint64_t string_count() const { return n_; }
    std::uint32_t terminal_count() const { return sigma_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& rules() const { return rules_; }
    std::uint64_t sequence_symbols() const { return runs_.total_symbols(); }

    // Expansion of one grammar symbol (terminals map to their byte).
    std::string expand_symbol(std::uint32_t sym) const;
    // Three-way comparison of stored string id against p; reports how many
    // top-level grammar symbols were expanded before deciding.
    int compare_with(std::uint64_t id, std::string_view p, std::uint64_t* symbols_expanded) const;

    std::uint64_t size_in_bits() const;
    void save(byte_writer& w) const;
    static repair_dictionary load(byte_reader& r);

private:
    void expand_append(std::uint32_t sym, std::string& out) const;
    unsigned symbol_width() const;

    std::uint32_t sigma_ = 256;
    std::uint64_t n_ = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rules_;
    dac_array runs_;
};

}  // namespace csd

#endif
