#ifndef CSD_REPAIR_HPP
#define CSD_REPAIR_HPP

// repair.hpp - Re-Pair grammar compression.
//
// Repeatedly replaces the most frequent adjacent symbol pair with a fresh
// nonterminal until every remaining pair is unique. Pair frequency counts
// non-overlapping occurrences left to right (a run of k equal symbols holds
// floor(k/2) occurrences of its square pair); equally frequent pairs tie to
// the numerically smallest (left, right). Pairs containing the forbidden
// symbol are never formed, so runs of symbols separated by it stay intact.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace csd {

inline constexpr std::uint32_t kNoForbiddenSymbol = UINT32_MAX;

struct repair_grammar {
    std::uint32_t alphabet_size = 0;  // terminals are [0, alphabet_size)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rules;  // rule k = symbol alphabet_size+k
    std::vector<std::uint32_t> sequence;

    std::uint32_t symbol_space() const {
        return alphabet_size + static_cast<std::uint32_t>(rules.size());
    }
};

repair_grammar repair_compress(std::span<const std::uint32_t> text, std::uint32_t alphabet_size,
                               std::uint32_t forbidden = kNoForbiddenSymbol);

}  // namespace csd

#endif
