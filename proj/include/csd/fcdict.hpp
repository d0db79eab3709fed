#ifndef CSD_FCDICT_HPP
#define CSD_FCDICT_HPP

// fcdict.hpp - bucketed Front-Coding dictionaries over sorted strings.
//
// Strings are stored in lexicographic order; the id of a string is its sorted
// rank. Every bucket starts with a fully stored head, followers keep only
// Vbyte(shared prefix length) plus their suffix, zero-byte terminated. The
// plain variant (PFC) stores those bytes directly. The compressed variant
// (HTFC) encodes the same byte stream with a single Hu-Tucker code; a bucket
// head is padded to a byte boundary and preceded by its encoded byte length
// so binary search can compare heads without decompressing them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csd/bits.hpp"
#include "csd/codes.hpp"
#include "csd/io.hpp"

namespace csd {

enum class fc_kind : std::uint8_t { plain = 0, hu_tucker = 1 };

class front_coded_dictionary {
public:
    front_coded_dictionary() = default;

    static front_coded_dictionary build(std::span<const std::string> sorted_unique, fc_kind kind,
                                        unsigned bucket_size);

    std::int64_t locate(std::string_view s) const;
    std::optional<std::string> extract(std::uint64_t id) const;
    // Maximal contiguous id range whose strings start with q.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> locate_prefix(std::string_view q) const;

    fc_kind kind() const { return kind_; }
    unsigned bucket_size() const { return b_; }
    std::uint64_t string_count() const { return n_; }
    std::uint64_t blob_bytes() const { return blob_.size(); }
    const std::vector<std::uint8_t>& blob() const { return blob_; }

    std::uint64_t size_in_bits() const;
    void save(byte_writer& w) const;
    static front_coded_dictionary load(byte_reader& r);

private:
    struct bucket_reader;
    struct query;

    std::uint64_t bucket_count() const { return (n_ + b_ - 1) / b_; }
    std::uint64_t bucket_entries(std::uint64_t k) const {
        return std::min<std::uint64_t>(b_, n_ - k * b_);
    }
    int compare_with_head(const query& q, std::uint64_t bucket) const;
    // First id whose string is >= q (n+1 if none) and whether it equals q.
    std::pair<std::uint64_t, bool> search(std::string_view q) const;

    fc_kind kind_ = fc_kind::plain;
    unsigned b_ = 8;
    std::uint64_t n_ = 0;
    std::vector<std::uint8_t> blob_;
    packed_vector bucket_offsets_;
    prefix_code_table code_;  // hu_tucker kind only
};

}  // namespace csd

#endif
