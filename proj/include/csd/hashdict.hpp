#ifndef CSD_HASHDICT_HPP
#define CSD_HASHDICT_HPP

// hashdict.hpp - closed-hashing string dictionaries over Huffman-encoded
// payloads.
//
// Strings are Huffman-encoded with a reserved end-of-string symbol, padded to
// whole bytes, and both hashing and key comparison operate on those encoded
// bytes. The encoded payloads are concatenated in the order the keys land in
// the table, so per-cell offsets are increasing. Three table representations:
//
//   plain      (Hash)   - offset table H[1,m]; ids are table cells in [1,m]
//   compact    (HashB)  - occupancy bitmap B[1,m] (RG) + packed offsets
//                         M[1,n]; ids are compact in [1,n]
//   compact_bb (HashBB) - B plus a code-start bitmap Y[1,N] (RRR) replacing
//                         M via M[i] = select1(Y, i)
//
// Collisions probe linearly (lp) or by double hashing (dh). The table size is
// the smallest prime >= n/alpha, so the dh step is always coprime with it.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csd/bits.hpp"
#include "csd/bitseq.hpp"
#include "csd/codes.hpp"
#include "csd/io.hpp"

namespace csd {

enum class hash_variant : std::uint8_t { plain = 0, compact = 1, compact_bb = 2 };
enum class probe_policy : std::uint8_t { linear = 0, double_hash = 1 };

// Bernstein's hash with multiplier 2^15+1, reduced modulo m each step.
std::uint64_t hash_bernstein(std::span<const std::uint8_t> key, std::uint64_t m);
// Knuth's rotating hash over 32-bit words; drives the double-hashing step.
std::uint64_t hash_rotating(std::span<const std::uint8_t> key, std::uint64_t m);

std::uint64_t next_prime_at_least(std::uint64_t v);

class hashed_dictionary {
public:
    hashed_dictionary() = default;

    static hashed_dictionary build(std::span<const std::string> strings, hash_variant variant,
                                   probe_policy policy, double alpha, double x);

    std::int64_t locate(std::string_view s) const;
    // Same as locate but reports the number of probed cells.
    std::int64_t locate_probed(std::string_view s, std::uint64_t& probes) const;
    std::optional<std::string> extract(std::uint64_t id) const;

    hash_variant variant() const { return variant_; }
    probe_policy policy() const { return policy_; }
    std::uint64_t string_count() const { return n_; }
    std::uint64_t table_size() const { return m_; }
    std::uint64_t payload_bytes() const { return payload_.size(); }
    // Largest id extract can return a string for.
    std::uint64_t id_space() const { return variant_ == hash_variant::plain ? m_ : n_; }

    std::uint64_t size_in_bits() const;
    void save(byte_writer& w) const;
    static hashed_dictionary load(byte_reader& r);

private:
    std::uint64_t probe_step(std::span<const std::uint8_t> key) const;
    bool key_matches(std::uint64_t offset, std::span<const std::uint8_t> key) const;
    std::string decode_at(std::uint64_t offset) const;

    hash_variant variant_ = hash_variant::plain;
    probe_policy policy_ = probe_policy::double_hash;
    std::uint64_t m_ = 0;
    std::uint64_t n_ = 0;
    double alpha_ = 0.0;
    double x_ = 0.1;
    prefix_code_table huff_;
    std::vector<std::uint8_t> payload_;  // encoded strings, table order
    packed_vector offsets_;              // plain: H[1,m] as offset+1 (0 empty); compact: M[1,n]
    bit_sequence occupancy_;             // compact variants: B[1,m]
    bit_sequence starts_;                // compact_bb: Y[1,N]
};

}  // namespace csd

#endif
