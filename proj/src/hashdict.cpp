#include "csd/hashdict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csd {

namespace {

// Fixed seed primes so builds serialize reproducibly.
constexpr std::uint64_t kBernsteinSeed = 1048583;
constexpr std::uint32_t kRotatingSeed = 2097169;

std::span<const std::uint8_t> sv_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

std::uint64_t hash_bernstein(std::span<const std::uint8_t> key, std::uint64_t m) {
    std::uint64_t h = kBernsteinSeed;
    for (std::uint8_t c : key) h = (h * 32769 + c) % m;  // 2^15 + 1
    return h % m;
}

std::uint64_t hash_rotating(std::span<const std::uint8_t> key, std::uint64_t m) {
    std::uint32_t h = kRotatingSeed;
    for (std::uint8_t c : key) h = (h << 4) ^ (h >> 28) ^ c;
    return h % m;
}

std::uint64_t next_prime_at_least(std::uint64_t v) {
    if (v <= 2) return 2;
    if (v % 2 == 0) ++v;
    while (true) {
        bool prime = true;
        for (std::uint64_t d = 3; d * d <= v; d += 2)
            if (v % d == 0) {
                prime = false;
                break;
            }
        if (prime) return v;
        v += 2;
    }
}

std::uint64_t hashed_dictionary::probe_step(std::span<const std::uint8_t> key) const {
    if (policy_ == probe_policy::linear) return 1;
    return 1 + hash_rotating(key, m_ - 1);  // in [1, m-1], coprime with prime m
}

hashed_dictionary hashed_dictionary::build(std::span<const std::string> strings, hash_variant variant,
                                           probe_policy policy, double alpha, double x) {
    if (strings.empty()) throw build_error("hash build: no strings");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("hash build: alpha must be in (0,1)");
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("hash build: x must be in (0,1]");

    hashed_dictionary h;
    h.variant_ = variant;
    h.policy_ = policy;
    h.n_ = strings.size();
    h.alpha_ = alpha;
    h.x_ = x;
    h.m_ = next_prime_at_least(static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(h.n_) / alpha)));
    if (h.m_ <= h.n_) h.m_ = next_prime_at_least(h.n_ + 1);

    h.huff_ = prefix_code_table::build_huffman(symbol_freq_table::from_strings(strings, true));

    // Hashing operates over the encoded keys.
    std::vector<std::vector<std::uint8_t>> keys(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i)
        keys[i] = h.huff_.encode(sv_bytes(strings[i]), true).bytes;

    std::vector<std::int64_t> cell_to_key(h.m_, -1);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::uint64_t cell = hash_bernstein(keys[i], h.m_);
        std::uint64_t step = h.probe_step(keys[i]);
        while (cell_to_key[cell] >= 0) {
            if (keys[static_cast<std::size_t>(cell_to_key[cell])] == keys[i])
                throw build_error("hash build: duplicate string");
            cell = (cell + step) % h.m_;
        }
        cell_to_key[cell] = static_cast<std::int64_t>(i);
    }

    // Payload in final table order; offsets are increasing by construction.
    std::vector<std::uint64_t> cell_offsets(h.m_, 0);  // offset+1, 0 = empty
    for (std::uint64_t c = 0; c < h.m_; ++c) {
        if (cell_to_key[c] < 0) continue;
        const auto& k = keys[static_cast<std::size_t>(cell_to_key[c])];
        cell_offsets[c] = h.payload_.size() + 1;
        h.payload_.insert(h.payload_.end(), k.begin(), k.end());
    }

    std::uint64_t nbytes = h.payload_.size();
    unsigned width = bits_needed(nbytes);
    if (variant == hash_variant::plain) {
        h.offsets_ = packed_vector(h.m_, width);
        for (std::uint64_t c = 0; c < h.m_; ++c) h.offsets_.set(c, cell_offsets[c]);
    } else {
        bit_buffer occ;
        for (std::uint64_t c = 0; c < h.m_; ++c) occ.push_back(cell_offsets[c] != 0);
        h.occupancy_ = bit_sequence(occ, bit_layout::rg, x);
        if (variant == hash_variant::compact) {
            h.offsets_ = packed_vector(h.n_, width);
            std::uint64_t i = 0;
            for (std::uint64_t c = 0; c < h.m_; ++c)
                if (cell_offsets[c] != 0) h.offsets_.set(i++, cell_offsets[c] - 1);
        } else {
            bit_buffer starts(nbytes, false);
            for (std::uint64_t c = 0; c < h.m_; ++c)
                if (cell_offsets[c] != 0) starts.set(cell_offsets[c] - 1, true);
            h.starts_ = bit_sequence(starts, bit_layout::rrr, x);
        }
    }
    return h;
}

bool hashed_dictionary::key_matches(std::uint64_t offset, std::span<const std::uint8_t> key) const {
    if (offset + key.size() > payload_.size()) return false;
    return std::equal(key.begin(), key.end(), payload_.begin() + static_cast<std::ptrdiff_t>(offset));
}

std::int64_t hashed_dictionary::locate(std::string_view s) const {
    std::uint64_t probes = 0;
    return locate_probed(s, probes);
}

std::int64_t hashed_dictionary::locate_probed(std::string_view s, std::uint64_t& probes) const {
    probes = 0;
    if (!huff_.encodable(sv_bytes(s))) return -1;  // cannot be a member
    auto key = huff_.encode(sv_bytes(s), true).bytes;
    std::uint64_t cell = hash_bernstein(key, m_);
    std::uint64_t step = probe_step(key);

    if (variant_ == hash_variant::plain) {
        for (std::uint64_t k = 0; k < m_; ++k) {
            ++probes;
            std::uint64_t v = offsets_.get(cell);
            if (v == 0) return -1;
            if (key_matches(v - 1, key)) return static_cast<std::int64_t>(cell + 1);
            cell = (cell + step) % m_;
        }
        return -1;
    }

    // Compact variants: with linear probing the rank is computed once and the
    // compact index advances with the occupancy bits.
    std::uint64_t idx = 0;
    bool have_idx = false;
    for (std::uint64_t k = 0; k < m_; ++k) {
        ++probes;
        bool occupied = occupancy_.access(cell + 1);
        if (!occupied) return -1;
        if (!have_idx) {
            idx = occupancy_.rank1(cell + 1);
            have_idx = true;
        }
        std::uint64_t offset = variant_ == hash_variant::compact ? offsets_.get(idx - 1)
                                                                 : starts_.select1(idx) - 1;
        if (key_matches(offset, key)) return static_cast<std::int64_t>(idx);
        if (policy_ == probe_policy::linear) {
            if (cell + 1 == m_) {  // wrap: restart at cell 1, whose rank is its own bit
                cell = 0;
                idx = 1;
                // occupancy of cell 1 checked at loop top; idx valid only if occupied
            } else {
                ++cell;
                ++idx;
            }
        } else {
            cell = (cell + step) % m_;
            have_idx = false;  // non-contiguous cell needs a fresh rank
        }
    }
    return -1;
}

std::string hashed_dictionary::decode_at(std::uint64_t offset) const {
    std::span<const std::uint8_t> tail(payload_.data() + offset, payload_.size() - offset);
    return huff_.decode(tail, 8 * tail.size());
}

std::optional<std::string> hashed_dictionary::extract(std::uint64_t id) const {
    if (id < 1 || id > id_space()) return std::nullopt;
    if (variant_ == hash_variant::plain) {
        std::uint64_t v = offsets_.get(id - 1);
        if (v == 0) return std::nullopt;  // empty cell
        return decode_at(v - 1);
    }
    if (variant_ == hash_variant::compact) return decode_at(offsets_.get(id - 1));
    return decode_at(starts_.select1(id) - 1);
}

std::uint64_t hashed_dictionary::size_in_bits() const {
    byte_writer w;
    save(w);
    return 8 * w.position();
}

void hashed_dictionary::save(byte_writer& w) const {
    w.u8(static_cast<std::uint8_t>(variant_));
    w.u8(static_cast<std::uint8_t>(policy_));
    w.u64(m_);
    w.u64(n_);
    w.f64(alpha_);
    w.f64(x_);
    huff_.save(w);
    w.u64(payload_.size());
    w.bytes(payload_);
    if (variant_ == hash_variant::plain) {
        offsets_.save(w);
    } else {
        occupancy_.save(w);
        if (variant_ == hash_variant::compact)
            offsets_.save(w);
        else
            starts_.save(w);
    }
}

hashed_dictionary hashed_dictionary::load(byte_reader& r) {
    std::uint64_t start = r.position();
    hashed_dictionary h;
    std::uint8_t variant = r.u8();
    std::uint8_t policy = r.u8();
    if (variant > 2 || policy > 1) throw format_error("bad hash dictionary tags", start);
    h.variant_ = static_cast<hash_variant>(variant);
    h.policy_ = static_cast<probe_policy>(policy);
    h.m_ = r.u64();
    h.n_ = r.u64();
    h.alpha_ = r.f64();
    h.x_ = r.f64();
    if (h.n_ == 0 || h.m_ <= h.n_) throw format_error("bad hash dictionary sizes", start);
    h.huff_ = prefix_code_table::load(r);
    std::uint64_t nbytes = r.u64();
    h.payload_ = r.bytes(nbytes);
    if (h.variant_ == hash_variant::plain) {
        h.offsets_ = packed_vector::load(r);
        if (h.offsets_.size() != h.m_) throw format_error("hash offset table size mismatch", r.position());
    } else {
        h.occupancy_ = bit_sequence::load(r);
        if (h.occupancy_.size() != h.m_ || h.occupancy_.ones() != h.n_)
            throw format_error("hash occupancy mismatch", r.position());
        if (h.variant_ == hash_variant::compact) {
            h.offsets_ = packed_vector::load(r);
            if (h.offsets_.size() != h.n_) throw format_error("hash offset table size mismatch", r.position());
        } else {
            h.starts_ = bit_sequence::load(r);
            if (h.starts_.size() != nbytes || h.starts_.ones() != h.n_)
                throw format_error("hash start bitmap mismatch", r.position());
        }
    }
    return h;
}

}  // namespace csd
