#include "csd/fcdict.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace csd {

namespace {

std::span<const std::uint8_t> sv_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::size_t common_prefix(std::string_view a, std::string_view b) {
    std::size_t n = std::min(a.size(), b.size()), k = 0;
    while (k < n && a[k] == b[k]) ++k;
    return k;
}

int compare_bytes(std::string_view a, std::string_view b) {
    std::size_t n = std::min(a.size(), b.size());
    if (n > 0) {
        int c = std::memcmp(a.data(), b.data(), n);
        if (c != 0) return c;
    }
    return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
}

// The differential entry stream shared by both variants: Vbyte(lcp), suffix
// bytes, zero terminator.
void append_entry_bytes(std::vector<std::uint8_t>& out, std::size_t lcp, std::string_view suffix) {
    vbyte_encode(lcp, out);
    out.insert(out.end(), suffix.begin(), suffix.end());
    out.push_back(0);
}

}  // namespace

// Sequential reader over one bucket; keeps the reconstructed current string.
struct front_coded_dictionary::bucket_reader {
    const front_coded_dictionary& d;
    std::uint64_t bitpos = 0;  // cursor into blob, in bits
    std::string cur;

    bucket_reader(const front_coded_dictionary& dict, std::uint64_t bucket) : d(dict) {
        std::uint64_t off = d.bucket_offsets_.get(bucket);
        if (d.kind_ == fc_kind::plain) {
            bitpos = 8 * off;
            cur = read_plain_until_zero();
        } else {
            auto [enc_len, used] = vbyte_decode(d.blob_, off);
            std::uint64_t head_bits = 8 * (off + used);
            cur.clear();
            while (true) {
                std::uint32_t sym = d.code_.decode_one(d.blob_, head_bits, 8 * d.blob_.size());
                if (sym == 0) break;
                cur.push_back(static_cast<char>(static_cast<unsigned char>(sym)));
            }
            bitpos = 8 * (off + used + enc_len);  // followers start after the padded head
        }
    }

    void next() {
        std::uint64_t lcp;
        std::string suffix;
        if (d.kind_ == fc_kind::plain) {
            auto [v, used] = vbyte_decode(d.blob_, bitpos / 8);
            lcp = v;
            bitpos += 8 * used;
            suffix = read_plain_until_zero();
        } else {
            lcp = decode_vbyte_bits();
            while (true) {
                std::uint32_t sym = d.code_.decode_one(d.blob_, bitpos, 8 * d.blob_.size());
                if (sym == 0) break;
                suffix.push_back(static_cast<char>(static_cast<unsigned char>(sym)));
            }
        }
        if (lcp > cur.size()) throw format_error("front coding: bad shared prefix length", bitpos / 8);
        cur.resize(lcp);
        cur += suffix;
    }

private:
    std::string read_plain_until_zero() {
        std::string out;
        std::uint64_t p = bitpos / 8;
        while (p < d.blob_.size() && d.blob_[p] != 0) out.push_back(static_cast<char>(d.blob_[p++]));
        if (p >= d.blob_.size()) throw format_error("front coding: unterminated entry", p);
        bitpos = 8 * (p + 1);
        return out;
    }

    std::uint64_t decode_vbyte_bits() {
        std::uint64_t v = 0;
        for (unsigned k = 0; k < 10; ++k) {
            std::uint32_t byte = d.code_.decode_one(d.blob_, bitpos, 8 * d.blob_.size());
            v |= static_cast<std::uint64_t>(byte & 0x7F) << (7 * k);
            if (byte & 0x80) return v;
        }
        throw format_error("front coding: runaway shared prefix length", bitpos / 8);
    }
};

// Prepared query: raw bytes plus (for HTFC) the zero-terminated encoding when
// every byte has a code.
struct front_coded_dictionary::query {
    std::string_view raw;
    bool encodable = false;
    encoded_bits enc;
};

front_coded_dictionary front_coded_dictionary::build(std::span<const std::string> sorted_unique,
                                                     fc_kind kind, unsigned bucket_size) {
    if (sorted_unique.empty()) throw build_error("front coding build: no strings");
    if (bucket_size < 2) throw std::invalid_argument("front coding build: bucket size must be >= 2");
    for (std::size_t i = 0; i < sorted_unique.size(); ++i) {
        if (sorted_unique[i].find('\0') != std::string::npos)
            throw build_error("front coding build: string contains a zero byte");
        if (i > 0 && compare_bytes(sorted_unique[i - 1], sorted_unique[i]) >= 0)
            throw build_error("front coding build: input not strictly sorted");
    }

    front_coded_dictionary d;
    d.kind_ = kind;
    d.b_ = bucket_size;
    d.n_ = sorted_unique.size();

    // The exact plain-format byte stream; HTFC gathers its frequencies from it
    // so strings and Vbyte codes share one code.
    std::vector<std::uint64_t> offsets;
    if (kind == fc_kind::plain) {
        for (std::uint64_t i = 0; i < d.n_; ++i) {
            if (i % d.b_ == 0) {
                offsets.push_back(d.blob_.size());
                d.blob_.insert(d.blob_.end(), sorted_unique[i].begin(), sorted_unique[i].end());
                d.blob_.push_back(0);
            } else {
                std::size_t lcp = common_prefix(sorted_unique[i - 1], sorted_unique[i]);
                append_entry_bytes(d.blob_, lcp, std::string_view(sorted_unique[i]).substr(lcp));
            }
        }
    } else {
        std::vector<std::uint8_t> pfc_stream;
        for (std::uint64_t i = 0; i < d.n_; ++i) {
            if (i % d.b_ == 0) {
                pfc_stream.insert(pfc_stream.end(), sorted_unique[i].begin(), sorted_unique[i].end());
                pfc_stream.push_back(0);
            } else {
                std::size_t lcp = common_prefix(sorted_unique[i - 1], sorted_unique[i]);
                append_entry_bytes(pfc_stream, lcp, std::string_view(sorted_unique[i]).substr(lcp));
            }
        }
        d.code_ = prefix_code_table::build_hu_tucker(symbol_freq_table::from_bytes(pfc_stream));

        encoded_bits followers;
        std::vector<std::uint8_t> entry;
        for (std::uint64_t i = 0; i < d.n_; ++i) {
            if (i % d.b_ == 0) {
                if (i > 0) {
                    d.blob_.insert(d.blob_.end(), followers.bytes.begin(), followers.bytes.end());
                    followers = encoded_bits{};
                }
                offsets.push_back(d.blob_.size());
                encoded_bits head = d.code_.encode(sv_bytes(sorted_unique[i]), false);
                d.code_.append_symbol(head, 0);
                vbyte_encode(head.bytes.size(), d.blob_);
                d.blob_.insert(d.blob_.end(), head.bytes.begin(), head.bytes.end());
            } else {
                std::size_t lcp = common_prefix(sorted_unique[i - 1], sorted_unique[i]);
                entry.clear();
                append_entry_bytes(entry, lcp, std::string_view(sorted_unique[i]).substr(lcp));
                for (std::uint8_t byte : entry) d.code_.append_symbol(followers, byte);
            }
        }
        d.blob_.insert(d.blob_.end(), followers.bytes.begin(), followers.bytes.end());
    }

    unsigned width = bits_needed(d.blob_.size());
    d.bucket_offsets_ = packed_vector(offsets.size(), width);
    for (std::uint64_t k = 0; k < offsets.size(); ++k) d.bucket_offsets_.set(k, offsets[k]);
    return d;
}

int front_coded_dictionary::compare_with_head(const query& q, std::uint64_t bucket) const {
    std::uint64_t off = bucket_offsets_.get(bucket);
    if (kind_ == fc_kind::plain) {
        std::uint64_t p = off;
        for (char c : q.raw) {
            std::uint8_t stored = blob_[p];
            if (stored == 0) return 1;  // head is a proper prefix of q
            auto qc = static_cast<std::uint8_t>(c);
            if (qc != stored) return qc < stored ? -1 : 1;
            ++p;
        }
        return blob_[p] == 0 ? 0 : -1;
    }
    auto [enc_len, used] = vbyte_decode(blob_, off);
    if (q.encodable) {
        // Bytewise comparison of the encoded forms, no decompression; a full
        // prefix tie is broken by the stored encoded length.
        std::uint64_t head_start = off + used;
        std::size_t common = std::min<std::size_t>(q.enc.bytes.size(), enc_len);
        int c = common ? std::memcmp(q.enc.bytes.data(), blob_.data() + head_start, common) : 0;
        if (c != 0) return c;
        if (q.enc.bytes.size() == enc_len) return 0;
        return q.enc.bytes.size() < enc_len ? -1 : 1;
    }
    // Rare path: the query has a byte the code cannot represent; decode the
    // head and compare plainly.
    std::uint64_t bits = 8 * (off + used);
    std::string head;
    while (true) {
        std::uint32_t sym = code_.decode_one(blob_, bits, 8 * blob_.size());
        if (sym == 0) break;
        head.push_back(static_cast<char>(static_cast<unsigned char>(sym)));
    }
    return compare_bytes(q.raw, head);
}

std::pair<std::uint64_t, bool> front_coded_dictionary::search(std::string_view s) const {
    query q;
    q.raw = s;
    if (kind_ == fc_kind::hu_tucker) {
        q.encodable = code_.encodable(sv_bytes(s)) && code_.has_code(0);
        if (q.encodable) {
            q.enc = code_.encode(sv_bytes(s), false);
            code_.append_symbol(q.enc, 0);
        }
    }

    // Last bucket whose head is <= q, by binary search on the heads.
    std::uint64_t nb = bucket_count();
    std::uint64_t lo = 0, hi = nb;  // invariant: heads before lo are <= q
    while (lo < hi) {
        std::uint64_t mid = (lo + hi) / 2;
        int c = compare_with_head(q, mid);
        if (c < 0)
            hi = mid;
        else if (c == 0)
            return {mid * b_ + 1, true};
        else
            lo = mid + 1;
    }
    if (lo == 0) return {1, false};  // q precedes the first string
    std::uint64_t bucket = lo - 1;

    bucket_reader reader(*this, bucket);
    std::uint64_t entries = bucket_entries(bucket);
    std::uint64_t id = bucket * b_ + 1;
    // head already known <= q
    for (std::uint64_t e = 1; e < entries; ++e) {
        reader.next();
        ++id;
        int c = compare_bytes(s, reader.cur);
        if (c == 0) return {id, true};
        if (c < 0) return {id, false};
    }
    return {id + 1, false};
}

std::int64_t front_coded_dictionary::locate(std::string_view s) const {
    auto [id, exact] = search(s);
    return exact ? static_cast<std::int64_t>(id) : -1;
}

std::optional<std::string> front_coded_dictionary::extract(std::uint64_t id) const {
    if (id < 1 || id > n_) return std::nullopt;
    std::uint64_t bucket = (id - 1) / b_;
    bucket_reader reader(*this, bucket);
    for (std::uint64_t e = (id - 1) % b_; e > 0; --e) reader.next();
    return reader.cur;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> front_coded_dictionary::locate_prefix(
    std::string_view q) const {
    if (q.empty()) return std::make_pair<std::uint64_t, std::uint64_t>(1, std::uint64_t(n_));
    std::uint64_t lo = search(q).first;
    // successor of the prefix range: strip trailing 0xFF, bump the last byte
    std::string succ(q);
    while (!succ.empty() && static_cast<std::uint8_t>(succ.back()) == 0xFF) succ.pop_back();
    std::uint64_t hi;
    if (succ.empty()) {
        hi = n_;
    } else {
        succ.back() = static_cast<char>(static_cast<std::uint8_t>(succ.back()) + 1);
        hi = search(succ).first - 1;
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

std::uint64_t front_coded_dictionary::size_in_bits() const {
    byte_writer w;
    save(w);
    return 8 * w.position();
}

void front_coded_dictionary::save(byte_writer& w) const {
    w.u8(static_cast<std::uint8_t>(kind_));
    w.u32(b_);
    w.u64(n_);
    w.u64(blob_.size());
    w.bytes(blob_);
    bucket_offsets_.save(w);
    if (kind_ == fc_kind::hu_tucker) code_.save(w);
}

front_coded_dictionary front_coded_dictionary::load(byte_reader& r) {
    std::uint64_t start = r.position();
    front_coded_dictionary d;
    std::uint8_t kind = r.u8();
    if (kind > 1) throw format_error("bad front coding kind", start);
    d.kind_ = static_cast<fc_kind>(kind);
    d.b_ = r.u32();
    d.n_ = r.u64();
    if (d.b_ < 2 || d.n_ == 0) throw format_error("bad front coding header", start);
    std::uint64_t blob = r.u64();
    d.blob_ = r.bytes(blob);
    d.bucket_offsets_ = packed_vector::load(r);
    if (d.bucket_offsets_.size() != d.bucket_count())
        throw format_error("front coding bucket table mismatch", r.position());
    if (d.kind_ == fc_kind::hu_tucker) d.code_ = prefix_code_table::load(r);
    return d;
}

}  // namespace csd
