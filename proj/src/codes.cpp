#include "csd/codes.hpp"

#include <algorithm>
#include <cstring>
#include <queue>
#include <stdexcept>

namespace csd {

namespace {

inline bool stream_bit(std::span<const std::uint8_t> data, std::uint64_t pos) {
    return (data[pos / 8] >> (7 - pos % 8)) & 1;
}

struct sym_len {
    std::uint32_t sym;
    std::uint8_t len;
};

}  // namespace

int compare_encoded(const encoded_bits& a, const encoded_bits& b) {
    std::size_t n = std::min(a.bytes.size(), b.bytes.size());
    if (n > 0) {
        int c = std::memcmp(a.bytes.data(), b.bytes.data(), n);
        if (c != 0) return c;
    }
    if (a.bytes.size() != b.bytes.size())
        return a.bytes.size() < b.bytes.size() ? -1 : 1;
    if (a.bit_len != b.bit_len) return a.bit_len < b.bit_len ? -1 : 1;
    return 0;
}

unsigned prefix_code_table::alphabet_size() const {
    unsigned k = 0;
    for (const auto& c : code_)
        if (c.len > 0) ++k;
    return k;
}

void prefix_code_table::check_kraft() const {
    if (alphabet_size() < 2) return;  // a lone symbol gets a forced 1-bit code
    unsigned __int128 sum = 0;
    for (const auto& c : code_)
        if (c.len > 0) sum += static_cast<unsigned __int128>(1) << (64 - c.len);
    if (sum != static_cast<unsigned __int128>(1) << 64)
        throw build_error("prefix code violates Kraft equality");
}

prefix_code_table prefix_code_table::build_huffman(const symbol_freq_table& freqs) {
    auto syms = freqs.symbols();
    if (syms.empty()) throw std::invalid_argument("build_huffman: empty frequency table");

    prefix_code_table t;
    t.kind_ = code_kind::huffman;

    if (syms.size() == 1) {
        t.code_[syms[0]] = {0, 1};
    } else {
        // Merge the two lightest trees; ties broken by node id so builds are
        // reproducible.
        struct node {
            std::uint64_t w;
            std::int32_t left, right;
        };
        std::vector<node> pool;
        pool.reserve(syms.size() * 2);
        using qent = std::pair<std::uint64_t, std::uint32_t>;  // (weight, node id)
        std::priority_queue<qent, std::vector<qent>, std::greater<>> q;
        for (auto s : syms) {
            q.emplace(freqs.count(s), static_cast<std::uint32_t>(pool.size()));
            pool.push_back({freqs.count(s), -1, -1});
        }
        while (q.size() > 1) {
            auto [wa, a] = q.top();
            q.pop();
            auto [wb, b] = q.top();
            q.pop();
            q.emplace(wa + wb, static_cast<std::uint32_t>(pool.size()));
            pool.push_back({wa + wb, static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)});
        }
        // Leaf depths become code lengths.
        std::vector<std::pair<std::int32_t, std::uint32_t>> stack{{static_cast<std::int32_t>(pool.size() - 1), 0}};
        while (!stack.empty()) {
            auto [id, depth] = stack.back();
            stack.pop_back();
            const node& nd = pool[id];
            if (nd.left < 0) {
                if (depth > 64) throw build_error("huffman code length exceeds 64 bits");
                t.code_[syms[id]].len = static_cast<std::uint8_t>(depth);
            } else {
                stack.emplace_back(nd.left, depth + 1);
                stack.emplace_back(nd.right, depth + 1);
            }
        }
    }
    t.assign_canonical();
    t.check_kraft();
    return t;
}

void prefix_code_table::assign_canonical() {
    std::vector<sym_len> order;
    for (std::uint32_t s = 0; s < kSymbolSpace; ++s)
        if (code_[s].len > 0) order.push_back({s, code_[s].len});
    std::sort(order.begin(), order.end(), [](const sym_len& a, const sym_len& b) {
        return a.len != b.len ? a.len < b.len : a.sym < b.sym;
    });

    max_len_ = order.empty() ? 0 : order.back().len;
    first_code_.assign(max_len_ + 1, 0);
    first_index_.assign(max_len_ + 1, 0);
    len_count_.assign(max_len_ + 1, 0);
    syms_by_code_.clear();
    syms_by_code_.reserve(order.size());

    std::uint64_t code = 0;
    std::uint8_t prev_len = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& e = order[k];
        if (k == 0) {
            code = 0;
        } else {
            code = (code + 1) << (e.len - prev_len);
        }
        if (len_count_[e.len] == 0) {
            first_code_[e.len] = code;
            first_index_[e.len] = static_cast<std::uint32_t>(syms_by_code_.size());
        }
        ++len_count_[e.len];
        syms_by_code_.push_back(e.sym);
        code_[e.sym].bits = code;
        prev_len = e.len;
    }
}

prefix_code_table prefix_code_table::build_hu_tucker(const symbol_freq_table& freqs) {
    auto syms = freqs.symbols();
    if (syms.empty()) throw std::invalid_argument("build_hu_tucker: empty frequency table");

    prefix_code_table t;
    t.kind_ = code_kind::hu_tucker;

    if (syms.size() == 1) {
        t.code_[syms[0]].len = 1;
    } else {
        // Combination phase: repeatedly merge the lightest compatible pair,
        // where a pair is compatible if no terminal node lies between them.
        struct p1node {
            std::uint64_t w;
            bool terminal;
            std::int32_t left, right, sym;
        };
        std::vector<p1node> pool;
        std::vector<std::int32_t> seq;
        for (auto s : syms) {
            seq.push_back(static_cast<std::int32_t>(pool.size()));
            pool.push_back({freqs.count(s), true, -1, -1, static_cast<std::int32_t>(s)});
        }
        while (seq.size() > 1) {
            std::size_t best_i = 0, best_j = 0;
            std::uint64_t best_w = UINT64_MAX;
            for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
                for (std::size_t j = i + 1; j < seq.size(); ++j) {
                    std::uint64_t w = pool[seq[i]].w + pool[seq[j]].w;
                    if (w < best_w) {
                        best_w = w;
                        best_i = i;
                        best_j = j;
                    }
                    if (pool[seq[j]].terminal) break;
                }
            }
            std::int32_t id = static_cast<std::int32_t>(pool.size());
            pool.push_back({best_w, false, seq[best_i], seq[best_j], -1});
            seq[best_i] = id;
            seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(best_j));
        }
        // Leaf depths of the combination tree are the final code lengths.
        std::vector<std::pair<std::int32_t, std::uint32_t>> stack{{seq[0], 0}};
        while (!stack.empty()) {
            auto [id, depth] = stack.back();
            stack.pop_back();
            const p1node& nd = pool[id];
            if (nd.sym >= 0) {
                if (depth > 64) throw build_error("hu-tucker code length exceeds 64 bits");
                t.code_[nd.sym].len = static_cast<std::uint8_t>(depth == 0 ? 1 : depth);
            } else {
                stack.emplace_back(nd.left, depth + 1);
                stack.emplace_back(nd.right, depth + 1);
            }
        }
    }
    t.build_decode_tree();
    t.check_kraft();
    return t;
}

// Reconstructs the alphabetic code tree from the per-symbol lengths (the
// recombination phase): leaves are pushed in symbol order and the two most
// recent subtrees merge whenever their depths match.
void prefix_code_table::build_decode_tree() {
    tree_.clear();
    root_ = -1;
    max_len_ = 0;
    std::vector<std::pair<std::int32_t, std::uint32_t>> stack;
    unsigned nsyms = 0;
    for (std::uint32_t s = 0; s < kSymbolSpace; ++s) {
        if (code_[s].len == 0) continue;
        ++nsyms;
        max_len_ = std::max<unsigned>(max_len_, code_[s].len);
        tree_.push_back({-1, -1, static_cast<std::int32_t>(s)});
        stack.emplace_back(static_cast<std::int32_t>(tree_.size() - 1), code_[s].len);
        while (stack.size() >= 2 && stack[stack.size() - 1].second == stack[stack.size() - 2].second &&
               stack.back().second > 0) {
            auto [r, d] = stack.back();
            stack.pop_back();
            auto [l, d2] = stack.back();
            stack.pop_back();
            tree_.push_back({l, r, -1});
            stack.emplace_back(static_cast<std::int32_t>(tree_.size() - 1), d - 1);
        }
    }
    if (nsyms == 1) {
        // single-symbol alphabet: the lone 1-bit code 0
        tree_.push_back({0, -1, -1});
        root_ = static_cast<std::int32_t>(tree_.size() - 1);
        for (auto& c : code_)
            if (c.len > 0) c.bits = 0;
        return;
    }
    if (stack.size() != 1 || stack[0].second != 0)
        throw build_error("invalid alphabetic code length sequence");
    root_ = stack[0].first;

    // codeword bits follow the tree shape: left 0, right 1
    std::vector<std::tuple<std::int32_t, std::uint64_t, unsigned>> walk{{root_, 0, 0}};
    while (!walk.empty()) {
        auto [id, bits, len] = walk.back();
        walk.pop_back();
        const tree_node& nd = tree_[id];
        if (nd.sym >= 0) {
            code_[nd.sym].bits = bits;
            if (code_[nd.sym].len != len) throw build_error("alphabetic tree depth mismatch");
        } else {
            walk.emplace_back(nd.left, bits << 1, len + 1);
            walk.emplace_back(nd.right, (bits << 1) | 1, len + 1);
        }
    }
}

bool prefix_code_table::encodable(std::span<const std::uint8_t> s) const {
    for (std::uint8_t c : s)
        if (code_[c].len == 0) return false;
    return true;
}

void prefix_code_table::append_symbol(encoded_bits& out, std::uint32_t sym) const {
    const codeword& cw = code_.at(sym);
    if (cw.len == 0) throw coding_error("symbol without code");
    for (unsigned b = 0; b < cw.len; ++b) {
        if (out.bit_len % 8 == 0) out.bytes.push_back(0);
        if ((cw.bits >> (cw.len - 1 - b)) & 1) out.bytes.back() |= 1u << (7 - out.bit_len % 8);
        ++out.bit_len;
    }
}

encoded_bits prefix_code_table::encode(std::span<const std::uint8_t> s, bool add_terminator) const {
    encoded_bits out;
    for (std::uint8_t c : s) append_symbol(out, c);
    if (add_terminator) append_symbol(out, kEndOfString);
    return out;
}

std::uint32_t prefix_code_table::decode_one(std::span<const std::uint8_t> data, std::uint64_t& bitpos,
                                            std::uint64_t bit_limit) const {
    if (kind_ == code_kind::hu_tucker) {
        std::int32_t nd = root_;
        while (tree_[nd].sym < 0) {
            if (bitpos >= bit_limit) throw coding_error("dangling bits in code stream");
            std::int32_t nxt = stream_bit(data, bitpos) ? tree_[nd].right : tree_[nd].left;
            ++bitpos;
            if (nxt < 0) throw coding_error("invalid codeword");
            nd = nxt;
        }
        return static_cast<std::uint32_t>(tree_[nd].sym);
    }
    std::uint64_t acc = 0;
    for (unsigned len = 1; len <= max_len_; ++len) {
        if (bitpos >= bit_limit) throw coding_error("dangling bits in code stream");
        acc = (acc << 1) | (stream_bit(data, bitpos) ? 1u : 0u);
        ++bitpos;
        if (len_count_[len] && acc >= first_code_[len] && acc - first_code_[len] < len_count_[len])
            return syms_by_code_[first_index_[len] + (acc - first_code_[len])];
    }
    throw coding_error("invalid codeword");
}

std::string prefix_code_table::decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_len) const {
    std::string out;
    std::uint64_t pos = 0;
    while (pos < bit_len) {
        std::uint32_t sym = decode_one(bytes, pos, bit_len);
        if (sym == kEndOfString) break;
        out.push_back(static_cast<char>(static_cast<unsigned char>(sym)));
    }
    return out;
}

std::uint64_t prefix_code_table::total_encoded_bits(const symbol_freq_table& freqs) const {
    std::uint64_t total = 0;
    for (auto s : freqs.symbols()) {
        if (code_[s].len == 0) throw coding_error("symbol without code");
        total += freqs.count(s) * code_[s].len;
    }
    return total;
}

void prefix_code_table::save(byte_writer& w) const {
    w.u8(static_cast<std::uint8_t>(kind_));
    std::uint16_t n = 0;
    for (const auto& c : code_)
        if (c.len > 0) ++n;
    w.u16(n);
    for (std::uint32_t s = 0; s < kSymbolSpace; ++s)
        if (code_[s].len > 0) {
            w.u16(static_cast<std::uint16_t>(s));
            w.u8(code_[s].len);
        }
}

prefix_code_table prefix_code_table::load(byte_reader& r) {
    std::uint64_t start = r.position();
    prefix_code_table t;
    std::uint8_t kind = r.u8();
    if (kind > 1) throw format_error("bad code table kind", start);
    t.kind_ = static_cast<code_kind>(kind);
    std::uint16_t n = r.u16();
    if (n == 0 || n > kSymbolSpace) throw format_error("bad code table size", start);
    for (std::uint16_t k = 0; k < n; ++k) {
        std::uint16_t sym = r.u16();
        std::uint8_t len = r.u8();
        if (sym >= kSymbolSpace || len == 0 || len > 64 || t.code_[sym].len != 0)
            throw format_error("bad code table entry", r.position());
        t.code_[sym].len = len;
    }
    try {
        if (t.kind_ == code_kind::huffman)
            t.assign_canonical();
        else
            t.build_decode_tree();
        t.check_kraft();
    } catch (const build_error& e) {
        throw format_error(std::string("corrupt code table: ") + e.what(), start);
    }
    return t;
}

void vbyte_encode(std::uint64_t v, std::vector<std::uint8_t>& out) {
    while (true) {
        std::uint8_t chunk = static_cast<std::uint8_t>(v & 0x7F);
        v >>= 7;
        if (v == 0) {
            out.push_back(chunk | 0x80);  // stop bit on the final byte
            return;
        }
        out.push_back(chunk);
    }
}

std::pair<std::uint64_t, std::size_t> vbyte_decode(std::span<const std::uint8_t> bytes, std::size_t pos) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < 10; ++k) {
        if (pos + k >= bytes.size()) throw coding_error("truncated vbyte");
        std::uint8_t b = bytes[pos + k];
        v |= static_cast<std::uint64_t>(b & 0x7F) << (7 * k);
        if (b & 0x80) return {v, k + 1};
    }
    throw coding_error("vbyte missing stop bit");
}

}  // namespace csd
