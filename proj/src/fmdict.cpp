#include "csd/fmdict.hpp"

#include <algorithm>
#include <stdexcept>

#include "csd/bits.hpp"

namespace csd {

std::vector<std::uint32_t> suffix_array_doubling(std::span<const std::uint8_t> text) {
    // Cyclic doubling over text plus a unique smallest sentinel; the cyclic
    // order of the extended string restricted to real positions is exactly
    // the suffix order of the text.
    std::size_t n = text.size() + 1;
    std::vector<std::uint32_t> s(n);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = static_cast<std::uint32_t>(text[i]) + 1;
    s[n - 1] = 0;

    std::vector<std::uint32_t> sa(n), rank(n), tmp(n), pn(n), cnt;
    std::uint32_t classes = 257;
    cnt.assign(std::max<std::size_t>(classes, n) + 1, 0);
    for (auto v : s) ++cnt[v];
    for (std::size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
    for (std::size_t i = 0; i < n; ++i) sa[--cnt[s[i]]] = static_cast<std::uint32_t>(i);
    rank[sa[0]] = 0;
    classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[sa[i]] != s[sa[i - 1]]) ++classes;
        rank[sa[i]] = classes - 1;
    }

    for (std::size_t h = 1; classes < n; h <<= 1) {
        for (std::size_t i = 0; i < n; ++i)
            pn[i] = static_cast<std::uint32_t>((sa[i] + n - h) % n);
        cnt.assign(classes, 0);
        for (std::size_t i = 0; i < n; ++i) ++cnt[rank[pn[i]]];
        for (std::size_t i = 1; i < classes; ++i) cnt[i] += cnt[i - 1];
        for (std::size_t i = n; i-- > 0;) sa[--cnt[rank[pn[i]]]] = pn[i];
        tmp[sa[0]] = 0;
        std::uint32_t nc = 1;
        for (std::size_t i = 1; i < n; ++i) {
            std::uint32_t a1 = rank[sa[i]], a2 = rank[(sa[i] + h) % n];
            std::uint32_t b1 = rank[sa[i - 1]], b2 = rank[(sa[i - 1] + h) % n];
            if (a1 != b1 || a2 != b2) ++nc;
            tmp[sa[i]] = nc - 1;
        }
        rank.swap(tmp);
        classes = nc;
    }

    std::vector<std::uint32_t> out(n - 1);
    for (std::size_t i = 1; i < n; ++i) out[i - 1] = sa[i];  // drop the sentinel suffix
    return out;
}

std::uint32_t fm_dictionary::build_node(std::vector<std::uint16_t>& codes, std::uint32_t lo,
                                        std::uint32_t hi) {
    if (hi - lo <= 1) return UINT32_MAX;
    std::uint32_t mid = lo + (hi - lo) / 2;
    bit_buffer bits;
    std::vector<std::uint16_t> left, right;
    left.reserve(codes.size());
    right.reserve(codes.size());
    for (auto code : codes) {
        bool b = code >= mid;
        bits.push_back(b);
        (b ? right : left).push_back(code);
    }
    codes.clear();
    codes.shrink_to_fit();
    std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({bit_sequence(bits, variant_ == fm_variant::ssa ? bit_layout::rg : bit_layout::rrr, x_),
                      UINT32_MAX, UINT32_MAX});
    std::uint32_t l = build_node(left, lo, mid);
    std::uint32_t r = build_node(right, mid, hi);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

fm_dictionary fm_dictionary::build(std::span<const std::string> sorted_unique, fm_variant variant,
                                   double x) {
    if (sorted_unique.empty()) throw build_error("fm build: no strings");
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("fm build: x must be in (0,1]");
    for (std::size_t i = 0; i < sorted_unique.size(); ++i) {
        if (sorted_unique[i].find('\0') != std::string::npos)
            throw build_error("fm build: string contains a zero byte");
        if (i > 0 && sorted_unique[i - 1] >= sorted_unique[i])
            throw build_error("fm build: input not strictly sorted");
    }

    fm_dictionary d;
    d.variant_ = variant;
    d.x_ = x;
    d.n_ = sorted_unique.size();

    std::vector<std::uint8_t> text;
    std::uint64_t total = 1;
    for (const auto& s : sorted_unique) total += s.size() + 1;
    text.reserve(total);
    text.push_back(0);
    for (const auto& s : sorted_unique) {
        text.insert(text.end(), s.begin(), s.end());
        text.push_back(0);
    }
    d.text_len_ = text.size();

    auto sa = suffix_array_doubling(text);
    std::vector<std::uint8_t> bwt(text.size());
    for (std::size_t j = 0; j < sa.size(); ++j)
        bwt[j] = text[(sa[j] + text.size() - 1) % text.size()];

    std::array<std::uint64_t, 256> counts{};
    for (auto c : text) ++counts[c];
    std::uint64_t cum = 0;
    for (unsigned c = 0; c < 256; ++c) {
        d.c_table_[c] = cum;
        cum += counts[c];
    }
    d.c_table_[256] = cum;

    d.sym_code_.fill(-1);
    for (unsigned c = 0; c < 256; ++c)
        if (counts[c] > 0) {
            d.sym_code_[c] = static_cast<std::int16_t>(d.alphabet_.size());
            d.alphabet_.push_back(static_cast<std::uint8_t>(c));
        }

    std::vector<std::uint16_t> codes(bwt.size());
    for (std::size_t j = 0; j < bwt.size(); ++j)
        codes[j] = static_cast<std::uint16_t>(d.sym_code_[bwt[j]]);
    d.root_ = d.build_node(codes, 0, static_cast<std::uint32_t>(d.alphabet_.size()));
    return d;
}

// The access walk ends with the symbol's rank at j, so one traversal serves
// both T^bwt[j] and rank_{T^bwt[j]}(j).
std::pair<std::uint8_t, std::uint64_t> fm_dictionary::access_rank(std::uint64_t j) const {
    if (j < 1 || j > text_len_) throw std::out_of_range("fm: bwt position out of range");
    if (root_ == UINT32_MAX) return {alphabet_[0], j};  // single-symbol text
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(alphabet_.size());
    std::uint32_t nd = root_;
    while (nd != UINT32_MAX) {
        std::uint32_t mid = lo + (hi - lo) / 2;
        const wt_node& node = nodes_[nd];
        if (node.bits.access(j)) {
            j = node.bits.rank1(j);
            lo = mid;
            nd = node.right;
        } else {
            j = j - node.bits.rank1(j);
            hi = mid;
            nd = node.left;
        }
    }
    return {alphabet_[lo], j};
}

std::uint8_t fm_dictionary::bwt_at(std::uint64_t j) const { return access_rank(j).first; }

std::uint64_t fm_dictionary::symbol_rank(std::uint8_t c, std::uint64_t j) const {
    if (j > text_len_) throw std::out_of_range("fm: rank position out of range");
    if (sym_code_[c] < 0 || j == 0) return 0;
    std::uint32_t code = static_cast<std::uint32_t>(sym_code_[c]);
    if (root_ == UINT32_MAX) return j;
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(alphabet_.size());
    std::uint32_t nd = root_;
    while (nd != UINT32_MAX && j > 0) {
        std::uint32_t mid = lo + (hi - lo) / 2;
        const wt_node& node = nodes_[nd];
        std::uint64_t ones = node.bits.rank1(j);
        if (code >= mid) {
            j = ones;
            lo = mid;
            nd = node.right;
        } else {
            j = j - ones;
            hi = mid;
            nd = node.left;
        }
    }
    return j;
}

std::uint64_t fm_dictionary::lf(std::uint64_t j) const {
    auto [c, r] = access_rank(j);
    return c_table_[c] + r;
}

std::pair<std::uint64_t, std::uint64_t> fm_dictionary::backward_step(std::uint64_t sp,
                                                                     std::uint64_t ep,
                                                                     std::uint8_t c) const {
    std::uint64_t sp2 = c_table_[c] + symbol_rank(c, sp - 1) + 1;
    std::uint64_t ep2 = c_table_[c] + symbol_rank(c, ep);
    return {sp2, ep2};
}

std::int64_t fm_dictionary::locate(std::string_view p) const {
    if (p.empty() || p.find('\0') != std::string_view::npos) return -1;
    std::uint64_t sp = 1, ep = n_ + 1;  // the interval of all $-suffixes
    for (std::size_t k = p.size(); k-- > 0;) {
        auto [s2, e2] = backward_step(sp, ep, static_cast<std::uint8_t>(p[k]));
        if (s2 > e2) return -1;
        sp = s2;
        ep = e2;
    }
    auto [s2, e2] = backward_step(sp, ep, 0);  // leading $
    if (s2 > e2) return -1;
    return static_cast<std::int64_t>(s2 - 1);  // sp' = ep' = i + 1
}

std::optional<std::string> fm_dictionary::extract(std::uint64_t id) const {
    if (id < 1 || id > n_) return std::nullopt;
    std::uint64_t j = id < n_ ? id + 2 : 1;
    std::string out;
    for (std::uint64_t steps = 0; steps <= text_len_; ++steps) {
        auto [c, r] = access_rank(j);
        if (c == 0) break;  // reached the $ before the string
        out.push_back(static_cast<char>(c));
        j = c_table_[c] + r;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::uint64_t fm_dictionary::size_in_bits() const {
    byte_writer w;
    save(w);
    return 8 * w.position();
}

void fm_dictionary::save(byte_writer& w) const {
    w.u8(static_cast<std::uint8_t>(variant_));
    w.f64(x_);
    w.u64(text_len_);
    w.u64(n_);
    w.u16(static_cast<std::uint16_t>(alphabet_.size()));
    w.bytes(alphabet_);
    for (std::uint64_t v : c_table_) w.u64(v);
    w.u32(static_cast<std::uint32_t>(nodes_.size()));
    for (const auto& nd : nodes_) {
        w.u32(nd.left);
        w.u32(nd.right);
        nd.bits.save(w);
    }
    w.u32(root_);
}

fm_dictionary fm_dictionary::load(byte_reader& r) {
    std::uint64_t start = r.position();
    fm_dictionary d;
    std::uint8_t variant = r.u8();
    if (variant > 1) throw format_error("bad fm variant", start);
    d.variant_ = static_cast<fm_variant>(variant);
    d.x_ = r.f64();
    d.text_len_ = r.u64();
    d.n_ = r.u64();
    if (d.n_ == 0 || d.text_len_ < 2 * d.n_ + 1) throw format_error("bad fm header", start);
    std::uint16_t sigma = r.u16();
    if (sigma == 0 || sigma > 256) throw format_error("bad fm alphabet", r.position());
    d.alphabet_ = r.bytes(sigma);
    d.sym_code_.fill(-1);
    for (std::size_t k = 0; k < d.alphabet_.size(); ++k) {
        if (k > 0 && d.alphabet_[k] <= d.alphabet_[k - 1])
            throw format_error("fm alphabet not sorted", r.position());
        d.sym_code_[d.alphabet_[k]] = static_cast<std::int16_t>(k);
    }
    for (auto& v : d.c_table_) v = r.u64();
    if (d.c_table_[256] != d.text_len_) throw format_error("fm symbol counts mismatch", r.position());
    std::uint32_t nnodes = r.u32();
    for (std::uint32_t k = 0; k < nnodes; ++k) {
        wt_node nd;
        nd.left = r.u32();
        nd.right = r.u32();
        if ((nd.left != UINT32_MAX && nd.left >= nnodes) ||
            (nd.right != UINT32_MAX && nd.right >= nnodes))
            throw format_error("fm wavelet child out of range", r.position());
        nd.bits = bit_sequence::load(r);
        d.nodes_.push_back(std::move(nd));
    }
    d.root_ = r.u32();
    if (nnodes > 0 && (d.root_ == UINT32_MAX || d.root_ >= nnodes))
        throw format_error("fm wavelet root out of range", r.position());
    if (nnodes > 0 && d.nodes_[d.root_].bits.size() != d.text_len_)
        throw format_error("fm wavelet size mismatch", r.position());
    return d;
}

}  // namespace csd
