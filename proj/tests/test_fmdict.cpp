#include "doctest.h"

#include <algorithm>
#include <set>

#include "csd/fmdict.hpp"
#include "helpers.hpp"

using namespace csd;

namespace {

std::vector<std::uint8_t> dict_text(const std::vector<std::string>& strings) {
    std::vector<std::uint8_t> t{0};
    for (const auto& s : strings) {
        t.insert(t.end(), s.begin(), s.end());
        t.push_back(0);
    }
    return t;
}

// Brute-force suffix sort oracle.
std::vector<std::uint32_t> brute_suffix_array(const std::vector<std::uint8_t>& t) {
    std::vector<std::uint32_t> sa(t.size());
    for (std::uint32_t i = 0; i < t.size(); ++i) sa[i] = i;
    std::sort(sa.begin(), sa.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(t.begin() + a, t.end(), t.begin() + b, t.end());
    });
    return sa;
}

std::vector<std::uint8_t> brute_bwt(const std::vector<std::uint8_t>& t) {
    auto sa = brute_suffix_array(t);
    std::vector<std::uint8_t> bwt(t.size());
    for (std::size_t j = 0; j < sa.size(); ++j) bwt[j] = t[(sa[j] + t.size() - 1) % t.size()];
    return bwt;
}

}  // namespace

TEST_CASE("fmdict: suffix array matches the brute-force oracle") {
    csdtest::rng r(501);
    for (int round = 0; round < 200; ++round) {
        std::size_t len = 1 + r.below(300);
        std::vector<std::uint8_t> t(len);
        for (auto& c : t) c = static_cast<std::uint8_t>(r.below(round % 2 ? 4 : 256));
        CHECK(suffix_array_doubling(t) == brute_suffix_array(t));
    }
}

TEST_CASE("fmdict: two-string example") {
    std::vector<std::string> corpus = {"ab", "b"};
    for (auto v : {fm_variant::ssa, fm_variant::ssa_star}) {
        auto d = fm_dictionary::build(corpus, v, 0.25);
        CHECK(d.text_length() == 6);  // $ab$b$

        // bwt of $ab$b$ is b$b$$a
        std::string want = std::string("b\0b\0\0a", 6);
        for (std::uint64_t j = 1; j <= 6; ++j)
            CHECK(d.bwt_at(j) == static_cast<std::uint8_t>(want[j - 1]));

        // intervals of the backward search for $ab$
        auto [sp1, ep1] = d.backward_step(1, 3, 'b');
        CHECK(sp1 == 5);
        CHECK(ep1 == 6);
        auto [sp2, ep2] = d.backward_step(sp1, ep1, 'a');
        CHECK(sp2 == 4);
        CHECK(ep2 == 4);
        auto [sp3, ep3] = d.backward_step(sp2, ep2, 0);
        CHECK(sp3 == 2);
        CHECK(ep3 == 2);

        CHECK(d.locate("ab") == 1);
        CHECK(d.locate("b") == 2);
        CHECK(d.locate("a") == -1);   // proper prefix of a member
        CHECK(d.locate("ba") == -1);
        CHECK(d.locate("") == -1);
        CHECK(*d.extract(1) == "ab");
        CHECK(*d.extract(2) == "b");
        CHECK_FALSE(d.extract(0).has_value());
        CHECK_FALSE(d.extract(3).has_value());
    }
}

TEST_CASE("fmdict: bwt and terminator count match the oracle on small corpora") {
    csdtest::rng r(502);
    for (int round = 0; round < 30; ++round) {
        auto corpus = csdtest::random_corpus(r, 2 + r.below(60), 1, 64, "abcd");
        auto text = dict_text(corpus);
        auto want = brute_bwt(text);
        auto d = fm_dictionary::build(corpus, fm_variant::ssa, 0.25);
        REQUIRE(d.text_length() == text.size());
        std::uint64_t dollars = 0;
        for (std::uint64_t j = 1; j <= d.text_length(); ++j) {
            CHECK(d.bwt_at(j) == want[j - 1]);
            if (d.bwt_at(j) == 0) ++dollars;
        }
        CHECK(dollars == corpus.size() + 1);

        // T^bwt[1] ends string n; T^bwt[i+2] ends string i for i < n
        CHECK(d.bwt_at(1) == static_cast<std::uint8_t>(corpus.back().back()));
        for (std::size_t i = 1; i + 1 <= corpus.size() && i < 5; ++i)
            CHECK(d.bwt_at(i + 2) == static_cast<std::uint8_t>(corpus[i - 1].back()));
    }
}

TEST_CASE("fmdict: LF is a single cycle through the whole text") {
    csdtest::rng r(503);
    auto corpus = csdtest::random_corpus(r, 50, 1, 20);
    auto d = fm_dictionary::build(corpus, fm_variant::ssa_star, 0.25);

    // against the oracle: LF(row of suffix i) = row of suffix i-1
    auto text = dict_text(corpus);
    auto sa = brute_suffix_array(text);
    std::vector<std::uint64_t> row_of(text.size());
    for (std::size_t j = 0; j < sa.size(); ++j) row_of[sa[j]] = j + 1;
    for (std::uint64_t j = 1; j <= d.text_length(); ++j) {
        std::uint32_t pos = sa[j - 1];
        std::uint32_t prev = pos == 0 ? static_cast<std::uint32_t>(text.size() - 1) : pos - 1;
        CHECK(d.lf(j) == row_of[prev]);
    }

    std::set<std::uint64_t> seen;
    std::uint64_t j = 1 + r.below(d.text_length());
    for (std::uint64_t k = 0; k < d.text_length(); ++k) {
        CHECK(seen.insert(j).second);
        j = d.lf(j);
    }
    CHECK(seen.size() == d.text_length());
    CHECK_THROWS_AS(d.lf(0), std::out_of_range);
    CHECK_THROWS_AS(d.lf(d.text_length() + 1), std::out_of_range);
}

TEST_CASE("fmdict: backward step boundary behavior") {
    csdtest::rng r(504);
    auto corpus = csdtest::random_corpus(r, 200, 1, 16, "abc");
    auto d = fm_dictionary::build(corpus, fm_variant::ssa, 0.25);

    // absent symbol: empty interval
    auto [sp, ep] = d.backward_step(1, d.text_length(), 'z');
    CHECK(sp > ep);

    // full interval stepped by c has size = total count of c
    auto text = dict_text(corpus);
    for (std::uint8_t c : {std::uint8_t('a'), std::uint8_t('b'), std::uint8_t(0)}) {
        auto cnt = static_cast<std::uint64_t>(std::count(text.begin(), text.end(), c));
        auto [s2, e2] = d.backward_step(1, d.text_length(), c);
        CHECK(e2 + 1 - s2 == cnt);
    }

    // wavelet rank consistency: symbol ranks at N sum to N
    std::uint64_t sum = 0;
    for (unsigned c = 0; c < 256; ++c) sum += d.symbol_rank(static_cast<std::uint8_t>(c), d.text_length());
    CHECK(sum == d.text_length());
}

TEST_CASE("fmdict: locate and extract agree with the sorted-array oracle") {
    csdtest::rng r(505);
    auto corpus = csdtest::random_corpus(r, 10000, 1, 24);
    std::vector<std::string> held_out;
    while (held_out.size() < 1000) {
        auto s = csdtest::random_string(r, 1, 24);
        if (!std::binary_search(corpus.begin(), corpus.end(), s)) held_out.push_back(s);
    }
    auto ssa = fm_dictionary::build(corpus, fm_variant::ssa, 0.1);
    auto star = fm_dictionary::build(corpus, fm_variant::ssa_star, 0.1);
    for (std::size_t i = 0; i < corpus.size(); i += 5) {
        auto want = static_cast<std::int64_t>(i + 1);
        CHECK(ssa.locate(corpus[i]) == want);
        CHECK(star.locate(corpus[i]) == want);   // cross-variant identical ids
        CHECK(*ssa.extract(i + 1) == corpus[i]);
        CHECK(*star.extract(i + 1) == corpus[i]);
    }
    for (const auto& q : held_out) {
        CHECK(ssa.locate(q) == -1);
        CHECK(star.locate(q) == -1);
    }
}

TEST_CASE("fmdict: compressed bitmaps shrink the index on text corpora") {
    csdtest::rng r(506);
    auto corpus = csdtest::url_like_corpus(r, 5000);
    auto ssa = fm_dictionary::build(corpus, fm_variant::ssa, 0.1);
    auto star = fm_dictionary::build(corpus, fm_variant::ssa_star, 0.1);
    CHECK(star.size_in_bits() <= ssa.size_in_bits());
}

TEST_CASE("fmdict: build errors") {
    std::vector<std::string> unsorted = {"b", "a"};
    CHECK_THROWS_AS(fm_dictionary::build(unsorted, fm_variant::ssa, 0.1), build_error);
    CHECK_THROWS_AS(fm_dictionary::build({}, fm_variant::ssa, 0.1), build_error);
    std::vector<std::string> ok = {"a"};
    CHECK_THROWS_AS(fm_dictionary::build(ok, fm_variant::ssa, 0.0), std::invalid_argument);
}

TEST_CASE("fmdict: serialization round trip") {
    csdtest::rng r(507);
    auto corpus = csdtest::random_corpus(r, 800, 1, 20);
    for (auto v : {fm_variant::ssa, fm_variant::ssa_star}) {
        auto d = fm_dictionary::build(corpus, v, 0.2);
        byte_writer w;
        d.save(w);
        byte_reader rd(w.data());
        auto e = fm_dictionary::load(rd);
        CHECK(rd.at_end());
        for (std::size_t i = 0; i < corpus.size(); i += 9) {
            CHECK(e.locate(corpus[i]) == static_cast<std::int64_t>(i + 1));
            CHECK(*e.extract(i + 1) == corpus[i]);
        }
        byte_writer w2;
        e.save(w2);
        CHECK(w.data() == w2.data());
    }
}
