#include "doctest.h"

#include <algorithm>

#include "csd/fcdict.hpp"
#include "helpers.hpp"

using namespace csd;

namespace {

// scan oracle for prefix ranges
std::pair<std::int64_t, std::int64_t> prefix_range_oracle(const std::vector<std::string>& corpus,
                                                          std::string_view q) {
    std::int64_t lo = -1, hi = -1;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].size() >= q.size() && corpus[i].compare(0, q.size(), q) == 0) {
            if (lo < 0) lo = static_cast<std::int64_t>(i + 1);
            hi = static_cast<std::int64_t>(i + 1);
        }
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("fcdict: three-string example, plain layout") {
    std::vector<std::string> corpus = {"abc", "abd", "b"};
    auto d = front_coded_dictionary::build(corpus, fc_kind::plain, 2);
    // bucket 1: "abc\0" then Vbyte(2) "d\0"; bucket 2: "b\0"
    std::vector<std::uint8_t> want = {'a', 'b', 'c', 0, 0x82, 'd', 0, 'b', 0};
    CHECK(d.blob() == want);
    CHECK(d.locate("abd") == 2);
    CHECK(d.locate("abc") == 1);
    CHECK(d.locate("b") == 3);
    CHECK(d.locate("a") == -1);
    CHECK(d.locate("") == -1);
    CHECK(d.locate("zz") == -1);
    REQUIRE(d.extract(3).has_value());
    CHECK(*d.extract(3) == "b");
    CHECK(*d.extract(1) == "abc");
    CHECK_FALSE(d.extract(4).has_value());
    CHECK_FALSE(d.extract(0).has_value());

    auto pr = d.locate_prefix("ab");
    REQUIRE(pr.has_value());
    CHECK(pr->first == 1);
    CHECK(pr->second == 2);
    auto all = d.locate_prefix("");
    REQUIRE(all.has_value());
    CHECK(all->first == 1);
    CHECK(all->second == 3);
    CHECK_FALSE(d.locate_prefix("abcz").has_value());
}

TEST_CASE("fcdict: single bucket when bucket size covers everything") {
    std::vector<std::string> corpus = {"ant", "bee", "cat"};
    auto d = front_coded_dictionary::build(corpus, fc_kind::plain, 64);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(d.locate(corpus[i]) == static_cast<std::int64_t>(i + 1));
        CHECK(*d.extract(i + 1) == corpus[i]);
    }
}

TEST_CASE("fcdict: build errors") {
    std::vector<std::string> unsorted = {"b", "a"};
    CHECK_THROWS_AS(front_coded_dictionary::build(unsorted, fc_kind::plain, 4), build_error);
    std::vector<std::string> dup = {"a", "a"};
    CHECK_THROWS_AS(front_coded_dictionary::build(dup, fc_kind::plain, 4), build_error);
    std::vector<std::string> ok = {"a", "b"};
    CHECK_THROWS_AS(front_coded_dictionary::build(ok, fc_kind::plain, 1), std::invalid_argument);
    CHECK_THROWS_AS(front_coded_dictionary::build({}, fc_kind::plain, 4), build_error);
    std::vector<std::string> zero = {std::string("a\0b", 3)};
    CHECK_THROWS_AS(front_coded_dictionary::build(zero, fc_kind::plain, 4), build_error);
}

TEST_CASE("fcdict: agreement with the sorted-array oracle, both kinds") {
    csdtest::rng r(401);
    auto corpus = csdtest::random_corpus(r, 20000, 1, 30, "abcdefghij");
    std::vector<std::string> held_out;
    while (held_out.size() < 1000) {
        auto s = csdtest::random_string(r, 1, 30, "abcdefghij");
        if (!std::binary_search(corpus.begin(), corpus.end(), s)) held_out.push_back(s);
    }
    for (auto kind : {fc_kind::plain, fc_kind::hu_tucker}) {
        auto d = front_coded_dictionary::build(corpus, kind, 8);
        for (std::size_t i = 0; i < corpus.size(); i += 7)
            CHECK(d.locate(corpus[i]) == static_cast<std::int64_t>(i + 1));
        for (std::size_t i = 0; i < corpus.size(); i += 11)
            CHECK(*d.extract(i + 1) == corpus[i]);
        for (const auto& q : held_out) CHECK(d.locate(q) == -1);
    }
}

TEST_CASE("fcdict: bucket size sweep preserves answers exactly") {
    csdtest::rng r(402);
    auto corpus = csdtest::random_corpus(r, 3000, 1, 20);
    std::vector<front_coded_dictionary> dicts;
    std::vector<std::uint64_t> sizes;
    for (unsigned b : {2u, 4u, 8u, 16u, 32u, 64u}) {
        dicts.push_back(front_coded_dictionary::build(corpus, fc_kind::hu_tucker, b));
        sizes.push_back(dicts.back().size_in_bits());
    }
    for (int k = 0; k < 2000; ++k) {
        auto q = csdtest::random_string(r, 1, 20);
        std::int64_t want = dicts[0].locate(q);
        for (const auto& d : dicts) CHECK(d.locate(q) == want);
        std::uint64_t id = 1 + r.below(corpus.size());
        for (const auto& d : dicts) CHECK(*d.extract(id) == corpus[id - 1]);
    }
    // space decreases monotonically with larger buckets
    for (std::size_t k = 1; k < sizes.size(); ++k) CHECK(sizes[k] <= sizes[k - 1]);
}

TEST_CASE("fcdict: prefix ranges match a scan oracle") {
    csdtest::rng r(403);
    auto corpus = csdtest::url_like_corpus(r, 2500);
    for (auto kind : {fc_kind::plain, fc_kind::hu_tucker}) {
        auto d = front_coded_dictionary::build(corpus, kind, 8);
        for (int k = 0; k < 800; ++k) {
            const auto& base = corpus[r.below(corpus.size())];
            std::size_t len = 1 + r.below(base.size());
            std::string q = base.substr(0, len);
            auto [wlo, whi] = prefix_range_oracle(corpus, q);
            auto got = d.locate_prefix(q);
            if (wlo < 0) {
                CHECK_FALSE(got.has_value());
            } else {
                REQUIRE(got.has_value());
                CHECK(got->first == static_cast<std::uint64_t>(wlo));
                CHECK(got->second == static_cast<std::uint64_t>(whi));
            }
        }
        CHECK_FALSE(d.locate_prefix("zzzz").has_value());
    }
}

TEST_CASE("fcdict: compressed variant is smaller on text-like corpora") {
    csdtest::rng r(404);
    auto corpus = csdtest::url_like_corpus(r, 6000);
    std::uint64_t plain_concat = 0;
    for (const auto& s : corpus) plain_concat += s.size() + 1;
    auto pfc = front_coded_dictionary::build(corpus, fc_kind::plain, 8);
    auto htfc = front_coded_dictionary::build(corpus, fc_kind::hu_tucker, 8);
    CHECK(htfc.blob_bytes() < pfc.blob_bytes());
    CHECK(pfc.blob_bytes() < plain_concat);
    CHECK(htfc.blob_bytes() < plain_concat);
}

TEST_CASE("fcdict: queries with bytes outside the code alphabet") {
    csdtest::rng r(405);
    auto corpus = csdtest::random_corpus(r, 500, 1, 12, "abc");
    auto d = front_coded_dictionary::build(corpus, fc_kind::hu_tucker, 4);
    CHECK(d.locate("zebra") == -1);      // 'z','e',... have no codes
    CHECK(d.locate("ab\xffzz") == -1);
    auto pr = d.locate_prefix("z");
    CHECK_FALSE(pr.has_value());
}

TEST_CASE("fcdict: serialization round trip") {
    csdtest::rng r(406);
    auto corpus = csdtest::random_corpus(r, 1200, 1, 25);
    for (auto kind : {fc_kind::plain, fc_kind::hu_tucker}) {
        auto d = front_coded_dictionary::build(corpus, kind, 8);
        byte_writer w;
        d.save(w);
        byte_reader rd(w.data());
        auto e = front_coded_dictionary::load(rd);
        CHECK(rd.at_end());
        for (std::size_t i = 0; i < corpus.size(); i += 13) {
            CHECK(e.locate(corpus[i]) == static_cast<std::int64_t>(i + 1));
            CHECK(*e.extract(i + 1) == corpus[i]);
        }
        byte_writer w2;
        e.save(w2);
        CHECK(w.data() == w2.data());
    }
}
