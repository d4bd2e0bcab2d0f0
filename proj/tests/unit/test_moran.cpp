#include "support/common.hpp"

using namespace testing;
using moran::BasicInterval;
using moran::CapExceeded;
using moran::Caps;
using moran::InvalidInput;
using moran::Layout;
using moran::RestrictedFamily;
using moran::Word;

namespace {

const BasicInterval<Rat> kRoot{Word{}, {Rat(0), Rat(1)}};

bool subset_of(const RSet& inner, const RSet& outer) {
    return RSet::unite(outer, inner) == outer;
}

} // namespace

TEST_CASE("children: two branches are forced by endpoint pinning", "[moran]") {
    for (const Layout layout : {Layout::uniform, Layout::left, Layout::right,
                                Layout::random_seeded}) {
        const auto spec = const_spec("1/3", 2, layout, 11);
        const auto kids = children(kRoot, spec);
        REQUIRE(kids.size() == 2);
        CHECK(kids[0].extent == riv("0", "1/3"));
        CHECK(kids[1].extent == riv("2/3", "1"));
        CHECK(kids[0].word.letters == std::vector<int>{1});
        CHECK(kids[1].word.letters == std::vector<int>{2});
    }
}

TEST_CASE("children: uniform layout spreads the slack evenly", "[moran]") {
    const auto kids = children(kRoot, const_spec("1/5", 3));
    REQUIRE(kids.size() == 3);
    CHECK(kids[0].extent == riv("0", "1/5"));
    CHECK(kids[1].extent == riv("2/5", "3/5"));
    CHECK(kids[2].extent == riv("4/5", "1"));
}

TEST_CASE("children: left-packed keeps children 1..n-1 contiguous, pins child n", "[moran]") {
    const auto kids = children(kRoot, const_spec("1/5", 3, Layout::left));
    REQUIRE(kids.size() == 3);
    CHECK(kids[0].extent == riv("0", "1/5"));
    CHECK(kids[1].extent == riv("1/5", "2/5"));
    CHECK(kids[2].extent == riv("4/5", "1"));
}

TEST_CASE("children: right-packed mirrors left-packed", "[moran]") {
    const auto kids = children(kRoot, const_spec("1/5", 3, Layout::right));
    REQUIRE(kids.size() == 3);
    CHECK(kids[0].extent == riv("0", "1/5"));
    CHECK(kids[1].extent == riv("3/5", "4/5"));
    CHECK(kids[2].extent == riv("4/5", "1"));
}

TEST_CASE("children: every layout satisfies the structural invariants", "[moran]") {
    for (const Layout layout : {Layout::uniform, Layout::left, Layout::right,
                                Layout::random_seeded}) {
        const auto spec = const_spec("1/6", 4, layout, 99);
        const auto kids = children(kRoot, spec);
        REQUIRE(kids.size() == 4);
        CHECK(kids.front().extent.lo == Rat(0));
        CHECK(kids.back().extent.hi == Rat(1));
        for (std::size_t i = 0; i < kids.size(); ++i) {
            CHECK(kids[i].extent.length() == rat("1/6"));
            if (i > 0) CHECK(kids[i - 1].extent.hi <= kids[i].extent.lo);
        }
        // deterministic for a fixed seed
        const auto again = children(kRoot, spec);
        for (std::size_t i = 0; i < kids.size(); ++i)
            CHECK(kids[i].extent == again[i].extent);
    }
}

TEST_CASE("level_set: middle-third rank 2", "[moran]") {
    const auto ls = level_set(middle_third(), 2);
    REQUIRE(ls.intervals.size() == 4);
    CHECK(ls.set == rset({{"0", "1/9"}, {"2/9", "1/3"}, {"2/3", "7/9"}, {"8/9", "1"}}));
    CHECK(ls.set.measure() == rat("4/9"));
}

TEST_CASE("level_set: rank 0 is the unit interval", "[moran]") {
    const auto ls = level_set(const_spec("2/5", 2), 0);
    REQUIRE(ls.intervals.size() == 1);
    CHECK(ls.set == rset({{"0", "1"}}));
}

TEST_CASE("level_set: c=2/5 rank 1 endpoints pinned", "[moran]") {
    const auto ls = level_set(const_spec("2/5", 2), 1);
    CHECK(ls.set == rset({{"0", "2/5"}, {"3/5", "1"}}));
    CHECK(ls.set.measure() == rat("4/5"));
}

TEST_CASE("level_set: resource cap fails loudly", "[moran]") {
    Caps caps;
    caps.max_level_intervals = 100;
    CHECK_THROWS_AS(level_set(middle_third(), 10, caps), CapExceeded);
}

TEST_CASE("spec validation rejects bad parameters", "[moran]") {
    CHECK_THROWS_AS(const_spec("1/2", 2).validate(), InvalidInput);  // c*n = 1
    CHECK_THROWS_AS(const_spec("3/5", 2).validate(), InvalidInput);  // c*n > 1
    CHECK_THROWS_AS(const_spec("1/3", 1).validate(), InvalidInput);  // n < 2
    CHECK_THROWS_AS(const_spec("-1/3", 2).validate(), InvalidInput); // c <= 0
    CHECK_NOTHROW(const_spec("1/3", 2).validate());
}

TEST_CASE("restrict: children of a rank-1 window", "[moran]") {
    const RestrictedFamily<Rat> fam(middle_third(), 1, riv("0", "1/3"));
    CHECK(fam.level(1).set == rset({{"0", "1/3"}}));
    CHECK(fam.level(2).set == rset({{"0", "1/9"}, {"2/9", "1/3"}}));
}

TEST_CASE("restrict: full window reproduces the level sets", "[moran]") {
    const RestrictedFamily<Rat> fam(middle_third(), 0, riv("0", "1"));
    for (std::size_t n = 0; n <= 5; ++n)
        CHECK(fam.level(n).set == level_set(middle_third(), n).set);
}

TEST_CASE("restrict: right window of c=2/5", "[moran]") {
    const RestrictedFamily<Rat> fam(const_spec("2/5", 2), 1, riv("3/5", "1"));
    CHECK(fam.level(2).set == rset({{"3/5", "19/25"}, {"21/25", "1"}}));
    CHECK(fam.level(2).set == rset({{"0.6", "0.76"}, {"0.84", "1"}}));
}

TEST_CASE("restrict: window endpoints must be rank-k0 endpoints", "[moran]") {
    CHECK_THROWS_AS(RestrictedFamily<Rat>(middle_third(), 1, riv("0", "1/2")), InvalidInput);
    CHECK_THROWS_AS(RestrictedFamily<Rat>(middle_third(), 1, riv("1/3", "1/3")), InvalidInput);
}

TEST_CASE("restrict: G_{n+1} is a subset of G_n", "[moran]") {
    const RestrictedFamily<Rat> fam(middle_third(), 1, riv("2/3", "1"));
    RSet prev = fam.level(1).set;
    for (std::size_t n = 2; n <= 7; ++n) {
        const RSet cur = fam.level(n).set;
        CHECK(subset_of(cur, prev));
        prev = cur;
    }
}

TEST_CASE("theorem_bounds on the spec presets", "[moran]") {
    const auto mt = theorem_bounds(middle_third());
    CHECK(mt.lower == rat("1/3"));
    CHECK(mt.upper == Rat(1));
    CHECK(mt.nonempty);

    const auto wide = theorem_bounds(const_spec("2/5", 2));
    CHECK(wide.lower == rat("1/5"));
    CHECK(wide.upper == Rat(2));
    CHECK(wide.nonempty);

    const auto empty = theorem_bounds(const_spec("1/5", 2));
    CHECK(empty.lower == rat("3/5"));
    CHECK(empty.upper == rat("1/3"));
    CHECK_FALSE(empty.nonempty);
}

TEST_CASE("theorem_bounds over an eventually periodic sequence", "[moran]") {
    moran::MoranSpec<Rat> spec;
    spec.c.head = {rat("1/3")};
    spec.c.period = {rat("1/4"), rat("1/3")};
    spec.n.head = {2};
    spec.n.period = {3, 2};
    const auto w = theorem_bounds(spec);
    CHECK(w.lower == rat("1/3")); // max(1/3, 1/4, 1/3)
    CHECK(w.upper == Rat(1));     // min(1, 1, 1)
    CHECK(w.nonempty);
}

TEST_CASE("endpoint_points", "[moran]") {
    const auto k0 = endpoint_points(middle_third(), 0);
    CHECK(k0 == std::vector<Rat>{Rat(0), Rat(1)});
    const auto k1 = endpoint_points(middle_third(), 1);
    CHECK(k1 == std::vector<Rat>{Rat(0), rat("1/3"), rat("2/3"), Rat(1)});
    const auto k2 = endpoint_points(middle_third(), 2);
    CHECK(k2 == std::vector<Rat>{Rat(0), rat("1/9"), rat("2/9"), rat("1/3"), rat("2/3"),
                                 rat("7/9"), rat("8/9"), Rat(1)});
}

TEST_CASE("property: nesting, counting and exact lengths to rank 10", "[moran]") {
    const std::vector<moran::MoranSpec<Rat>> specs = {
        middle_third(),
        const_spec("2/5", 2),
        const_spec("1/5", 3, Layout::left),
        const_spec("3/10", 2, Layout::random_seeded, 7),
    };
    for (const auto& spec : specs) {
        RSet prev = level_set(spec, 0).set;
        long long expect_count = 1;
        Rat expect_len(1);
        for (std::size_t k = 1; k <= 10; ++k) {
            const auto ls = level_set(spec, k);
            expect_count *= spec.n.at(k);
            expect_len = expect_len * spec.c.at(k);
            CHECK(static_cast<long long>(ls.intervals.size()) == expect_count);
            for (const auto& bi : ls.intervals) CHECK(bi.extent.length() == expect_len);
            CHECK(ls.set.measure() == expect_len * Rat(expect_count));
            CHECK(ls.intervals.front().extent.lo == Rat(0));
            CHECK(ls.intervals.back().extent.hi == Rat(1));
            CHECK(subset_of(ls.set, prev));
            prev = ls.set;
        }
    }
}

TEST_CASE("property: layouts agree on every rank measure", "[moran]") {
    for (std::size_t k = 1; k <= 8; ++k) {
        const Rat measure_uniform = level_set(const_spec("1/4", 3), k).set.measure();
        for (const Layout layout : {Layout::left, Layout::right, Layout::random_seeded}) {
            const auto spec = const_spec("1/4", 3, layout, 13);
            CHECK(level_set(spec, k).set.measure() == measure_uniform);
        }
    }
}

TEST_CASE("property: endpoints persist to deeper ranks", "[moran]") {
    const auto spec = const_spec("3/10", 2, Layout::random_seeded, 3);
    auto prev = endpoint_points(spec, 1);
    for (std::size_t k = 2; k <= 8; ++k) {
        const auto cur = endpoint_points(spec, k);
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
    }
}

TEST_CASE("param sequence indexing", "[moran]") {
    moran::ParamSeq<long long> seq{{5, 6}, {7, 8, 9}};
    CHECK(seq.at(1) == 5);
    CHECK(seq.at(2) == 6);
    CHECK(seq.at(3) == 7);
    CHECK(seq.at(5) == 9);
    CHECK(seq.at(6) == 7);
    CHECK(seq.at(302) == 9); // (302 - 2 - 1) % 3 == 2
    CHECK(seq.at(301) == 8);
    CHECK_THROWS_AS(seq.at(0), InvalidInput);
}
