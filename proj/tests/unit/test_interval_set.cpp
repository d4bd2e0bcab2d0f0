#include "support/common.hpp"

using namespace testing;
using moran::Interval;
using moran::IntervalSet;
using moran::InvalidInput;

TEST_CASE("normalize keeps canonical input", "[interval_set]") {
    const RSet s = rset({{"0", "1/3"}, {"2/3", "1"}});
    REQUIRE(s.size() == 2);
    CHECK(s.parts()[0] == riv("0", "1/3"));
    CHECK(s.parts()[1] == riv("2/3", "1"));
}

TEST_CASE("normalize merges touching intervals", "[interval_set]") {
    const RSet s = rset({{"0", "1/2"}, {"1/2", "1"}});
    REQUIRE(s.size() == 1);
    CHECK(s.parts()[0] == riv("0", "1"));
}

TEST_CASE("normalize collapses the rank-1 sum-set chain", "[interval_set]") {
    // pairwise-overlapping chain: the three distinct rank-1 sums for c = 2/5, n = 2
    const RSet s = rset({{"0", "0.8"}, {"0.6", "1.4"}, {"1.2", "2"}});
    REQUIRE(s.size() == 1);
    CHECK(s.parts()[0] == riv("0", "2"));
}

TEST_CASE("normalize rejects malformed intervals", "[interval_set]") {
    CHECK_THROWS_AS(RSet::normalize({riv("1", "0")}), InvalidInput);
}

TEST_CASE("union identities", "[interval_set]") {
    const RSet a = rset({{"0", "1"}});
    CHECK(RSet::unite(a, RSet{}) == a);
    CHECK(RSet::unite(rset({{"0", "1/3"}}), rset({{"2/3", "1"}})) ==
          rset({{"0", "1/3"}, {"2/3", "1"}}));
    // the four rank-1 Cantor difference rectangles chain into [-1, 1]
    const RSet chained = RSet::unite(
        RSet::unite(rset({{"-1", "-1/3"}}), rset({{"-1/3", "1/3"}})), rset({{"1/3", "1"}}));
    CHECK(chained == rset({{"-1", "1"}}));
}

TEST_CASE("measure", "[interval_set]") {
    CHECK(rset({{"0", "1/3"}, {"2/3", "1"}}).measure() == rat("2/3"));
    CHECK(RSet{}.measure() == Rat(0));
}

TEST_CASE("max_gap", "[interval_set]") {
    CHECK(rset({{"0", "1/3"}, {"2/3", "1"}}).max_gap(riv("0", "1")) == rat("1/3"));
    CHECK(rset({{"0", "2"}}).max_gap(riv("0", "2")) == Rat(0));
    // rank-1 sum set for c = 1/5, n = 2: largest hole among the two 2/5 holes
    CHECK(rset({{"0", "0.4"}, {"0.8", "1.2"}, {"1.6", "2"}}).max_gap(riv("0", "2")) ==
          rat("2/5"));
    CHECK(RSet{}.max_gap(riv("0", "3")) == Rat(3));
    CHECK_THROWS_AS(rset({{"0", "2"}}).max_gap(riv("0", "1")), InvalidInput);
}

TEST_CASE("contains_interval", "[interval_set]") {
    CHECK(rset({{"-1", "1"}}).contains_interval(riv("-1/2", "1/2")));
    CHECK_FALSE(rset({{"0", "1/3"}, {"2/3", "1"}}).contains_interval(riv("0.3", "0.4")));
    CHECK(rset({{"0", "2"}}).contains_interval(riv("0", "2")));
    CHECK_FALSE(RSet{}.contains_interval(riv("0", "0")));
}

TEST_CASE("contains_point and gap_at", "[interval_set]") {
    const RSet s = rset({{"0", "1/3"}, {"2/3", "1"}});
    CHECK(s.contains_point(rat("1/3")));
    CHECK_FALSE(s.contains_point(rat("1/2")));
    const auto gap = s.gap_at(riv("0", "1"), rat("1/2"));
    REQUIRE(gap.has_value());
    CHECK(*gap == riv("1/3", "2/3"));
    CHECK_FALSE(s.gap_at(riv("0", "1"), rat("1/4")).has_value());
}

TEST_CASE("float backend: separated parts never merge within eps guarantee", "[interval_set]") {
    using DSet = IntervalSet<double>;
    const double eps = 1e-12;
    const DSet merged = DSet::normalize({{0.0, 0.5}, {0.5 + 1e-13, 1.0}}, eps);
    CHECK(merged.size() == 1); // closer than eps: may merge
    const DSet apart = DSet::normalize({{0.0, 0.5}, {0.5 + 1e-9, 1.0}}, eps);
    CHECK(apart.size() == 2); // farther than eps: never merged
}

namespace {

std::vector<RInterval> random_raw(Lcg& gen, int max_parts) {
    std::vector<RInterval> raw;
    const int n = static_cast<int>(gen.uniform(0, max_parts));
    for (int i = 0; i < n; ++i) {
        Rat a = gen.rational(40, 8);
        Rat b = gen.rational(40, 8);
        if (b < a) std::swap(a, b);
        raw.push_back({a, b});
    }
    return raw;
}

} // namespace

TEST_CASE("property: normalize is idempotent and order-insensitive", "[interval_set]") {
    Lcg gen(2024);
    for (int iter = 0; iter < 2000; ++iter) {
        auto raw = random_raw(gen, 12);
        const RSet once = RSet::normalize(raw);
        const RSet twice = RSet::normalize(once.parts());
        CHECK(once == twice);

        auto shuffled = raw;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[gen.uniform(0, static_cast<long long>(i) - 1)]);
        CHECK(RSet::normalize(shuffled) == once);
    }
}

TEST_CASE("property: union commutative, associative, subadditive", "[interval_set]") {
    Lcg gen(99);
    for (int iter = 0; iter < 1500; ++iter) {
        const RSet a = RSet::normalize(random_raw(gen, 8));
        const RSet b = RSet::normalize(random_raw(gen, 8));
        const RSet c = RSet::normalize(random_raw(gen, 8));
        CHECK(RSet::unite(a, b) == RSet::unite(b, a));
        CHECK(RSet::unite(RSet::unite(a, b), c) == RSet::unite(a, RSet::unite(b, c)));
        CHECK(RSet::unite(a, b).measure() <= a.measure() + b.measure());
        // union against self is identity
        CHECK(RSet::unite(a, a) == a);
    }
}

TEST_CASE("property: measure plus gaps equals hull length", "[interval_set]") {
    Lcg gen(5);
    for (int iter = 0; iter < 1000; ++iter) {
        const RSet a = RSet::normalize(random_raw(gen, 10));
        if (a.empty()) continue;
        const RInterval hull{a.parts().front().lo - Rat(1), a.parts().back().hi + Rat(1)};
        Rat gaps = a.parts().front().lo - hull.lo;
        for (std::size_t i = 0; i + 1 < a.size(); ++i)
            gaps = gaps + (a.parts()[i + 1].lo - a.parts()[i].hi);
        gaps = gaps + (hull.hi - a.parts().back().hi);
        CHECK(a.measure() + gaps == hull.length());
    }
}

TEST_CASE("union accumulator agrees with flat normalization", "[interval_set]") {
    Lcg gen(321);
    for (int iter = 0; iter < 300; ++iter) {
        moran::UnionAccumulator<Rat> acc;
        std::vector<RInterval> all;
        const int batches = static_cast<int>(gen.uniform(0, 9));
        for (int b = 0; b < batches; ++b) {
            auto raw = random_raw(gen, 6);
            all.insert(all.end(), raw.begin(), raw.end());
            acc.add(RSet::normalize(raw));
        }
        CHECK(acc.finish() == RSet::normalize(all));
    }
}
