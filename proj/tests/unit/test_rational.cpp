#include "support/common.hpp"

using namespace testing;
using moran::NumericOverflow;
using moran::InvalidInput;

TEST_CASE("rational arithmetic stays reduced", "[rational]") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(1, 3) * Rat(3, 5)) == Rat(1, 5));
    CHECK((Rat(1, 3) - Rat(1, 3)).is_zero());
    CHECK((Rat(7, 2) / Rat(7, 4)) == Rat(2));
    CHECK(-Rat(1, 3) == Rat(-1, 3));
}

TEST_CASE("rational ordering", "[rational]") {
    CHECK(Rat(1, 3) < Rat(2, 5));
    CHECK(Rat(-1, 2) < Rat(1, 1000000));
    CHECK(Rat(17, 21) < Rat(8, 9));
    CHECK(Rat(2, 6) == Rat(1, 3));
    CHECK(Rat(1, 3) <= Rat(1, 3));
}

TEST_CASE("rational parsing", "[rational]") {
    CHECK(rat("2/5") == Rat(2, 5));
    CHECK(rat("-3/7") == Rat(-3, 7));
    CHECK(rat("12") == Rat(12));
    CHECK(rat("0.49") == Rat(49, 100));
    CHECK(rat("-0.5") == Rat(-1, 2));
    CHECK(rat("+1/3") == Rat(1, 3));
    CHECK(rat(".25") == Rat(1, 4));
    CHECK_THROWS_AS(rat(""), InvalidInput);
    CHECK_THROWS_AS(rat("a/b"), InvalidInput);
    CHECK_THROWS_AS(rat("1/0"), InvalidInput);
    CHECK_THROWS_AS(rat("1//2"), InvalidInput);
}

TEST_CASE("rational formatting round-trips", "[rational]") {
    CHECK(rat("2/5").to_string() == "2/5");
    CHECK(rat("-2/5").to_string() == "-2/5");
    CHECK(Rat(4).to_string() == "4");
    CHECK(Rat(4, 2).to_string() == "2");
    Lcg gen(42);
    for (int i = 0; i < 2000; ++i) {
        const Rat v = gen.rational(1000, 1000);
        CHECK(rat(v.to_string()) == v);
    }
}

TEST_CASE("rational division by zero rejected", "[rational]") {
    CHECK_THROWS_AS(Rat(1) / Rat(0), InvalidInput);
    CHECK_THROWS_AS(Rat(1, 2) / (Rat(1, 3) - Rat(1, 3)), InvalidInput);
}

TEST_CASE("rational overflow is loud, never silent", "[rational]") {
    // 2^126 as a rational; squaring must overflow the 128-bit numerator
    Rat big(1);
    for (int i = 0; i < 126; ++i) big = big * Rat(2);
    CHECK_THROWS_AS(big * big, NumericOverflow);
    CHECK_THROWS_AS(big + big, NumericOverflow); // 2^127 > max
}

TEST_CASE("rational field identities on random values", "[rational]") {
    Lcg gen(7);
    for (int i = 0; i < 5000; ++i) {
        const Rat a = gen.rational(300, 60);
        const Rat b = gen.rational(300, 60);
        const Rat c = gen.rational(300, 60);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        // ordering consistent with double approximation away from ties
        if (a.to_double() + 1e-9 < b.to_double()) CHECK(a < b);
    }
}

TEST_CASE("rational to_double on known values", "[rational]") {
    CHECK(Rat(1, 2).to_double() == 0.5);
    CHECK(Rat(1, 4).to_double() == 0.25);
    CHECK(Rat(17, 21).to_double() == Catch::Approx(0.8095238095238095));
}
