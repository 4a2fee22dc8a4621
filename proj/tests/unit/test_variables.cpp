#include "causal/error.hpp"
#include "causal/rational.hpp"
#include "causal/variables.hpp"

#include <doctest.h>

using namespace causal;

TEST_CASE("mask helpers") {
    CHECK(members(0b1011) == std::vector<int>{0, 1, 3});
    CHECK(popcount(0b1011) == 3);
    CHECK(subset_of(0b0011, 0b1011));
    CHECK_FALSE(subset_of(0b0111, 0b1011));
}

TEST_CASE("variable names") {
    CHECK(is_valid_name("W3"));
    CHECK(is_valid_name("_u"));
    CHECK_FALSE(is_valid_name("3W"));
    CHECK_FALSE(is_valid_name(""));
    CHECK_FALSE(is_valid_name("a-b"));
    CHECK(to_lower("W3") == "w3");
}

TEST_CASE("set algebra") {
    VarSet a{"X", "Y"}, b{"Y", "Z"};
    CHECK(set_union(a, b) == VarSet{"X", "Y", "Z"});
    CHECK(set_difference(a, b) == VarSet{"X"});
    CHECK(set_intersection(a, b) == VarSet{"Y"});
    CHECK_FALSE(disjoint(a, b));
    CHECK(disjoint({"X"}, {"Z"}));
    CHECK(includes(set_union(a, b), a));
    CHECK(format_set(a) == "{X, Y}");
    CHECK(format_set({}) == "{}");
}

TEST_CASE("rational parsing is exact and canonical") {
    CHECK(parse_rational("3/10") == Rational(3, 10));
    CHECK(parse_rational("2/4") == Rational(1, 2));
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational("-5")) == "-5");
    CHECK(to_string(parse_rational("0")) == "0");
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rational("abc"), FormatError);
    CHECK_THROWS_AS(parse_rational(""), FormatError);
}
