#include "causal/error.hpp"
#include "causal/expr.hpp"
#include "causal/table.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

using namespace causal;
using namespace causal::testing;

TEST_CASE("csv round trip and marginals") {
    auto t = parse_csv(read_data("pair.csv"));
    CHECK(t.scope() == std::vector<std::string>{"X", "Y"});
    CHECK(t.is_normalized());
    CHECK(t.is_positive());
    CHECK(parse_csv(to_csv(t)) == t);
    auto y = t.marginal({"Y"});
    CHECK(y.at({{"Y", 0}}) == Rational(1, 2));
    CHECK(t.at({{"X", 1}, {"Y", 1}}) == Rational(2, 5));
    auto r = t.reordered({"Y", "X"});
    CHECK(r.at({{"X", 1}, {"Y", 0}}) == Rational(1, 5));
    CHECK_THROWS_AS(t.marginal({"Q"}), UnknownVariable);
}

TEST_CASE("csv format errors") {
    CHECK_THROWS_AS(parse_csv("X,Y,p\n0,0,1/2\n1,1,1/2\n"), FormatError);
    CHECK_THROWS_AS(parse_csv("X,p\n0,1/2\n0,1/2\n"), FormatError);
    CHECK_THROWS_AS(parse_csv("X,p\n0,abc\n1,1/2\n"), FormatError);
    CHECK_THROWS_AS(parse_csv("X\n0\n"), FormatError);
}

TEST_CASE("exact independence tests") {
    auto t = parse_csv(read_data("pair.csv"));
    CHECK_FALSE(independent(t, {"X"}, {"Y"}, {}));
    auto product = parse_csv("X,Y,p\n0,0,1/8\n0,1,3/8\n1,0,1/8\n1,1,3/8\n");
    CHECK(independent(product, {"X"}, {"Y"}, {}));
}

TEST_CASE("regimes") {
    auto r = parse_regime("do(X=1,Z=0)");
    CHECK(r == Regime{{"X", 1}, {"Z", 0}});
    CHECK(to_string(r) == "do(X=1,Z=0)");
    CHECK(to_string(Regime{}) == "do()");
    CHECK(make_regime({{"Z", 0}, {"X", 1}}) == r);
    CHECK_THROWS_AS(parse_regime("do(X)"), FormatError);
}

TEST_CASE("bank manifests") {
    auto bank = load_bank(data_path("pair_bank/manifest.txt"));
    CHECK(bank.info == InformationSet{{"X", "Y"}, {"X"}});
    CHECK(bank.tables.size() == 3);
    REQUIRE(bank.find({{"X", 1}}) != nullptr);
    CHECK(bank.find({{"X", 1}})->scope() == std::vector<std::string>{"Y"});
}

TEST_CASE("formula evaluation") {
    auto bank = observational_bank(parse_csv(read_data("pair.csv")));
    const std::vector<std::string> vars{"X", "Y"};
    Evaluator ev(bank);
    CHECK(ev.value(parse_expr("P(y|x)", vars), {{"X", 0}, {"Y", 1}}) == Rational(1, 4));
    CHECK(ev.value(parse_expr("sum_x P(y|x) * P(x)", vars), {{"Y", 1}}) == Rational(1, 2));
    auto py = evaluate(parse_expr("P(y)", vars), bank);
    CHECK(py.scope() == std::vector<std::string>{"Y"});
    CHECK(py.at({{"Y", 1}}) == Rational(1, 2));
    CHECK_THROWS_AS(ev.value(parse_expr("P(y|do(x))", vars), {{"X", 0}, {"Y", 1}}), NotComputable);
    CHECK_THROWS_AS(ev.value(parse_expr("P(y|x)", vars), {{"X", 0}}), UnboundVariable);
    CHECK_THROWS_AS(ev.value(parse_expr("P(y|x)", vars), {{"X", 5}, {"Y", 0}}), OutOfDomainValue);

    auto exp = load_bank(data_path("pair_bank/manifest.txt"));
    Evaluator ev2(exp);
    CHECK(ev2.value(parse_expr("P(y|do(x))", vars), {{"X", 1}, {"Y", 1}}) == Rational(2, 3));
}

TEST_CASE("division by a null probability is reported") {
    auto bank = observational_bank(parse_csv("X,Y,p\n0,0,1/2\n0,1,1/2\n1,0,0\n1,1,0\n"));
    Evaluator ev(bank);
    CHECK_THROWS_AS(ev.value(parse_expr("P(y|x)", {"X", "Y"}), {{"X", 1}, {"Y", 0}}), DivisionByZero);
}

TEST_CASE("average effects") {
    auto treated = parse_csv("Y,p\n0,1/3\n1,2/3\n");
    auto control = parse_csv("Y,p\n0,3/4\n1,1/4\n");
    CHECK(average_effect(treated, control, {}) == Rational(5, 12));
    CHECK(average_effect(treated, control, {{0, Rational(10)}, {1, Rational(20)}}) == Rational(25, 6));
    CHECK_THROWS_AS(average_effect(treated, parse_csv("Z,p\n0,1\n"), {}), ScopeMismatch);
}

TEST_CASE("evaluation is compositional") {
    auto bank = observational_bank(parse_csv(read_data("pair.csv")));
    const std::vector<std::string> vars{"X", "Y"};
    Evaluator ev(bank);
    auto a = parse_expr("P(y|x)", vars);
    auto b = parse_expr("P(x)", vars);
    for (int x = 0; x < 2; ++x) {
        Rational total = 0;
        for (int y = 0; y < 2; ++y) {
            Assignment at{{"X", x}, {"Y", y}};
            Rational prod = ev.value(a, at) * ev.value(b, at);
            CHECK(ev.value(Expr::product({a, b}), at) == prod);
            CHECK(ev.value(Expr::quotient(a, b), at) == ev.value(a, at) / ev.value(b, at));
            total += prod;
        }
        CHECK(ev.value(parse_expr("sum_y P(y|x) * P(x)", vars), {{"X", x}}) == total);
    }
}

TEST_CASE("interventional atoms are read straight from the bank") {
    auto bank = load_bank(data_path("pair_bank/manifest.txt"));
    Evaluator ev(bank);
    auto y_do_x = parse_expr("P(y|do(x))", {"X", "Y"});
    CHECK(ev.value(y_do_x, {{"X", 0}, {"Y", 0}}) == Rational(3, 4));
    CHECK(ev.value(y_do_x, {{"X", 0}, {"Y", 1}}) == Rational(1, 4));
    CHECK(ev.value(y_do_x, {{"X", 1}, {"Y", 0}}) == Rational(1, 3));
    auto table = evaluate(y_do_x, bank);
    CHECK(table.scope().size() == 2);
}
