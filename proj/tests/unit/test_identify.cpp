#include "causal/error.hpp"
#include "causal/identify.hpp"
#include "causal/scm.hpp"
#include "causal/solver.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace causal;
using namespace causal::testing;

namespace {

const std::string kFrontDoor = "sum_z P(z|x) * sum_x' P(y|x',z) * P(x')";

void check_formula(const IdentificationResult& r, const std::string& expected, const std::vector<std::string>& vars) {
    REQUIRE(r.identified);
    CHECK(expr_equal_canonical(r.formula, parse_expr(expected, vars)));
}

}  // namespace

TEST_CASE("direct-cause adjustment") {
    auto d = load_diagram("common_cause.cd");
    auto r = adjust_direct_causes(d, "X", {"Y"});
    check_formula(r, "sum_z P(y|x,z) * P(z)", d.vertices());
    CHECK(r.method == Method::DirectAdjustment);
    CHECK_THROWS_AS(adjust_direct_causes(load_diagram("bow.cd"), "X", {"Y"}), LatentParent);
    CHECK_THROWS_AS(adjust_direct_causes(d, "X", {"Z"}), PreconditionViolated);
    CHECK_THROWS_AS(adjust_direct_causes(d, "Q", {"Y"}), UnknownVariable);
}

TEST_CASE("back-door sets") {
    auto d = load_diagram("covariates.cd");
    CHECK(satisfies_backdoor(d, "X", "Y", {"W3", "W4"}));
    CHECK(satisfies_backdoor(d, "X", "Y", {"W4", "W5"}));
    CHECK_FALSE(satisfies_backdoor(d, "X", "Y", {"W4"}));
    CHECK_FALSE(satisfies_backdoor(d, "X", "Y", {"W4", "W5", "W6"}));
    auto sets = backdoor_sets(d, "X", "Y");
    REQUIRE(sets.size() >= 2);
    CHECK(sets[0].first == VarSet{"W3", "W4"});
    CHECK(sets[1].first == VarSet{"W4", "W5"});
    CHECK(render(sets[0].second) == "sum_w3 sum_w4 P(y|w3,w4,x) * P(w3,w4)");
    CHECK(render(adjustment_formula("X", {"Y"}, {})) == "P(y|x)");
    CHECK(backdoor_sets(load_diagram("bow.cd"), "X", "Y").empty());
}

TEST_CASE("front-door criterion") {
    auto d = load_diagram("frontdoor.cd");
    CHECK(satisfies_frontdoor(d, "X", "Y", {"Z"}));
    CHECK_FALSE(satisfies_frontdoor(load_diagram("confounded_mediator.cd"), "X", "Y", {"Z"}));
    auto r = frontdoor(d, "X", "Y");
    REQUIRE(r.identified);
    CHECK(render(r.formula) == kFrontDoor);
    CHECK(r.method == Method::Frontdoor);
    CHECK_FALSE(frontdoor(load_diagram("bow.cd"), "X", "Y").identified);
}

TEST_CASE("complete identification on the standard diagrams") {
    auto fd = load_diagram("frontdoor.cd");
    auto r = id(fd, {"X"}, {"Y"});
    REQUIRE(r.identified);
    CHECK(render(r.formula) == kFrontDoor);
    CHECK(expr_equal_canonical(r.formula, parse_expr(kFrontDoor, fd.vertices())));

    check_formula(id(load_diagram("common_cause.cd"), {"X"}, {"Y"}), "sum_z P(y|x,z) * P(z)", {"X", "Y", "Z"});
    auto confounded_mediator = load_diagram("confounded_mediator.cd");
    auto f8 = id(confounded_mediator, {"X"}, {"Y"});
    check_formula(f8, "sum_z P(y|x,z) * P(z|x)", {"X", "Y", "Z"});
    // The same value as the plain conditional.
    Domains dom{{"X", 2}, {"Y", 2}, {"Z", 3}};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto m = random_scm(confounded_mediator, dom, seed);
        CHECK_FALSE(oracle_mismatch(m, observe_all(confounded_mediator), effect("Y", "X"), f8.formula));
        CHECK_FALSE(oracle_mismatch(m, observe_all(confounded_mediator), effect("Y", "X"), parse_expr("P(y|x)", confounded_mediator.vertices())));
    }
    check_formula(id(load_diagram("chain.cd"), {"Z"}, {"Y"}), "P(y|z)", {"X", "Y", "Z"});
    check_formula(id(load_diagram("chain.cd"), {"Y"}, {"X"}), "P(x)", {"X", "Y", "Z"});
    CHECK_FALSE(id(load_diagram("confounded_mediator.cd"), {"Z"}, {"Y"}).identified);
}

TEST_CASE("hedges are reported with a witness") {
    auto r = id(load_diagram("bow.cd"), {"X"}, {"Y"});
    CHECK_FALSE(r.identified);
    REQUIRE(r.witness.size() == 2);
    CHECK(r.witness[0] == VarSet{"X", "Y"});
    CHECK(r.witness[1] == VarSet{"Y"});
    auto big = parse_diagram("vars X, Z, Y\nX -> Z\nZ -> Y\nconf {X, Z}\nconf {Z, Y}");
    CHECK_FALSE(id(big, {"X"}, {"Y"}).identified);
}

TEST_CASE("conditional identification") {
    auto mediated_direct = load_diagram("mediated_direct.cd");
    auto r = idc(mediated_direct, {"X"}, {"Y"}, {"Z"});
    check_formula(r, "P(y|x,z)", mediated_direct.vertices());
    CHECK(r.method == Method::Idc);
    auto fd = load_diagram("frontdoor.cd");
    auto c = idc(fd, {"X"}, {"Y"}, {"Z"});
    REQUIRE(c.identified);
    // Given z, x no longer matters once the confounding path is cut.
    CHECK(free_variables(c.formula) == VarSet{"Y", "Z"});
    CHECK_FALSE(idc(load_diagram("bow.cd"), {"X"}, {"Y"}, {}).identified);
}

TEST_CASE("surrogate experiments") {
    auto bow = load_diagram("bow.cd");
    auto direct = zid(bow, {"X"}, {"X"}, {"Y"});
    REQUIRE(direct.identified);
    CHECK(render(direct.formula) == "P(y|do(x))");
    CHECK(direct.method == Method::Zid);

    // Randomizing Z removes both confounding paths into the X -> Y effect.
    auto surrogate = parse_diagram("vars Z, X, Y\nZ -> X\nX -> Y\nconf {X, Z}\nconf {Z, Y}");
    CHECK_FALSE(id(surrogate, {"X"}, {"Y"}).identified);
    auto s = zid(surrogate, {"Z"}, {"X"}, {"Y"});
    check_formula(s, "sum_z P(y|x,do(z)) * P(z)", surrogate.vertices());
    CHECK(s.used_regime == std::vector<VarSet>{{"Z"}});
    InformationSet info{observe_all(surrogate).observed, {"Z"}};
    Domains dom{{"X", 2}, {"Y", 2}, {"Z", 2}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CHECK_FALSE(oracle_mismatch(random_scm(surrogate, dom, seed), info, effect("Y", "X"), s.formula));
    }

    // With Z confounded with Y and caused by X, do(z) is no help.
    auto hedged = parse_diagram("vars X, Z, Y\nX -> Z\nZ -> Y\nconf {X, Y}\nconf {Z, Y}");
    CHECK_FALSE(zid(hedged, {"Z"}, {"X"}, {"Y"}).identified);
    CHECK(zid(hedged, {"X", "Z"}, {"X"}, {"Y"}).identified);
    CHECK_FALSE(zid(bow, {}, {"X"}, {"Y"}).identified);
}

TEST_CASE("do-calculus rules") {
    auto chain = load_diagram("chain.cd");
    // Rule 2: P(y | do(z)) = P(y | z) in the chain.
    CHECK(do_rule_applicable(chain, 2, {"Y"}, {}, {"Z"}, {}));
    // Rule 3: X has no effect on Y once Z is fixed.
    CHECK(do_rule_applicable(chain, 3, {"Y"}, {"Z"}, {"X"}, {}));
    CHECK_FALSE(do_rule_applicable(chain, 3, {"Y"}, {}, {"X"}, {}));
    // Rule 1: Z screens off X from Y.
    CHECK(do_rule_applicable(chain, 1, {"Y"}, {}, {"X"}, {"Z"}));
    CHECK_FALSE(do_rule_applicable(chain, 1, {"Y"}, {}, {"X"}, {}));
    auto bow = load_diagram("bow.cd");
    CHECK_FALSE(do_rule_applicable(bow, 2, {"Y"}, {}, {"X"}, {}));
    CHECK_THROWS_AS(do_rule_applicable(chain, 4, {"Y"}, {}, {"X"}, {}), PreconditionViolated);
    CHECK_THROWS_AS(do_rule_applicable(chain, 1, {"Y"}, {}, {"Y"}, {}), OverlappingSets);
}

TEST_CASE("the bow admits two models that agree observationally but not causally") {
    // Search binary models X = f(U), Y = g(X, U) with one shared background.
    struct Candidate {
        Rational pu;
        int f, g;
    };
    auto build = [](const Candidate& c) {
        std::string text = "var X 2\nvar Y 2\nbackground U " + to_string(1 - c.pu) + " " + to_string(c.pu) +
                           "\nmechanism X inputs U\n";
        for (int u = 0; u < 2; ++u) text += "X(U=" + std::to_string(u) + ") = " + std::to_string((c.f >> u) & 1) + "\n";
        text += "mechanism Y inputs X, U\n";
        for (int x = 0; x < 2; ++x) {
            for (int u = 0; u < 2; ++u) {
                text += "Y(X=" + std::to_string(x) + ", U=" + std::to_string(u) +
                        ") = " + std::to_string((c.g >> (2 * x + u)) & 1) + "\n";
            }
        }
        return parse_scm(text);
    };
    std::optional<std::pair<DiscreteSCM, DiscreteSCM>> found;
    std::vector<DiscreteSCM> models;
    for (const Rational& pu : {Rational(1, 2), Rational(1, 3)}) {
        for (int f = 0; f < 4 && !found; ++f) {
            for (int g = 0; g < 16 && !found; ++g) models.push_back(build({pu, f, g}));
        }
    }
    for (std::size_t i = 0; i < models.size() && !found; ++i) {
        for (std::size_t j = i + 1; j < models.size() && !found; ++j) {
            if (observational_joint(models[i]) != observational_joint(models[j])) continue;
            if (interventional(models[i], {{"X", 1}}, {"Y"}) != interventional(models[j], {{"X", 1}}, {"Y"})) {
                found = std::make_pair(models[i], models[j]);
            }
        }
    }
    REQUIRE(found.has_value());
    auto bow = load_diagram("bow.cd");
    for (const auto* s : {&found->first, &found->second}) {
        auto induced = induced_diagram(*s);
        // Each model's arrows and latent causes fit inside the bow.
        for (int v = 0; v < 2; ++v) CHECK(subset_of(induced.parents(v), bow.parents(v)));
        CHECK(induced.confounding().size() <= 1);
    }
}

TEST_CASE("direct-cause adjustment matches the oracle on Markovian diagrams") {
    auto root = adjust_direct_causes(load_diagram("chain.cd"), "X", {"Y"});
    REQUIRE(root.identified);
    CHECK(render(root.formula) == "P(y|x)");
    auto all = collect_diagrams({"A", "B", "C", "D"}, {});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto& d = all[(seed * 104729) % all.size()];
        if (has(d.parents(0), 3)) continue;
        auto r = adjust_direct_causes(d, "A", {"D"});
        REQUIRE(r.identified);
        Domains dom;
        for (const auto& v : d.vertices()) dom[v] = 2;
        CHECK_FALSE(oracle_mismatch(random_scm(d, dom, seed), observe_all(d), effect("D", "A"), r.formula));
    }
}

TEST_CASE("trivial adjustment and disconnected variables") {
    auto xy = parse_diagram("vars X, Y\nX -> Y");
    auto sets = backdoor_sets(xy, "X", "Y");
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].first.empty());
    CHECK(render(sets[0].second) == "P(y|x)");
    auto apart = parse_diagram("vars X, Y");
    auto r = id(apart, {"X"}, {"Y"});
    REQUIRE(r.identified);
    CHECK(render(r.formula) == "P(y)");
    CHECK(do_rule_applicable(xy, 2, {"Y"}, {}, {"X"}, {}));
    CHECK(do_rule_applicable(apart, 3, {"Y"}, {}, {"X"}, {}));
}

TEST_CASE("without confounding the front-door and naive formulas agree") {
    auto d = load_diagram("chain.cd");
    auto fd = frontdoor(d, "X", "Y");
    REQUIRE(fd.identified);
    CHECK(render(fd.formula) == "sum_z P(z|x) * sum_x' P(y|x',z) * P(x')");
    auto naive = parse_expr("P(y|x)", d.vertices());
    Domains dom{{"X", 2}, {"Z", 2}, {"Y", 2}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = random_scm(d, dom, seed);
        auto bank = brute_bank(s, observe_all(d));
        CHECK(evaluate(fd.formula, bank) == evaluate(naive, bank));
        CHECK_FALSE(oracle_mismatch(s, observe_all(d), effect("Y", "X"), naive));
    }
}

TEST_CASE("experiments on the outcome do not identify the bow") {
    auto bow = load_diagram("bow.cd");
    CHECK_FALSE(zid(bow, {"Y"}, {"X"}, {"Y"}).identified);
    // Y = X and Y = U with X = U: equal under every regime over Y, different
    // under do(X).
    auto copy = parse_scm(read_data("bow_copy.scm"));
    auto shared = parse_scm(
        "var X 2\nvar Y 2\nbackground U 1/2 1/2\n"
        "mechanism X inputs U\nX(U=0) = 0\nX(U=1) = 1\n"
        "mechanism Y inputs X, U\nY(X=0, U=0) = 0\nY(X=0, U=1) = 1\nY(X=1, U=0) = 0\nY(X=1, U=1) = 1\n");
    InformationSet info{{"X", "Y"}, {"Y"}};
    auto a = brute_bank(copy, info), b = brute_bank(shared, info);
    CHECK(a.tables == b.tables);
    CHECK(brute_joint(copy, {{"X", 1}}) != brute_joint(shared, {{"X", 1}}));
}

TEST_CASE("reductions to id on every four-vertex diagram") {
    EnumerationOptions o;
    o.include_semi_markovian = true;
    std::size_t checked = 0;
    enumerate_diagrams({"A", "B", "C", "D"}, o, [&](const CausalDiagram& d) {
        for (int x = 0; x < 4; ++x) {
            for (int y = 0; y < 4; ++y) {
                if (x == y) continue;
                VarSet xs{d.name(x)}, ys{d.name(y)};
                auto base = id(d, xs, ys);
                auto viaz = zid(d, {}, xs, ys);
                auto viac = idc(d, xs, ys, {});
                CHECK(base.identified == viaz.identified);
                CHECK(base.identified == viac.identified);
                if (!base.identified) {
                    CHECK_FALSE(d.is_markovian());
                    continue;
                }
                CHECK(expr_equal_canonical(base.formula, viaz.formula));
                CHECK(expr_equal_canonical(base.formula, viac.formula));
                CHECK(computable_from(base.formula, observe_all(d)));
                // Whatever the adjustment criteria find, id finds too.
                if (!backdoor_sets(d, d.name(x), d.name(y)).empty()) CHECK(base.identified);
                if (frontdoor(d, d.name(x), d.name(y)).identified) CHECK(base.identified);
                ++checked;
            }
        }
        return true;
    });
    CHECK(checked > 0);
}
