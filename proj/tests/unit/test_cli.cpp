#include "causal/expr.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

using namespace causal;
using namespace causal::testing;

TEST_CASE("identify prints the canonical formula") {
    auto r = run_cli({"identify", data_path("frontdoor.cd"), "--y", "Y", "--do", "X"});
    CHECK(r.status == 0);
    CHECK(r.out == "sum_z P(z|x) * sum_x' P(y|x',z) * P(x')\n");
    auto again = run_cli({"identify", data_path("frontdoor.cd"), "--y", "Y", "--do", "X"});
    CHECK(again.out == r.out);
    auto reparsed = parse_expr(r.out.substr(0, r.out.size() - 1), {"X", "Z", "Y"});
    CHECK(render(reparsed) + "\n" == r.out);
}

TEST_CASE("identify exit statuses") {
    auto bow = run_cli({"identify", data_path("bow.cd"), "--y", "Y", "--do", "X"});
    CHECK(bow.status == 1);
    CHECK(bow.out == "NOT IDENTIFIABLE\n");
    auto overlap = run_cli({"identify", data_path("chain.cd"), "--y", "Y", "--do", "Y"});
    CHECK(overlap.status == 2);
    CHECK_FALSE(overlap.err.empty());
    CHECK(run_cli({"identify", data_path("chain.cd"), "--y", "Q", "--do", "X"}).status == 2);
    CHECK(run_cli({"identify", data_path("missing.cd"), "--y", "Y", "--do", "X"}).status == 2);
    CHECK(run_cli({"identify", data_path("chain.cd")}).status == 2);
    CHECK(run_cli({"frobnicate"}).status == 2);
    CHECK(run_cli({}).status == 2);
    CHECK(run_cli({"--help"}).status == 0);
    auto experiment = run_cli({"identify", data_path("bow.cd"), "--y", "Y", "--do", "X", "--experiment", "X"});
    CHECK(experiment.status == 0);
    CHECK(experiment.out == "P(y|do(x))\n");
    auto partial = run_cli({"identify", data_path("common_cause.cd"), "--y", "Y", "--do", "X", "--observe", "X,Y"});
    CHECK(partial.status == 1);
}

TEST_CASE("discover lists both two-variable instances") {
    auto r = run_cli({"discover", data_path("pair.csv"), "--y", "Y", "--do", "X", "--markovian", "--faithful"});
    CHECK(r.status == 0);
    CHECK(r.out ==
          "instance 1\n"
          "  model:   vars X, Y; X -> Y\n"
          "  info:    W={X, Y} Z={}\n"
          "  query:   P(Y|do(X))\n"
          "  formula: P(y|x)\n"
          "  method:  backdoor\n"
          "\n"
          "instance 2\n"
          "  model:   vars X, Y; Y -> X\n"
          "  info:    W={X, Y} Z={}\n"
          "  query:   P(Y|do(X))\n"
          "  formula: P(y)\n"
          "  method:  id\n");
    auto limited = run_cli({"discover", data_path("pair.csv"), "--y", "Y", "--do", "X", "--limit", "1"});
    CHECK(limited.out.find("instance 2") == std::string::npos);
    CHECK(run_cli({"discover", data_path("pair.csv"), "--y", "Y", "--do", "X", "--semi", "--markovian"}).status == 2);
}

TEST_CASE("design and optimize on the covariate example") {
    auto d = run_cli({"design", data_path("covariates.cd"), "--y", "Y", "--do", "X"});
    CHECK(d.status == 0);
    CHECK(d.out.find("W={W3, W4, X, Y} Z={}") != std::string::npos);
    CHECK(d.out.find("W={W4, W5, X, Y} Z={}") != std::string::npos);
    CHECK(d.out.find("instance 3") == std::string::npos);
    auto o = run_cli({"optimize", data_path("covariates.cd"), "--y", "Y", "--do", "X", "--costs", data_path("linear.costs")});
    CHECK(o.status == 0);
    CHECK(o.out.find("  cost:    7\n") != std::string::npos);
    CHECK(o.out.find("full-joint cost: 21\n") != std::string::npos);
    auto none = run_cli({"optimize", data_path("bow.cd"), "--y", "Y", "--do", "X", "--costs", data_path("linear.costs")});
    CHECK(none.status == 1);
}

TEST_CASE("querygen on the semi-Markovian example") {
    auto r = run_cli({"querygen", data_path("confounded_mediator.cd"), "--on", "Y", "--of", "X"});
    CHECK(r.status == 0);
    CHECK(r.out.find("query:   P(Y|do(X))") != std::string::npos);
    CHECK(r.out.find("query:   P(Z|do(X))") != std::string::npos);
    CHECK(r.out.find("instance 3") == std::string::npos);
    CHECK(run_cli({"querygen", data_path("confounded_mediator.cd")}).status == 2);
    auto explicit_query = run_cli({"querygen", data_path("confounded_mediator.cd"), "--query", "P(Y|do(Z))"});
    CHECK(explicit_query.status == 1);
}

TEST_CASE("verify reports matches and counterexamples") {
    auto good = run_cli({"verify", data_path("frontdoor.cd"), data_path("frontdoor.formula"), "--y", "Y", "--do", "X",
                         "--trials", "50", "--seed", "1"});
    CHECK(good.status == 0);
    CHECK(good.out.find("50/50 exact matches") != std::string::npos);
    auto bad = run_cli({"verify", data_path("frontdoor.cd"), data_path("naive.formula"), "--y", "Y", "--do", "X",
                        "--trials", "10", "--seed", "1"});
    CHECK(bad.status == 1);
    CHECK(bad.out.find("first counterexample") != std::string::npos);
    CHECK(bad.out.find("mechanism Y") != std::string::npos);
    // The seed is mandatory.
    CHECK(run_cli({"verify", data_path("frontdoor.cd"), data_path("naive.formula"), "--y", "Y", "--do", "X"}).status ==
          2);
}

TEST_CASE("eval prints a table") {
    auto r = run_cli({"eval", data_path("marginal.formula"), data_path("pair.csv")});
    CHECK(r.status == 0);
    CHECK(r.out == "Y,p\n0,1/2\n1,1/2\n");
    auto e = run_cli({"eval", data_path("naive.formula"), data_path("pair_bank/manifest.txt")});
    CHECK(e.status == 0);
    CHECK(e.out == "X,Y,p\n0,0,3/4\n0,1,1/4\n1,0,1/3\n1,1,2/3\n");
    auto missing = run_cli({"eval", data_path("frontdoor.formula"), data_path("pair.csv")});
    CHECK(missing.status == 2);
}
