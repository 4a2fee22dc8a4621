#include "cli.hpp"

#include "causal/diagram.hpp"
#include "causal/error.hpp"
#include "causal/expr.hpp"
#include "causal/identify.hpp"
#include "causal/scm.hpp"
#include "causal/solver.hpp"
#include "causal/table.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace causal::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

VarSet split_list(const std::string& text) {
    VarSet out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        item = trim(item);
        if (item.empty()) throw FormatError("empty entry in variable list '" + text + "'");
        out.insert(item);
    }
    return out;
}

/// Formula files may carry `#` comment lines.
std::string read_formula(const std::string& path) {
    std::stringstream in(read_file(path));
    std::string line, text;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        text += t + " ";
    }
    return trim(text);
}

struct QueryFlags {
    std::string y, x, w;

    void add(CLI::App* app, bool required) {
        auto* o = app->add_option("--y", y, "Outcome variables (comma list)");
        if (required) o->required();
        app->add_option("--do", x, "Intervened variables (comma list)");
        app->add_option("--given", w, "Conditioning variables (comma list)");
    }
    bool present() const { return !y.empty(); }
    Query query() const {
        Query q{split_list(y), w.empty() ? VarSet{} : split_list(w), x.empty() ? VarSet{} : split_list(x)};
        validate(q);
        return q;
    }
};

struct InfoFlags {
    std::string observe, experiment;

    void add(CLI::App* app) {
        app->add_option("--observe", observe, "Observed variables W (default: all)");
        app->add_option("--experiment", experiment, "Experimentally controllable variables Z");
    }
    InformationSet info(const CausalDiagram& m) const {
        InformationSet i;
        i.observed = observe.empty() ? VarSet(m.vertices().begin(), m.vertices().end()) : split_list(observe);
        if (!experiment.empty()) i.experimental = split_list(experiment);
        for (const auto& v : i.observed) m.index_of(v);
        for (const auto& v : i.experimental) m.index_of(v);
        validate(i);
        return i;
    }
};

struct CertifyFlags {
    int trials = CertifyOptions{}.trials;
    std::uint64_t seed = CertifyOptions{}.seed;
    int domain = CertifyOptions{}.domain;

    void add(CLI::App* app, bool seed_required) {
        app->add_option("--trials", trials, "Random models per check")->check(CLI::Range(1, 100000));
        auto* s = app->add_option("--seed", seed, "Base seed of the random models");
        if (seed_required) s->required();
        app->add_option("--domain", domain, "Domain size of every sampled variable")->check(CLI::Range(2, 8));
    }
    CertifyOptions options() const { return CertifyOptions{trials, seed, domain}; }
};

CausalDiagram load_model(const std::string& path) { return parse_diagram(read_file(path)); }

void print_instance(std::ostream& out, std::size_t n, const RelationInstance& r, const Rational* cost = nullptr) {
    out << "instance " << n << "\n";
    out << "  model:   " << to_dsl_inline(r.model) << "\n";
    out << "  info:    " << to_string(r.info) << "\n";
    out << "  query:   " << to_string(r.query) << "\n";
    out << "  formula: " << render(r.formula) << "\n";
    out << "  method:  " << to_string(r.method) << "\n";
    if (cost) out << "  cost:    " << to_string(*cost) << "\n";
}

int print_listing(std::ostream& out, const std::vector<RelationInstance>& found, std::size_t limit) {
    std::size_t shown = limit == 0 ? found.size() : std::min(found.size(), limit);
    for (std::size_t k = 0; k < shown; ++k) {
        if (k > 0) out << "\n";
        print_instance(out, k + 1, found[k]);
    }
    if (found.empty()) out << "no instances\n";
    return found.empty() ? kNegative : kOk;
}

void print_assignment(std::ostream& out, const Assignment& a) {
    bool first = true;
    for (const auto& [k, v] : a) {
        out << (first ? "" : ", ") << k << "=" << v;
        first = false;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal inference as a computational relation: identification, discovery, design and optimization"};
    app.name("causal");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    std::function<int()> action;

    // identify
    std::string model_path;
    QueryFlags qf;
    InfoFlags inf;
    CertifyFlags cf;
    auto* identify = app.add_subcommand("identify", "Find a formula for a query from an information set");
    identify->add_option("model", model_path, "Diagram file (.cd)")->required()->check(CLI::ExistingFile);
    qf.add(identify, true);
    inf.add(identify);
    cf.add(identify, false);
    identify->callback([&] {
        action = [&] {
            auto m = load_model(model_path);
            auto q = qf.query();
            auto i = inf.info(m);
            try {
                auto r = solve_identification(m, i, q, cf.options());
                out << render(r.formula) << "\n";
                return kOk;
            } catch (const NotIdentifiable& e) {
                out << "NOT IDENTIFIABLE\n";
                err << e.what() << "\n";
            } catch (const NotComputableFromInfo& e) {
                out << "NOT IDENTIFIABLE\n";
                err << e.what() << "\n";
            }
            return kNegative;
        };
    });

    // discover
    std::string table_path;
    bool semi = false, markovian = false, faithful = false;
    std::size_t max_conf = 2, limit = 0;
    auto* disc = app.add_subcommand("discover", "Enumerate compatible diagrams that identify a query");
    disc->add_option("table", table_path, "Observational table (CSV)")->required()->check(CLI::ExistingFile);
    qf.add(disc, true);
    auto* mk = disc->add_flag("--markovian", markovian, "Markovian diagrams only (default)");
    disc->add_flag("--semi", semi, "Include semi-Markovian diagrams")->excludes(mk);
    disc->add_flag("--faithful", faithful, "Require faithfulness to the table");
    disc->add_option("--max-conf", max_conf, "Largest confounding set")->check(CLI::Range(2, 8));
    disc->add_option("--limit", limit, "Print at most N instances (0: all)");
    cf.add(disc, false);
    disc->callback([&] {
        action = [&] {
            auto table = parse_csv(read_file(table_path));
            DiscoveryOptions o;
            o.include_semi_markovian = semi;
            o.require_faithful = faithful;
            o.max_confounding_size = max_conf;
            return print_listing(out, discover(table, qf.query(), o, cf.options()), limit);
        };
    });

    // design
    bool experiments = false;
    auto* design = app.add_subcommand("design", "Minimal information sets that identify a query");
    design->add_option("model", model_path, "Diagram file (.cd)")->required()->check(CLI::ExistingFile);
    qf.add(design, true);
    design->add_flag("--experiments", experiments, "Allow experimental information");
    design->add_option("--limit", limit, "Print at most N instances (0: all)");
    cf.add(design, false);
    design->callback([&] {
        action = [&] {
            auto m = load_model(model_path);
            return print_listing(out, research_design(m, qf.query(), experiments, cf.options()), limit);
        };
    });

    // querygen
    std::vector<std::string> on, of, explicit_queries;
    bool all_pairs = false;
    auto add_pattern = [&](CLI::App* sub) {
        sub->add_option("--on", on, "Effects on this variable (repeatable)");
        sub->add_option("--of", of, "Effects of this variable (repeatable)");
        sub->add_flag("--all-pairs", all_pairs, "Every pairwise effect");
        sub->add_option("--query", explicit_queries, "Explicit query such as P(Y|do(X)) (repeatable)");
    };
    auto pattern_queries = [&](const CausalDiagram& m) {
        QueryPattern p{on, of, all_pairs, {}};
        for (const auto& text : explicit_queries) p.explicit_queries.push_back(parse_query(text));
        if (qf.present()) p.explicit_queries.push_back(qf.query());
        auto qs = expand_pattern(m, p);
        if (qs.empty()) throw PreconditionViolated("no queries given; use --y/--do, --on, --of, --all-pairs or --query");
        return qs;
    };
    auto* qgen = app.add_subcommand("querygen", "Identifiable queries of a pattern under one information set");
    qgen->add_option("model", model_path, "Diagram file (.cd)")->required()->check(CLI::ExistingFile);
    qf.add(qgen, false);
    add_pattern(qgen);
    inf.add(qgen);
    qgen->add_option("--limit", limit, "Print at most N instances (0: all)");
    cf.add(qgen, false);
    qgen->callback([&] {
        action = [&] {
            auto m = load_model(model_path);
            return print_listing(out, query_generation(m, inf.info(m), pattern_queries(m), cf.options()), limit);
        };
    });

    // optimize
    std::vector<std::string> model_paths;
    std::string costs_path;
    auto* opt = app.add_subcommand("optimize", "Cheapest (model, information, query) triple with a formula");
    opt->add_option("models", model_paths, "Diagram files (.cd)")->required()->check(CLI::ExistingFile);
    qf.add(opt, false);
    add_pattern(opt);
    opt->add_option("--costs", costs_path, "Cost model file")->required()->check(CLI::ExistingFile);
    opt->add_flag("--experiments", experiments, "Allow experimental information");
    cf.add(opt, false);
    opt->callback([&] {
        action = [&] {
            SearchSpace space;
            for (const auto& p : model_paths) space.models.push_back(load_model(p));
            const auto& vars = space.models.front().vertices();
            for (const auto& m : space.models) {
                if (m.vertices() != vars) throw ScopeMismatch("all models must declare the same variables");
            }
            space.queries = pattern_queries(space.models.front());
            space.infos = information_lattice(vars, experiments);
            auto g = parse_costs(read_file(costs_path));
            try {
                auto best = causal_program(space, g, cf.options());
                print_instance(out, 1, best.instance, &best.cost);
                InformationSet full{VarSet(vars.begin(), vars.end()), {}};
                out << "full-joint cost: " << to_string(g.cost(best.instance.model, full, best.instance.query)) << "\n";
                return kOk;
            } catch (const Infeasible& e) {
                out << "INFEASIBLE\n";
                err << e.what() << "\n";
                return kNegative;
            }
        };
    });

    // verify
    std::string formula_path;
    auto* verify = app.add_subcommand("verify", "Check a formula against random models of a diagram");
    verify->add_option("model", model_path, "Diagram file (.cd)")->required()->check(CLI::ExistingFile);
    verify->add_option("formula", formula_path, "Formula file")->required()->check(CLI::ExistingFile);
    qf.add(verify, true);
    inf.add(verify);
    cf.add(verify, true);
    verify->callback([&] {
        action = [&] {
            auto m = load_model(model_path);
            auto q = qf.query();
            auto i = inf.info(m);
            auto f = parse_expr(read_formula(formula_path), m.vertices());
            Domains domains;
            for (const auto& v : m.vertices()) domains[v] = cf.domain;
            std::optional<Counterexample> first;
            int matches = 0;
            for (int t = 0; t < cf.trials; ++t) {
                auto seed = trial_seed(cf.seed, t);
                auto bad = check_against_model(random_scm(m, domains, seed), i, q, f);
                out << "trial " << t + 1 << " seed " << seed << ": " << (bad ? "mismatch" : "match") << "\n";
                if (!bad) {
                    ++matches;
                } else if (!first) {
                    first = bad;
                    first->trial = t;
                    first->seed = seed;
                }
            }
            out << matches << "/" << cf.trials << " exact matches\n";
            if (!first) return kOk;
            out << "first counterexample: trial " << first->trial + 1 << " seed " << first->seed << "\n";
            out << "  at:      ";
            print_assignment(out, first->values);
            out << "\n  formula: " << to_string(first->formula_value) << "\n";
            out << "  oracle:  " << to_string(first->oracle_value) << "\n";
            out << "  model:\n" << first->scm_text;
            return kNegative;
        };
    });

    // eval
    std::string bank_path;
    auto* eval = app.add_subcommand("eval", "Evaluate a formula on a table or an experiment bank");
    eval->add_option("formula", formula_path, "Formula file")->required()->check(CLI::ExistingFile);
    eval->add_option("bank", bank_path, "Observational CSV or bank manifest")->required()->check(CLI::ExistingFile);
    eval->callback([&] {
        action = [&] {
            auto bank = std::filesystem::path(bank_path).extension() == ".csv"
                            ? observational_bank(parse_csv(read_file(bank_path)))
                            : load_bank(bank_path);
            const auto* obs = bank.find({});
            std::vector<std::string> declared = obs ? obs->scope() : std::vector<std::string>{};
            if (!obs) {
                for (const auto& [v, size] : bank.domains) declared.push_back(v);
            }
            auto f = parse_expr(read_formula(formula_path), declared);
            out << to_csv(evaluate(f, bank));
            return kOk;
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        return action();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace causal::cli
