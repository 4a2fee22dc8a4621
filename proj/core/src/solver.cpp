#include "causal/solver.hpp"

#include "causal/error.hpp"
#include "causal/scm.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace causal {

namespace {

void check_vars(const CausalDiagram& d, const VarSet& s) {
    for (const auto& v : s) d.index_of(v);
}

std::vector<std::string> ordered_names(const CausalDiagram& d, const VarSet& s) {
    std::vector<std::string> out;
    for (const auto& v : d.vertices()) {
        if (s.contains(v)) out.push_back(v);
    }
    return out;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::optional<Counterexample> check_against_model(const DiscreteSCM& scm, const InformationSet& info,
                                                  const Query& query, const Expr& formula) {
    validate(query);
    auto model = induced_diagram(scm);
    VarSet qvars = set_union(set_union(query.outcome, query.observed), query.intervened);
    check_vars(model, qvars);
    if (!includes(qvars, free_variables(formula))) {
        throw PreconditionViolated("the formula mentions variables outside the query");
    }
    auto qorder = ordered_names(model, qvars);
    auto xorder = ordered_names(model, query.intervened);
    auto yw = ordered_names(model, set_union(query.outcome, query.observed));
    auto worder = ordered_names(model, query.observed);
    std::vector<int> sizes;
    for (const auto& v : qorder) sizes.push_back(scm.domain_map().at(v));

    auto bank = make_bank(scm, info);
    Evaluator evaluator(bank);
    std::map<Assignment, std::pair<DistributionTable, DistributionTable>> oracle;
    auto rows = DistributionTable::zeros(qorder, sizes);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto vals = rows.values_at(r);
        Assignment env, xs;
        for (std::size_t k = 0; k < qorder.size(); ++k) env[qorder[k]] = vals[k];
        for (const auto& x : xorder) xs[x] = env[x];
        auto it = oracle.find(xs);
        if (it == oracle.end()) {
            auto joint = interventional_joint(scm, xs);
            it = oracle.emplace(xs, std::make_pair(joint.marginal(yw), joint.marginal(worder))).first;
        }
        // The conditional is undefined on null rows.
        const Rational& norm = it->second.second.at(env);
        if (norm == 0) continue;
        Rational expected = it->second.first.at(env) / norm;
        Rational got = evaluator.value(formula, env);
        if (got != expected) return Counterexample{0, 0, env, got, expected, to_scm_text(scm)};
    }
    return std::nullopt;
}

std::optional<Counterexample> certify(const CausalDiagram& model, const InformationSet& info, const Query& query,
                                      const Expr& formula, const CertifyOptions& options) {
    Domains domains;
    for (const auto& v : model.vertices()) domains[v] = options.domain;
    for (int t = 0; t < options.trials; ++t) {
        std::uint64_t seed = trial_seed(options.seed, t);
        if (auto bad = check_against_model(random_scm(model, domains, seed), info, query, formula)) {
            bad->trial = t;
            bad->seed = seed;
            return bad;
        }
    }
    return std::nullopt;
}

RelationInstance solve_identification(const CausalDiagram& m, const InformationSet& i, const Query& q,
                                      const CertifyOptions& options) {
    validate(q);
    validate(i);
    check_vars(m, q.outcome);
    check_vars(m, q.observed);
    check_vars(m, q.intervened);
    check_vars(m, i.observed);

    if (!includes(i.observed, set_union(q.outcome, q.observed))) {
        throw NotComputableFromInfo("the query's outcome and conditioning variables must be observed");
    }
    // Interventions on unobserved variables are only harmless when rule 3
    // removes them.
    VarSet x = q.intervened;
    for (const auto& v : q.intervened) {
        if (i.observed.contains(v)) continue;
        VarSet rest = x;
        rest.erase(v);
        if (!do_rule_applicable(m, 3, q.outcome, rest, {v}, q.observed)) {
            throw NotComputableFromInfo("the intervened variable " + v + " is not observed");
        }
        x = rest;
    }

    VarSet all(m.vertices().begin(), m.vertices().end());
    CausalDiagram g = i.observed == all ? m : latent_projection(m, i.observed);

    IdentificationResult r;
    if (x.size() == 1 && q.outcome.size() == 1 && q.observed.empty() && i.experimental.empty()) {
        const auto& xv = *x.begin();
        const auto& yv = *q.outcome.begin();
        auto sets = backdoor_sets(m, xv, yv, i.observed);
        if (!sets.empty()) {
            r.identified = true;
            r.method = Method::Backdoor;
            r.formula = sets.front().second;
        }
    }
    if (!r.identified) {
        if (q.observed.empty()) {
            r = i.experimental.empty() ? id(g, x, q.outcome) : zid(g, i.experimental, x, q.outcome);
        } else {
            r = i.experimental.empty() ? idc(g, x, q.outcome, q.observed)
                                       : zidc(g, i.experimental, x, q.outcome, q.observed);
        }
    }
    if (!r.identified) {
        std::string msg = to_string(q) + " is not identifiable from " + to_string(i);
        if (r.witness.size() == 2) {
            msg += " (hedge over " + format_set(r.witness[0]) + " for " + format_set(r.witness[1]) + ")";
        }
        throw NotIdentifiable(msg);
    }
    if (!computable_from(r.formula, i)) {
        throw NotComputableFromInfo("the identified formula needs terms outside " + to_string(i));
    }
    if (auto bad = certify(m, i, q, r.formula, options)) {
        throw Error("internal: formula " + render(r.formula) + " failed oracle certification");
    }
    return RelationInstance{m, i, q, r.formula, r.method};
}

std::vector<RelationInstance> discover(const DistributionTable& table, const Query& q, const DiscoveryOptions& options,
                                       const CertifyOptions& certify_options) {
    const auto& vars = table.scope();
    if (vars.size() > options.max_vars) {
        throw SearchSpaceTooLarge("discovery over " + std::to_string(vars.size()) + " variables exceeds the bound of " +
                                  std::to_string(options.max_vars) + "; raise CAUSAL_MAX_VARS to continue");
    }
    if (!table.is_positive() || !table.is_normalized()) {
        throw PreconditionViolated("discovery needs a strictly positive, normalized table");
    }
    validate(q);
    VarSet scope(vars.begin(), vars.end());
    for (const auto* s : {&q.outcome, &q.observed, &q.intervened}) {
        for (const auto& v : *s) {
            if (!scope.contains(v)) throw UnknownVariable("query variable " + v + " is not in the table");
        }
    }

    // Independence facts of the table, in the canonical statement order.
    struct Statement {
        int a, b;
        Mask given;
        bool holds;
    };
    std::vector<Statement> statements;
    const int n = static_cast<int>(vars.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            Mask rest = (bit(n) - 1) & ~bit(a) & ~bit(b);
            std::vector<Mask> subsets;
            for (Mask c = rest;; c = (c - 1) & rest) {
                subsets.push_back(c);
                if (c == 0) break;
            }
            std::sort(subsets.begin(), subsets.end(), [](Mask x, Mask y) {
                return popcount(x) != popcount(y) ? popcount(x) < popcount(y) : x < y;
            });
            for (Mask c : subsets) {
                VarSet cs;
                for (int k : members(c)) cs.insert(vars[static_cast<std::size_t>(k)]);
                bool holds = independent(table, {vars[static_cast<std::size_t>(a)]},
                                         {vars[static_cast<std::size_t>(b)]}, cs);
                statements.push_back({a, b, c, holds});
            }
        }
    }

    EnumerationOptions eo;
    eo.include_semi_markovian = options.include_semi_markovian;
    eo.max_confounding_size = options.max_confounding_size;
    eo.max_vars = options.max_vars;
    InformationSet info{scope, {}};
    std::vector<RelationInstance> out;
    enumerate_diagrams(vars, eo, [&](const CausalDiagram& d) {
        for (const auto& s : statements) {
            bool sep = d_separated(d, bit(s.a), bit(s.b), s.given);
            if (sep && !s.holds) return true;
            if (options.require_faithful && s.holds && !sep) return true;
        }
        try {
            out.push_back(solve_identification(d, info, q, certify_options));
        } catch (const NotIdentifiable&) {
        } catch (const NotComputableFromInfo&) {
        }
        return true;
    });
    return out;
}

std::vector<InformationSet> information_lattice(const std::vector<std::string>& vars, bool allow_experiments) {
    const int n = static_cast<int>(vars.size());
    if (n > 20) throw SearchSpaceTooLarge("information lattice over more than 20 variables");
    struct Entry {
        Mask w, z;
    };
    std::vector<Entry> entries;
    for (Mask w = 0; w < bit(n); ++w) {
        if (!allow_experiments) {
            entries.push_back({w, 0});
            continue;
        }
        for (Mask z = w;; z = (z - 1) & w) {
            entries.push_back({w, z});
            if (z == 0) break;
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        int sa = popcount(a.w) + popcount(a.z);
        int sb = popcount(b.w) + popcount(b.z);
        if (sa != sb) return sa < sb;
        if (a.w != b.w) return mask_lex_less(a.w, b.w);
        return mask_lex_less(a.z, b.z);
    });
    std::vector<InformationSet> out;
    for (const auto& e : entries) {
        InformationSet i;
        for (int k : members(e.w)) i.observed.insert(vars[static_cast<std::size_t>(k)]);
        for (int k : members(e.z)) i.experimental.insert(vars[static_cast<std::size_t>(k)]);
        out.push_back(std::move(i));
    }
    return out;
}

std::vector<RelationInstance> research_design(const CausalDiagram& m, const Query& q, bool allow_experiments,
                                              const CertifyOptions& options) {
    validate(q);
    check_vars(m, q.outcome);
    check_vars(m, q.observed);
    check_vars(m, q.intervened);
    VarSet needed = set_union(q.outcome, q.observed);
    std::vector<RelationInstance> found;
    for (const auto& info : information_lattice(m.vertices(), allow_experiments)) {
        if (!includes(info.observed, needed)) continue;
        bool dominated = std::any_of(found.begin(), found.end(),
                                     [&](const RelationInstance& r) { return infoset_contains(r.info, info); });
        if (dominated) continue;
        try {
            found.push_back(solve_identification(m, info, q, options));
        } catch (const NotIdentifiable&) {
        } catch (const NotComputableFromInfo&) {
        }
    }
    return found;
}

std::vector<Query> expand_pattern(const CausalDiagram& m, const QueryPattern& pattern) {
    std::vector<Query> out;
    const auto& vars = m.vertices();
    for (const auto& y : pattern.effects_on) {
        m.index_of(y);
        for (const auto& v : vars) {
            if (v != y) out.push_back(Query{{y}, {}, {v}});
        }
    }
    for (const auto& x : pattern.effects_of) {
        m.index_of(x);
        for (const auto& v : vars) {
            if (v != x) out.push_back(Query{{v}, {}, {x}});
        }
    }
    if (pattern.all_pairs) {
        for (const auto& a : vars) {
            for (const auto& b : vars) {
                if (a != b) out.push_back(Query{{a}, {}, {b}});
            }
        }
    }
    for (const auto& q : pattern.explicit_queries) {
        validate(q);
        for (const auto* s : {&q.outcome, &q.observed, &q.intervened}) check_vars(m, *s);
        out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RelationInstance> query_generation(const CausalDiagram& m, const InformationSet& i,
                                               const std::vector<Query>& queries, const CertifyOptions& options) {
    std::vector<RelationInstance> out;
    for (const auto& q : queries) {
        try {
            out.push_back(solve_identification(m, i, q, options));
        } catch (const NotIdentifiable&) {
        } catch (const NotComputableFromInfo&) {
        }
    }
    return out;
}

Rational CostModel::cost(const CausalDiagram& m, const InformationSet& i, const Query& q) const {
    Rational total = 0;
    for (const auto& v : i.observed) {
        if (auto it = observe.find(v); it != observe.end()) total += it->second;
    }
    for (const auto& v : i.experimental) {
        if (auto it = experiment.find(v); it != experiment.end()) total += it->second;
    }
    total += edge * static_cast<long>(m.edge_count() + m.confounding().size());
    if (auto it = query_value.find(q); it != query_value.end()) total += it->second;
    return total;
}

CostModel parse_costs(std::string_view text) {
    CostModel g;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.rfind('=');
        if (eq == std::string::npos) throw SyntaxError("expected 'key = value'", line_no);
        std::string key = trim(line.substr(0, eq));
        Rational value;
        try {
            value = parse_rational(trim(line.substr(eq + 1)));
        } catch (const FormatError& e) {
            throw SyntaxError(e.what(), line_no);
        }
        auto space = key.find_first_of(" \t");
        std::string kind = key.substr(0, space);
        std::string arg = space == std::string::npos ? std::string() : trim(key.substr(space));
        if (kind == "edge" && arg.empty()) {
            g.edge = value;
        } else if ((kind == "observe" || kind == "experiment") && is_valid_name(arg)) {
            if (value < 0) throw SyntaxError("observation and experiment costs must be non-negative", line_no);
            auto& table = kind == "observe" ? g.observe : g.experiment;
            if (!table.emplace(arg, value).second) throw SyntaxError("duplicate entry for " + arg, line_no);
        } else if (kind == "query" && !arg.empty()) {
            try {
                if (!g.query_value.emplace(parse_query(arg), value).second) {
                    throw SyntaxError("duplicate query entry", line_no);
                }
            } catch (const SyntaxError& e) {
                throw SyntaxError(e.what(), line_no);
            }
        } else {
            throw SyntaxError("unknown cost entry '" + key + "'", line_no);
        }
    }
    return g;
}

ProgramResult causal_program(const SearchSpace& space, const CostModel& g, const CertifyOptions& options) {
    struct Candidate {
        Rational cost;
        std::size_t m, i, q;
    };
    std::vector<Candidate> candidates;
    for (std::size_t m = 0; m < space.models.size(); ++m) {
        for (std::size_t i = 0; i < space.infos.size(); ++i) {
            for (std::size_t q = 0; q < space.queries.size(); ++q) {
                candidates.push_back({g.cost(space.models[m], space.infos[i], space.queries[q]), m, i, q});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return std::tie(a.m, a.i, a.q) < std::tie(b.m, b.i, b.q);
    });

    // Identification is monotone in the information set: anything below an
    // infeasible set is infeasible too.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<InformationSet>> infeasible;
    std::size_t evaluated = 0;
    for (const auto& c : candidates) {
        const auto& info = space.infos[c.i];
        auto& dead = infeasible[{c.m, c.q}];
        if (std::any_of(dead.begin(), dead.end(), [&](const InformationSet& big) { return infoset_contains(info, big); })) {
            continue;
        }
        ++evaluated;
        try {
            auto inst = solve_identification(space.models[c.m], info, space.queries[c.q], options);
            return ProgramResult{std::move(inst), c.cost, evaluated};
        } catch (const NotIdentifiable&) {
            dead.push_back(info);
        } catch (const NotComputableFromInfo&) {
            dead.push_back(info);
        }
    }
    throw Infeasible("no triple in the search space admits an identifying formula");
}

std::string to_string(PairKind k) {
    switch (k) {
    case PairKind::MarkedDirected:
        return "marked";
    case PairKind::Directed:
        return "directed";
    case PairKind::Undirected:
        return "undirected";
    case PairKind::Absent:
        return "absent";
    }
    return "absent";
}

std::vector<PairClass> pattern_summary(const std::vector<CausalDiagram>& models) {
    if (models.empty()) throw EmptyModelSet("pattern_summary needs at least one model");
    const auto& vars = models.front().vertices();
    for (const auto& m : models) {
        if (m.vertices() != vars) throw ScopeMismatch("models must share the same vertices");
    }
    std::vector<PairClass> out;
    const int n = static_cast<int>(vars.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            bool adjacent = true, all_fwd_pure = true, all_bwd_pure = true;
            bool any_fwd = false, any_bwd = false, fwd_or_conf = true, bwd_or_conf = true;
            for (const auto& m : models) {
                bool fwd = has(m.parents(b), a);
                bool bwd = has(m.parents(a), b);
                bool conf = std::any_of(m.confounding().begin(), m.confounding().end(),
                                        [&](Mask c) { return has(c, a) && has(c, b); });
                adjacent = adjacent && (fwd || bwd || conf);
                all_fwd_pure = all_fwd_pure && fwd && !conf;
                all_bwd_pure = all_bwd_pure && bwd && !conf;
                any_fwd = any_fwd || fwd;
                any_bwd = any_bwd || bwd;
                fwd_or_conf = fwd_or_conf && (fwd || conf) && !bwd;
                bwd_or_conf = bwd_or_conf && (bwd || conf) && !fwd;
            }
            const auto& na = vars[static_cast<std::size_t>(a)];
            const auto& nb = vars[static_cast<std::size_t>(b)];
            if (!adjacent) {
                out.push_back({na, nb, PairKind::Absent});
            } else if (all_fwd_pure) {
                out.push_back({na, nb, PairKind::MarkedDirected});
            } else if (all_bwd_pure) {
                out.push_back({nb, na, PairKind::MarkedDirected});
            } else if (fwd_or_conf && any_fwd) {
                out.push_back({na, nb, PairKind::Directed});
            } else if (bwd_or_conf && any_bwd) {
                out.push_back({nb, na, PairKind::Directed});
            } else {
                out.push_back({na, nb, PairKind::Undirected});
            }
        }
    }
    return out;
}

}  // namespace causal
