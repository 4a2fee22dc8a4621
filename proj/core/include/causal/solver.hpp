#pragma once

#include "causal/diagram.hpp"
#include "causal/expr.hpp"
#include "causal/identify.hpp"
#include "causal/rational.hpp"
#include "causal/scm.hpp"
#include "causal/table.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

/// A certified tuple <M, I, Q, F>: F computes Q from I in every model
/// entailed by M.
struct RelationInstance {
    CausalDiagram model;
    InformationSet info;
    Query query;
    Expr formula;
    Method method = Method::Id;
};

/// Controls the randomized oracle check applied to every emitted instance.
struct CertifyOptions {
    int trials = 20;
    std::uint64_t seed = 0x5eed;
    /// Domain size used for every variable of the sampled models.
    int domain = 2;
};

/// First disagreement found by `certify`.
struct Counterexample {
    int trial = 0;
    std::uint64_t seed = 0;
    Assignment values;
    Rational formula_value;
    Rational oracle_value;
    std::string scm_text;
};

/// Seed of the given certification trial, derived from the base seed.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Compares the formula, evaluated on the bank `scm` induces for `info`, with
/// the oracle's P(y | w, do(x)) on every value assignment of the query's
/// variables. The returned counterexample has trial and seed unset.
std::optional<Counterexample> check_against_model(const DiscreteSCM& scm, const InformationSet& info,
                                                  const Query& query, const Expr& formula);

/// Samples `options.trials` models consistent with `model` and compares the
/// formula, evaluated on the bank each model induces for `info`, with the
/// oracle's P(y | w, do(x)) on every value assignment. Returns the first
/// disagreement, if any.
std::optional<Counterexample> certify(const CausalDiagram& model, const InformationSet& info, const Query& query,
                                      const Expr& formula, const CertifyOptions& options = {});

/// Dispatches to back-door adjustment, id, idc, zid or zidc depending on the
/// query and the information set, projecting the diagram onto W first.
/// Throws UnknownVariable, OverlappingSets, PreconditionViolated,
/// NotIdentifiable or NotComputableFromInfo.
RelationInstance solve_identification(const CausalDiagram& m, const InformationSet& i, const Query& q,
                                      const CertifyOptions& options = {});

struct DiscoveryOptions {
    bool include_semi_markovian = false;
    bool require_faithful = false;
    std::size_t max_confounding_size = 2;
    std::size_t max_vars = default_max_vars();
};

/// Every diagram over the table's scope that is Markov compatible with it
/// (and faithful to it, when requested) and identifies `q`, one instance per
/// diagram in enumeration order. Throws SearchSpaceTooLarge.
std::vector<RelationInstance> discover(const DistributionTable& table, const Query& q, const DiscoveryOptions& options,
                                       const CertifyOptions& certify_options = {});

/// The minimal information sets that identify `q` under `m`, ordered by size
/// and then lexicographically by declaration order. Z stays empty unless
/// `allow_experiments` is set.
std::vector<RelationInstance> research_design(const CausalDiagram& m, const Query& q, bool allow_experiments,
                                              const CertifyOptions& options = {});

/// Query families expanded over a diagram's variables.
struct QueryPattern {
    /// P(on | do(v)) for every other variable v.
    std::vector<std::string> effects_on;
    /// P(v | do(of)) for every other variable v.
    std::vector<std::string> effects_of;
    /// P(a | do(b)) for every ordered pair of distinct variables.
    bool all_pairs = false;
    std::vector<Query> explicit_queries;
};

/// Sorted, de-duplicated expansion of the pattern. Throws UnknownVariable.
std::vector<Query> expand_pattern(const CausalDiagram& m, const QueryPattern& pattern);

/// One instance per identifiable query, in the order given.
std::vector<RelationInstance> query_generation(const CausalDiagram& m, const InformationSet& i,
                                               const std::vector<Query>& queries, const CertifyOptions& options = {});

/// Linear objective g(M, I, Q). Omitted entries cost nothing.
struct CostModel {
    std::map<std::string, Rational> observe;
    std::map<std::string, Rational> experiment;
    /// Charged per directed edge and per confounding set of the model.
    Rational edge = 0;
    std::map<Query, Rational> query_value;

    Rational cost(const CausalDiagram& m, const InformationSet& i, const Query& q) const;
};

/// Lines `observe W3 = 3`, `experiment X = 10`, `edge = 1`,
/// `query P(Y|do(X)) = -5`; `#` starts a comment. Throws SyntaxError.
CostModel parse_costs(std::string_view text);

struct SearchSpace {
    std::vector<CausalDiagram> models;
    std::vector<InformationSet> infos;
    std::vector<Query> queries;
};

/// Every (W, Z) with Z within W over the given variables, ordered by
/// |W| + |Z| and then lexicographically by declaration order. Z stays empty
/// unless `allow_experiments` is set.
std::vector<InformationSet> information_lattice(const std::vector<std::string>& vars, bool allow_experiments);

struct ProgramResult {
    RelationInstance instance;
    Rational cost;
    /// Candidate triples examined for feasibility.
    std::size_t evaluated = 0;
};

/// Minimum-cost feasible triple of the space; ties go to the earliest model,
/// then information set, then query, in the space's order. Infeasibility is
/// propagated downward through the information order to prune. Throws
/// Infeasible.
ProgramResult causal_program(const SearchSpace& space, const CostModel& g, const CertifyOptions& options = {});

enum class PairKind { MarkedDirected, Directed, Undirected, Absent };

std::string to_string(PairKind k);

/// Classification of one vertex pair; for the directed kinds the edge points
/// from `a` to `b`.
struct PairClass {
    std::string a;
    std::string b;
    PairKind kind = PairKind::Absent;
};

/// Edge marks shared by a set of models over common vertices. A pair not
/// adjacent in every model is absent. Throws EmptyModelSet or ScopeMismatch.
std::vector<PairClass> pattern_summary(const std::vector<CausalDiagram>& models);

}  // namespace causal
