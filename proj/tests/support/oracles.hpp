#pragma once

// Reference implementations used only to check the library. Each one follows
// the textbook definition directly and shares no code with the code under test.

#include "causal/diagram.hpp"
#include "causal/expr.hpp"
#include "causal/scm.hpp"
#include "causal/table.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace causal::testing {

/// Labeled DAGs on n vertices, by filtering every directed graph for cycles.
std::uint64_t count_dags_brute(int n);

/// True when no path between a and b is active given c, by listing every
/// simple path of the graph with one explicit node per latent cause.
bool d_separated_by_paths(const CausalDiagram& d, Mask a, Mask b, Mask c);

/// Joint over V minus the forced variables, summing over every background
/// assignment and solving the equations by repeated sweeps.
DistributionTable brute_joint(const DiscreteSCM& s, const Assignment& forced = {});

/// Counterfactual joint of the world targets given the actual-world condition,
/// with the same naming as the library ("Var@world").
DistributionTable brute_counterfactual(const DiscreteSCM& s, const std::vector<World>& worlds,
                                       const Assignment& condition);

/// Values of every variable at background `u` with `forced` applied.
std::vector<int> brute_solve(const DiscreteSCM& s, const std::vector<int>& u, const Assignment& forced);

/// The experiment bank for `info`, built from brute_joint.
ExperimentBank brute_bank(const DiscreteSCM& s, const InformationSet& info);

/// First value assignment where `f`, evaluated on brute_bank(s, info), differs
/// from P(y | w, do(x)) computed by brute_joint. Rows with P(w | do(x)) = 0 are
/// skipped.
std::optional<Assignment> oracle_mismatch(const DiscreteSCM& s, const InformationSet& info, const Query& q,
                                          const Expr& f);

}  // namespace causal::testing
