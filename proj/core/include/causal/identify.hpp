#pragma once

#include "causal/diagram.hpp"
#include "causal/expr.hpp"

#include <string>
#include <utility>
#include <vector>

namespace causal {

enum class Method { DirectAdjustment, Backdoor, Frontdoor, Id, Idc, Zid, Zidc };

std::string to_string(Method m);

/// Outcome of an identification attempt. When `identified` is false the
/// formula is One and `witness` holds the vertex sets at the point of failure
/// (the current sub-graph and the offending c-component).
struct IdentificationResult {
    bool identified = false;
    Expr formula;
    Method method = Method::Id;
    /// Distinct do-sets of the formula's atoms (surrogate experiments used).
    std::vector<VarSet> used_regime;
    std::vector<VarSet> witness;
};

/// Sum over the parents of x of P(y | x, pa) P(pa). Throws UnknownVariable,
/// PreconditionViolated when y meets {x} or the parents of x, and
/// LatentParent when x belongs to a confounding set.
IdentificationResult adjust_direct_causes(const CausalDiagram& d, const std::string& x, const VarSet& y);

/// True when `z` holds no descendant of x and d-separates x from y once the
/// edges out of x are removed.
bool satisfies_backdoor(const CausalDiagram& d, const std::string& x, const std::string& y, const VarSet& z);

/// Every admissible back-door set within `candidates` (default: all of
/// V \ {x, y}) with its adjustment formula, by size and then by declaration
/// order.
std::vector<std::pair<VarSet, Expr>> backdoor_sets(const CausalDiagram& d, const std::string& x, const std::string& y);
std::vector<std::pair<VarSet, Expr>> backdoor_sets(const CausalDiagram& d, const std::string& x, const std::string& y,
                                                   const VarSet& candidates);

/// The adjustment formula sum_z P(y|x,z) P(z), or P(y|x) for empty z.
Expr adjustment_formula(const std::string& x, const VarSet& y, const VarSet& z);

/// True when `z` satisfies the front-door conditions relative to (x, y).
bool satisfies_frontdoor(const CausalDiagram& d, const std::string& x, const std::string& y, const VarSet& z);

/// Searches mediator sets smallest first. Reports failure through the status.
IdentificationResult frontdoor(const CausalDiagram& d, const std::string& x, const std::string& y);

/// Complete identification of P(y | do(x)) from P(v).
IdentificationResult id(const CausalDiagram& d, const VarSet& x, const VarSet& y);

/// Complete identification of P(y | w, do(x)) from P(v).
IdentificationResult idc(const CausalDiagram& d, const VarSet& x, const VarSet& y, const VarSet& w);

/// Identification of P(y | do(x)) from P(v | do(z')) for every z' within
/// `z_scope`.
IdentificationResult zid(const CausalDiagram& d, const VarSet& z_scope, const VarSet& x, const VarSet& y);

/// The conditional reduction run over zid. Sound but not known to be complete.
IdentificationResult zidc(const CausalDiagram& d, const VarSet& z_scope, const VarSet& x, const VarSet& y,
                          const VarSet& w);

/// Graphical precondition of do-calculus rule 1, 2 or 3 for the statement
/// about P(y | do(x), z, w) (rule 1) or P(y | do(x), do(z), w) (rules 2, 3).
/// Throws OverlappingSets or PreconditionViolated for a bad rule number.
bool do_rule_applicable(const CausalDiagram& d, int rule, const VarSet& y, const VarSet& x, const VarSet& z,
                        const VarSet& w);

}  // namespace causal
