#pragma once

#include "causal/diagram.hpp"
#include "causal/table.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

/// An exogenous variable with its own rational distribution. Background
/// variables are mutually independent.
struct BackgroundVar {
    std::string name;
    std::vector<Rational> probs;

    friend bool operator==(const BackgroundVar&, const BackgroundVar&) = default;
};

/// A dense lookup table for one endogenous variable. Rows are indexed in
/// mixed radix over `inputs` followed by `background`, last input fastest.
struct Mechanism {
    std::vector<std::string> inputs;
    std::vector<std::string> background;
    std::vector<int> table;

    friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

/// A finite recursive structural causal model with exact rational semantics.
class DiscreteSCM {
public:
    /// Validates acyclicity, totality of every mechanism, normalized background
    /// distributions and in-domain outputs. Throws CycleError, UnknownVariable,
    /// FormatError or OutOfDomainValue.
    DiscreteSCM(std::vector<std::string> vars, std::vector<int> domains, std::vector<BackgroundVar> background,
                std::vector<Mechanism> mechanisms);

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const std::vector<int>& domains() const noexcept { return domains_; }
    const std::vector<BackgroundVar>& background() const noexcept { return background_; }
    const std::vector<Mechanism>& mechanisms() const noexcept { return mechanisms_; }
    const std::vector<int>& topological_order() const noexcept { return topo_; }
    Domains domain_map() const;

    /// Throws UnknownVariable.
    int index_of(std::string_view name) const;

    /// Solves every endogenous variable for background values `u`. Entries of
    /// `forced` that are non-negative replace the corresponding mechanism.
    std::vector<int> solve(const std::vector<int>& u, const std::vector<int>& forced = {}) const;

    /// Output of variable `i` given endogenous values `v` and background `u`.
    int output(int i, const std::vector<int>& v, const std::vector<int>& u) const;

    /// Number of joint background assignments, enumerated in mixed radix with
    /// the last background fastest.
    std::size_t background_count() const;
    std::vector<int> background_values(std::size_t index) const;
    Rational background_probability(const std::vector<int>& u) const;

    friend bool operator==(const DiscreteSCM& a, const DiscreteSCM& b) {
        return a.vars_ == b.vars_ && a.domains_ == b.domains_ && a.background_ == b.background_ &&
               a.mechanisms_ == b.mechanisms_;
    }

private:
    struct Wiring {
        std::vector<int> inputs;
        std::vector<int> background;
        std::vector<int> radix;
    };

    std::vector<std::string> vars_;
    std::vector<int> domains_;
    std::vector<BackgroundVar> background_;
    std::vector<Mechanism> mechanisms_;
    std::vector<Wiring> wiring_;
    std::vector<int> topo_;
};

/// Edges from every endogenous mechanism input; confounding sets from every
/// background variable feeding two or more mechanisms, normalized.
CausalDiagram induced_diagram(const DiscreteSCM& s);

/// Exact joint over V in declaration order.
DistributionTable observational_joint(const DiscreteSCM& s);

/// Submodel with the mechanisms of the assigned variables replaced by
/// constants. Throws UnknownVariable or OutOfDomainValue.
DiscreteSCM intervene(const DiscreteSCM& s, const Assignment& assignment);

/// Joint over V minus the intervened variables under do(assignment).
DistributionTable interventional_joint(const DiscreteSCM& s, const Assignment& assignment);

/// P(targets | do(assignment)) with the scope in the order given. Throws
/// UnknownVariable, OutOfDomainValue or OverlappingSets.
DistributionTable interventional(const DiscreteSCM& s, const Assignment& assignment,
                                 const std::vector<std::string>& targets);

/// One hypothetical world: the intervention and the variables read from it.
struct World {
    Assignment intervention;
    std::vector<std::string> targets;
};

/// Joint over every world's targets given the actual-world `condition`, with
/// all worlds sharing the same background assignment. Target k of world w is
/// named "Target@w". Throws ZeroProbabilityCondition.
DistributionTable counterfactual_joint(const DiscreteSCM& s, const std::vector<World>& worlds,
                                       const Assignment& condition);

/// A seeded random model whose induced diagram is `d`.
///
/// Every variable reads a private background with one forcing state per
/// domain value plus one state that defers to a random lookup table over the
/// parents and the shared backgrounds, so the observational joint is strictly
/// positive. Lookup tables are resampled until they depend on every input. Every confounding set gets one shared binary background.
/// Variables missing from `domains` default to binary.
DiscreteSCM random_scm(const CausalDiagram& d, const Domains& domains, std::uint64_t seed);

/// Text format: `var X 2`, `background U 1/2 1/2`, `mechanism Y inputs X, U`
/// followed by one `Y(X=0, U=0) = 1` row per input combination. Throws
/// SyntaxError.
DiscreteSCM parse_scm(std::string_view text);
std::string to_scm_text(const DiscreteSCM& s);

/// The bank an experimenter with scopes (W, Z) would collect from `s`.
ExperimentBank make_bank(const DiscreteSCM& s, const InformationSet& info);

}  // namespace causal
