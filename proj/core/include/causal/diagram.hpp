#pragma once

#include "causal/variables.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace causal {

/// A directed acyclic graph over named endogenous variables together with a
/// confounding family: a Sperner family of vertex subsets (each of size >= 2),
/// every member denoting one latent common cause of its variables.
///
/// Values are immutable once constructed. Every constructor validates the
/// invariants and throws CycleError, SingletonConfounding, SpernerViolation or
/// UnknownVariable.
class CausalDiagram {
public:
    using Edge = std::pair<std::string, std::string>;

    CausalDiagram() = default;

    /// `normalize` drops confounding sets dominated by another member instead
    /// of rejecting them.
    CausalDiagram(std::vector<std::string> vertices, const std::vector<Edge>& edges,
                  const std::vector<VarSet>& confounding, bool normalize = false);

    /// Index-level constructor: `parents[i]` is the parent mask of vertex i.
    static CausalDiagram from_masks(std::vector<std::string> vertices, std::vector<Mask> parents,
                                    std::vector<Mask> confounding, bool normalize = false);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& vertices() const noexcept { return names_; }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    Mask all() const noexcept { return size() == 64 ? ~Mask{0} : bit(static_cast<int>(size())) - 1; }

    std::optional<int> find(std::string_view name) const;
    /// Throws UnknownVariable.
    int index_of(std::string_view name) const;
    Mask mask_of(const VarSet& names) const;
    VarSet names_of(Mask m) const;

    Mask parents(int v) const { return parents_.at(static_cast<std::size_t>(v)); }
    Mask children(int v) const { return children_.at(static_cast<std::size_t>(v)); }
    const std::vector<Mask>& parent_masks() const noexcept { return parents_; }
    /// Canonical order: lexicographic over each member's ascending index list.
    const std::vector<Mask>& confounding() const noexcept { return confounding_; }
    bool is_markovian() const noexcept { return confounding_.empty(); }

    /// (parent, child) index pairs ordered by parent then child.
    std::vector<std::pair<int, int>> edge_indices() const;
    std::vector<Edge> edges() const;
    std::vector<VarSet> confounding_sets() const;
    std::size_t edge_count() const;

    /// Topological order; ties resolved by declaration index.
    const std::vector<int>& topological_order() const noexcept { return topo_; }

    friend bool operator==(const CausalDiagram& a, const CausalDiagram& b) {
        return a.names_ == b.names_ && a.parents_ == b.parents_ && a.confounding_ == b.confounding_;
    }

private:
    void validate_and_index(bool normalize);

    std::vector<std::string> names_;
    std::vector<Mask> parents_;
    std::vector<Mask> children_;
    std::vector<Mask> confounding_;
    std::vector<int> topo_;
};

/// Removes dominated members and singletons, returning a sorted Sperner family.
std::vector<Mask> normalize_confounding(std::vector<Mask> family);

/// Lexicographic comparison of the ascending index lists of two masks.
bool mask_lex_less(Mask a, Mask b);

// ---------------------------------------------------------------------------
// DSL
// ---------------------------------------------------------------------------

struct DiagramParseOptions {
    bool normalize = false;
};

/// Parses the `.cd` diagram language. Statements are separated by newlines or
/// semicolons: `vars A, B` (first, exactly once), `A -> B`, `A <-> B`,
/// `conf {A, B, C}`, and `#` comments.
CausalDiagram parse_diagram(std::string_view text, DiagramParseOptions options = {});

/// Canonical DSL text: vars in declaration order, edges sorted, confounding
/// sets sorted; one statement per line.
std::string to_dsl(const CausalDiagram& d);

/// Same statements joined by "; " for single-line listings.
std::string to_dsl_inline(const CausalDiagram& d);

// ---------------------------------------------------------------------------
// Graph primitives
// ---------------------------------------------------------------------------

/// `s` together with every vertex having a directed path into `s`.
VarSet ancestors(const CausalDiagram& d, const VarSet& s);
Mask ancestors(const CausalDiagram& d, Mask s);
Mask descendants(const CausalDiagram& d, Mask s);

/// Surgery: drops edges into `cut_incoming` and out of `cut_outgoing`. Members
/// of `cut_incoming` leave every confounding set; the family is re-normalized.
CausalDiagram mutilate(const CausalDiagram& d, const VarSet& cut_incoming, const VarSet& cut_outgoing);
CausalDiagram mutilate(const CausalDiagram& d, Mask cut_incoming, Mask cut_outgoing);

/// Blocks of the partition induced by chains of overlapping confounding sets.
std::vector<VarSet> c_components(const CausalDiagram& d);
/// Component masks of the sub-diagram induced on `within`, ordered by lowest index.
std::vector<Mask> c_components(const CausalDiagram& d, Mask within);

/// d-separation on the latent-augmented DAG (one fresh parent per confounding
/// set). Throws UnknownVariable, or OverlappingSets when the sets intersect or
/// `a`/`b` is empty.
bool d_separated(const CausalDiagram& d, const VarSet& a, const VarSet& b, const VarSet& c);
bool d_separated(const CausalDiagram& d, Mask a, Mask b, Mask c);

struct IndependenceStatement {
    VarSet left;
    VarSet right;
    VarSet given;

    friend bool operator==(const IndependenceStatement&, const IndependenceStatement&) = default;
};

std::string to_string(const IndependenceStatement& s);

/// Every (A _||_ B | C) with singleton A, B (A before B in declaration order)
/// and C ranging over subsets of the rest, ordered by pair, then |C|, then C's
/// index mask.
std::vector<IndependenceStatement> implied_independences(const CausalDiagram& d);

/// Sub-diagram induced on `keep`; confounding sets are intersected with it.
CausalDiagram induced_subgraph(const CausalDiagram& d, Mask keep);

/// Marginalizes the vertices outside `observed`: hidden chains become direct
/// edges and hidden common causes become confounding sets.
CausalDiagram latent_projection(const CausalDiagram& d, const VarSet& observed);

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

struct EnumerationOptions {
    bool include_semi_markovian = false;
    std::size_t max_confounding_size = 2;
    std::size_t max_vars = 5;
};

/// Default bound on enumerated variables, honouring CAUSAL_MAX_VARS.
std::size_t default_max_vars();

/// Streams every labeled DAG over `vars` (crossed with every confounding family
/// when semi-Markovian). DAGs are ordered lexicographically by their ternary
/// adjacency code over vertex pairs (0,1), (0,2), ..., (n-2,n-1) where 0 means
/// no edge, 1 means i->j and 2 means j->i. Returning false from `visit` stops
/// the stream. Throws SearchSpaceTooLarge when |vars| exceeds the bound.
void enumerate_diagrams(const std::vector<std::string>& vars, const EnumerationOptions& options,
                        const std::function<bool(const CausalDiagram&)>& visit);

/// Restricts the stream to ternary DAG codes in [first_code, last_code), so
/// workers can split the space deterministically.
void enumerate_diagrams(const std::vector<std::string>& vars, const EnumerationOptions& options,
                        std::uint64_t first_code, std::uint64_t last_code,
                        const std::function<bool(const CausalDiagram&)>& visit);

/// 3^(n(n-1)/2): the raw DAG-code range enumerate_diagrams walks.
std::uint64_t dag_code_count(std::size_t n);

std::vector<CausalDiagram> collect_diagrams(const std::vector<std::string>& vars,
                                            const EnumerationOptions& options);

/// Every Sperner family of subsets of `n` vertices with member sizes in
/// [2, max_size], ordered by family size then lexicographically.
std::vector<std::vector<Mask>> confounding_families(std::size_t n, std::size_t max_size);

}  // namespace causal
