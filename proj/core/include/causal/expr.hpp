#pragma once

#include "causal/variables.hpp"

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

/// A variable occurrence inside a formula. `primes` distinguishes bound copies
/// of the same variable (x, x', x''); free occurrences carry zero primes.
struct Symbol {
    std::string var;
    int primes = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);
};

/// Lowercase variable name followed by `primes` apostrophes.
std::string to_string(const Symbol& s);

/// Immutable formula tree over population probabilities.
///
/// Node kinds: One; Atom P(outcome | observed, do(intervened)); Product;
/// Sum (marginalization over one bound symbol); Quotient. Sub-trees are shared.
class Expr {
public:
    enum class Kind { One, Atom, Product, Sum, Quotient };

    /// The constant 1.
    Expr();

    static Expr one() { return Expr(); }
    /// Throws Error unless the three lists name pairwise distinct variables and
    /// the outcome is non-empty.
    static Expr atom(std::vector<Symbol> outcome, std::vector<Symbol> observed = {},
                     std::vector<Symbol> intervened = {});
    /// Flattens nested products and drops One factors. Zero factors yield One
    /// and a single factor is returned unchanged.
    static Expr product(std::vector<Expr> factors);
    /// Throws Error when `bound` is not free in `body`.
    static Expr sum(Symbol bound, Expr body);
    static Expr quotient(Expr numerator, Expr denominator);

    Kind kind() const noexcept;
    bool is_one() const noexcept { return kind() == Kind::One; }

    const std::vector<Symbol>& outcome() const;
    const std::vector<Symbol>& observed() const;
    const std::vector<Symbol>& intervened() const;
    const std::vector<Expr>& factors() const;
    const Symbol& bound() const;
    const Expr& body() const;
    const Expr& numerator() const;
    const Expr& denominator() const;

    /// Sorted free symbols (bound occurrences excluded).
    const std::vector<Symbol>& free_symbols() const noexcept;
    bool mentions(const Symbol& s) const;

    /// Stable node identity, used for memoized evaluation.
    const void* id() const noexcept { return node_.get(); }

    /// Structural equality (symbols compared literally, not up to renaming).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// P(outcome | observed, do(intervened)) at the variable level.
struct Query {
    VarSet outcome;
    VarSet observed;
    VarSet intervened;

    friend bool operator==(const Query&, const Query&) = default;
    friend auto operator<=>(const Query&, const Query&) = default;
};

/// Throws OverlappingSets when the sets intersect and PreconditionViolated when
/// the outcome is empty.
void validate(const Query& q);

/// The family P(w | do(z')) for every z' within `experimental`, where the
/// experimental scope is contained in the observed scope.
struct InformationSet {
    VarSet observed;
    VarSet experimental;

    friend bool operator==(const InformationSet&, const InformationSet&) = default;
    friend auto operator<=>(const InformationSet&, const InformationSet&) = default;
};

/// Throws PreconditionViolated when Z is not contained in W.
void validate(const InformationSet& i);

/// Variable-level text with names kept verbatim, e.g. `P(Y|W,do(X))`.
std::string to_string(const Query& q);
std::string to_string(const InformationSet& i);

/// Parses the variable-level form `P(Y,Z | W, do(X))`, keeping names verbatim.
/// Throws SyntaxError.
Query parse_query(std::string_view text);

/// Parses the formula grammar. `declared` lists the model's variables; tokens
/// match them case-insensitively. Throws SyntaxError, UnknownVariable,
/// UnboundVariable or DuplicateBinding.
Expr parse_expr(std::string_view text, const std::vector<std::string>& declared);

/// Canonical text: bound symbols renamed to the fewest primes that avoid the
/// free symbols and enclosing binders, product factors sorted.
std::string render(const Expr& e);

/// Renames bound symbols and sorts products exactly as `render` does.
Expr canonical(const Expr& e);

VarSet free_variables(const Expr& e);

/// Every atom's intervened set lies in Z and all its variables lie in W.
bool computable_from(const Expr& e, const InformationSet& info);

/// W_inner within W_outer and Z_inner within Z_outer.
bool infoset_contains(const InformationSet& inner, const InformationSet& outer);

/// Conservative syntactic rewriting: drops One factors, flattens products,
/// marginalizes atoms under a sum over one of their outcome symbols (pulling
/// independent factors out of the sum), cancels identical quotient factors and
/// folds P(a,b|c)/P(b|c) into P(a|b,c).
Expr simplify(const Expr& e);

Expr query_of(const Query& q);

/// Compares the renders of both simplified expressions.
bool expr_equal_canonical(const Expr& a, const Expr& b);

/// Collects every atom of `e`, outermost first.
std::vector<Expr> atoms_of(const Expr& e);

}  // namespace causal
