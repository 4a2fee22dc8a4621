#pragma once

#include "causal/expr.hpp"
#include "causal/rational.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace causal {

/// Variable -> value. Values are indices into the variable's domain 0..d-1.
using Assignment = std::map<std::string, int>;

/// Variable -> domain size.
using Domains = std::map<std::string, int>;

/// Dense table over a product domain. Rows are laid out in mixed radix with
/// the last scope variable varying fastest.
///
/// Also used for the value tables of formulas, which need not sum to one.
class DistributionTable {
public:
    DistributionTable() = default;
    /// Throws FormatError when the entry count does not match the domain.
    DistributionTable(std::vector<std::string> scope, std::vector<int> sizes, std::vector<Rational> entries);
    static DistributionTable zeros(std::vector<std::string> scope, std::vector<int> sizes);

    const std::vector<std::string>& scope() const noexcept { return scope_; }
    const std::vector<int>& sizes() const noexcept { return sizes_; }
    const std::vector<Rational>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Position of `name` in the scope, or -1.
    int position(std::string_view name) const;
    std::size_t index_of(const std::vector<int>& values) const;
    std::vector<int> values_at(std::size_t index) const;

    /// Looks up the row selected by `values`, which must cover the scope.
    const Rational& at(const Assignment& values) const;
    Rational& operator[](std::size_t i) { return entries_[i]; }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }

    Rational total() const;
    bool is_normalized() const { return total() == 1; }
    bool is_positive() const;

    /// Sums out everything outside `keep`, returning a table whose scope is
    /// `keep` in the given order. Throws UnknownVariable.
    DistributionTable marginal(const std::vector<std::string>& keep) const;

    /// Reorders the scope. `order` must be a permutation of the scope.
    DistributionTable reordered(const std::vector<std::string>& order) const;

    friend bool operator==(const DistributionTable&, const DistributionTable&) = default;

private:
    std::vector<std::string> scope_;
    std::vector<int> sizes_;
    std::vector<Rational> entries_;
};

/// Header row with the scope plus `p`, then one row per entry.
std::string to_csv(const DistributionTable& t);

/// Parses the CSV format; domain sizes are inferred as max value + 1 and the
/// rows must cover the full product domain exactly once. Throws FormatError.
DistributionTable parse_csv(std::string_view text);

/// Exact test of a _||_ b | c: P(a,b,c) P(c) = P(a,c) P(b,c) on every row.
bool independent(const DistributionTable& t, const VarSet& a, const VarSet& b, const VarSet& c);

/// A do-assignment, ordered by variable name. Empty means observational.
using Regime = std::vector<std::pair<std::string, int>>;

Regime make_regime(const Assignment& a);
/// "do(X=1,Z=0)" or "do()".
std::string to_string(const Regime& r);
/// Throws FormatError.
Regime parse_regime(std::string_view text);

/// The tables P(W \ dom(z') | do(z')) for regimes over subsets of Z.
struct ExperimentBank {
    InformationSet info;
    Domains domains;
    std::map<Regime, DistributionTable> tables;

    const DistributionTable* find(const Regime& r) const;
};

/// Checks normalization, scopes and the presence of the observational table.
/// Throws FormatError.
void validate(const ExperimentBank& bank);

/// Reads a manifest of `do(...) = file.csv` lines; files resolve relative to
/// the manifest's directory. Throws FormatError.
ExperimentBank load_bank(const std::filesystem::path& manifest);

/// A bank holding a single observational table.
ExperimentBank observational_bank(const DistributionTable& joint);

/// Exact numeric semantics for formulas over a bank.
///
/// Atoms read the regime table matching their do-set; sums range over the
/// bound variable's domain. Results are memoized per node and per value of
/// the node's free symbols. Not safe for concurrent use.
class Evaluator {
public:
    explicit Evaluator(const ExperimentBank& bank);
    /// The bank is held by reference and must outlive the evaluator.
    explicit Evaluator(ExperimentBank&&) = delete;

    /// Value of `e` with its free variables set by `env`. Throws NotComputable,
    /// DivisionByZero or UnknownVariable.
    Rational value(const Expr& e, const Assignment& env);

    const ExperimentBank& bank() const noexcept { return bank_; }

private:
    using Env = std::map<Symbol, int>;
    Rational eval(const Expr& e, Env& env);
    Rational atom(const Expr& e, const Env& env);
    const DistributionTable& marginal(const Regime& r, const std::vector<std::string>& vars);

    const ExperimentBank& bank_;
    std::map<std::pair<Regime, std::vector<std::string>>, DistributionTable> marginals_;
    struct Memo {
        Expr keep_alive;
        std::map<std::vector<int>, Rational> values;
    };
    std::map<const void*, Memo> memo_;
};

/// Table over free_variables(e), ordered by the bank's observational scope.
DistributionTable evaluate(const Expr& e, const ExperimentBank& bank);

/// E_treated[Y] - E_control[Y] under `value_map`. Throws ScopeMismatch.
Rational average_effect(const DistributionTable& treated, const DistributionTable& control,
                        const std::map<int, Rational>& value_map);

}  // namespace causal
