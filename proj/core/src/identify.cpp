#include "causal/identify.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <set>

namespace causal {

std::string to_string(Method m) {
    switch (m) {
    case Method::DirectAdjustment:
        return "direct-adjustment";
    case Method::Backdoor:
        return "backdoor";
    case Method::Frontdoor:
        return "frontdoor";
    case Method::Id:
        return "id";
    case Method::Idc:
        return "idc";
    case Method::Zid:
        return "zid";
    case Method::Zidc:
        return "zidc";
    }
    return "unknown";
}

namespace {

std::vector<Symbol> symbols(const VarSet& s) {
    std::vector<Symbol> out;
    for (const auto& v : s) out.push_back({v, 0});
    return out;
}

Expr sum_over_names(const VarSet& vars, Expr body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Expr::sum({*it, 0}, std::move(body));
    return body;
}

void check_vars(const CausalDiagram& d, const VarSet& s) {
    for (const auto& v : s) d.index_of(v);
}

std::vector<VarSet> regimes_of(const Expr& e) {
    std::set<VarSet> seen;
    for (const auto& a : atoms_of(e)) {
        VarSet r;
        for (const auto& s : a.intervened()) r.insert(s.var);
        if (!r.empty()) seen.insert(r);
    }
    return {seen.begin(), seen.end()};
}

IdentificationResult failure(Method m, std::vector<VarSet> witness = {}) {
    IdentificationResult r;
    r.method = m;
    r.witness = std::move(witness);
    return r;
}

IdentificationResult success(Method m, const Expr& formula) {
    IdentificationResult r;
    r.identified = true;
    r.method = m;
    r.formula = simplify(formula);
    r.used_regime = regimes_of(r.formula);
    return r;
}

/// Raised inside the recursion when a hedge blocks identification.
struct Hedge {
    Mask graph;
    Mask component;
};

/// The recursive identification procedure over vertex masks of one diagram.
///
/// The distribution argument is symbolic: either the untouched regime
/// distribution P(scope | do(r)), a chain of conditionals in topological
/// order, or an arbitrary joint expression.
class Engine {
public:
    Engine(const CausalDiagram& d, Mask z_scope) : d_(d), z_scope_(z_scope), rank_(d.size()) {
        const auto& topo = d.topological_order();
        for (std::size_t k = 0; k < topo.size(); ++k) rank_[static_cast<std::size_t>(topo[k])] = static_cast<int>(k);
    }

    Expr run(Mask x, Mask y) {
        Dist p;
        p.kind = Dist::Kind::Pristine;
        p.scope = d_.all();
        return recurse(y, x, p, d_.all());
    }

private:
    struct Dist {
        enum class Kind { Pristine, Chain, General };
        Kind kind = Kind::Pristine;
        Mask scope = 0;
        Mask regime = 0;
        std::vector<std::pair<int, Expr>> factors;
        Expr joint;
    };

    Symbol sym(int i) const { return {d_.name(i), 0}; }

    std::vector<Symbol> syms(Mask m) const {
        std::vector<Symbol> out;
        for (int i : members(m)) out.push_back(sym(i));
        return out;
    }

    /// Vertices of `m` ordered by topological rank.
    std::vector<int> ordered(Mask m) const {
        auto out = members(m);
        std::sort(out.begin(), out.end(), [&](int a, int b) { return rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]; });
        return out;
    }

    Mask predecessors(int i, Mask scope) const {
        Mask out = 0;
        for (int j : members(scope)) {
            if (rank_[static_cast<std::size_t>(j)] < rank_[static_cast<std::size_t>(i)]) out |= bit(j);
        }
        return out;
    }

    /// Ancestors of y inside v, ignoring edges into `cut`.
    Mask ancestors_within(Mask y, Mask v, Mask cut) const {
        Mask seen = y & v;
        std::vector<int> stack = members(seen);
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            if (has(cut, i)) continue;
            for (int p : members(d_.parents(i) & v)) {
                if (!has(seen, p)) {
                    seen |= bit(p);
                    stack.push_back(p);
                }
            }
        }
        return seen;
    }

    Expr sum_over(Mask vars, Expr body) const {
        auto list = members(vars);
        for (auto it = list.rbegin(); it != list.rend(); ++it) body = Expr::sum(sym(*it), std::move(body));
        return body;
    }

    Expr joint_expr(const Dist& p) const {
        switch (p.kind) {
        case Dist::Kind::Pristine:
            return Expr::atom(syms(p.scope), {}, syms(p.regime));
        case Dist::Kind::Chain: {
            std::vector<Expr> fs;
            for (const auto& f : p.factors) fs.push_back(f.second);
            return Expr::product(std::move(fs));
        }
        case Dist::Kind::General:
            return p.joint;
        }
        return Expr::one();
    }

    Dist marginal(const Dist& p, Mask keep) const {
        Dist out;
        out.scope = keep;
        out.regime = p.regime;
        if (keep == p.scope) return p;
        switch (p.kind) {
        case Dist::Kind::Pristine:
            out.kind = Dist::Kind::Pristine;
            return out;
        case Dist::Kind::Chain: {
            // A removed vertex whose symbol no other factor reads sums out to 1.
            auto factors = p.factors;
            Mask removed = p.scope & ~keep;
            bool progress = true;
            while (removed != 0 && progress) {
                progress = false;
                for (int j : members(removed)) {
                    bool read = std::any_of(factors.begin(), factors.end(), [&](const auto& f) {
                        return f.first != j && f.second.mentions(sym(j));
                    });
                    if (read) continue;
                    factors.erase(std::find_if(factors.begin(), factors.end(), [&](const auto& f) { return f.first == j; }));
                    removed &= ~bit(j);
                    progress = true;
                }
            }
            if (removed == 0) {
                out.kind = Dist::Kind::Chain;
                out.factors = std::move(factors);
                return out;
            }
            std::vector<Expr> fs;
            for (const auto& f : factors) fs.push_back(f.second);
            out.kind = Dist::Kind::General;
            out.joint = sum_over(removed, Expr::product(std::move(fs)));
            return out;
        }
        case Dist::Kind::General:
            out.kind = Dist::Kind::General;
            out.joint = sum_over(p.scope & ~keep, p.joint);
            return out;
        }
        return out;
    }

    /// P(v_i | predecessors of v_i within the scope).
    Expr conditional(const Dist& p, int i) const {
        Mask pred = predecessors(i, p.scope);
        switch (p.kind) {
        case Dist::Kind::Pristine:
            return Expr::atom({sym(i)}, syms(pred), syms(p.regime));
        case Dist::Kind::Chain:
            for (const auto& f : p.factors) {
                if (f.first == i) return f.second;
            }
            throw Error("internal: chain factor missing");
        case Dist::Kind::General: {
            Expr num = joint_expr(marginal(p, pred | bit(i)));
            if (pred == 0) return num;
            return Expr::quotient(num, joint_expr(marginal(p, pred)));
        }
        }
        return Expr::one();
    }

    Expr recurse(Mask y, Mask x, const Dist& p, Mask v) {
        // Line 1: no intervention left.
        if (x == 0) return joint_expr(marginal(p, y));

        // Line 2: restrict to the ancestors of y.
        Mask an = ancestors_within(y, v, 0);
        if (an != v) return recurse(y, x & an, marginal(p, an), an);

        // Line 3: add interventions that cannot affect y.
        Mask w = (v & ~x) & ~ancestors_within(y, v, x);
        if (w != 0) return recurse(y, x | w, p, v);

        // Surrogate experiments: read interventions straight from the bank
        // while the distribution is still a regime table.
        if (p.kind == Dist::Kind::Pristine) {
            Mask zx = x & z_scope_;
            if (zx != 0) {
                Dist q;
                q.kind = Dist::Kind::Pristine;
                q.scope = v & ~zx;
                q.regime = p.regime | zx;
                return recurse(y, x & ~zx, q, v & ~zx);
            }
        }

        // Line 4: factorize over the c-components of G \ X.
        auto comps = c_components(d_, v & ~x);
        if (comps.size() > 1) {
            std::vector<Expr> terms;
            for (Mask s : comps) terms.push_back(recurse(s, v & ~s, p, v));
            return sum_over(v & ~(y | x), Expr::product(std::move(terms)));
        }
        Mask s = comps.front();
        auto graph_comps = c_components(d_, v);

        // Line 5: hedge.
        if (graph_comps.size() == 1) throw Hedge{v, s};

        // Line 6: s is a c-component of G.
        if (std::find(graph_comps.begin(), graph_comps.end(), s) != graph_comps.end()) {
            std::vector<Expr> terms;
            for (int i : ordered(s)) terms.push_back(conditional(p, i));
            return sum_over(s & ~y, Expr::product(std::move(terms)));
        }

        // Line 7: s sits inside a larger c-component s'.
        Mask big = *std::find_if(graph_comps.begin(), graph_comps.end(), [&](Mask c) { return subset_of(s, c); });
        Dist q;
        q.kind = Dist::Kind::Chain;
        q.scope = big;
        for (int i : ordered(big)) q.factors.emplace_back(i, conditional(p, i));
        return recurse(y, x & big, q, big);
    }

    const CausalDiagram& d_;
    Mask z_scope_;
    std::vector<int> rank_;
};

void require_disjoint(const VarSet& a, const VarSet& b, const char* what) {
    if (!disjoint(a, b)) throw OverlappingSets(std::string(what) + " must be disjoint");
}

/// Reduces P(y | w, do(x)) by moving members of w into the intervention set
/// under rule 2, then divides the joint result by its marginal over w.
template <typename Runner>
IdentificationResult conditional_reduction(const CausalDiagram& d, VarSet x, const VarSet& y, VarSet w, Method method,
                                           Runner&& runner) {
    bool moved = true;
    while (moved && !w.empty()) {
        moved = false;
        for (const auto& z : w) {
            VarSet rest = w;
            rest.erase(z);
            if (do_rule_applicable(d, 2, y, x, {z}, rest)) {
                x.insert(z);
                w = rest;
                moved = true;
                break;
            }
        }
    }
    if (w.empty()) {
        auto r = runner(x, y);
        if (r.identified) return success(method, r.formula);
        r.method = method;
        return r;
    }
    auto r = runner(x, set_union(y, w));
    if (!r.identified) {
        r.method = method;
        return r;
    }
    return success(method, Expr::quotient(r.formula, sum_over_names(y, r.formula)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Adjustment criteria
// ---------------------------------------------------------------------------

Expr adjustment_formula(const std::string& x, const VarSet& y, const VarSet& z) {
    Expr outcome = Expr::atom(symbols(y), symbols(set_union({x}, z)));
    if (z.empty()) return outcome;
    return sum_over_names(z, Expr::product({outcome, Expr::atom(symbols(z))}));
}

IdentificationResult adjust_direct_causes(const CausalDiagram& d, const std::string& x, const VarSet& y) {
    int xi = d.index_of(x);
    check_vars(d, y);
    if (y.empty()) throw PreconditionViolated("the outcome set is empty");
    VarSet pa = d.names_of(d.parents(xi));
    if (y.contains(x) || !disjoint(y, pa)) {
        throw PreconditionViolated("the outcome must avoid the treatment and its parents");
    }
    for (Mask c : d.confounding()) {
        if (has(c, xi)) throw LatentParent(x + " shares a latent cause, so its direct causes are not all observed");
    }
    return success(Method::DirectAdjustment, adjustment_formula(x, y, pa));
}

bool satisfies_backdoor(const CausalDiagram& d, const std::string& x, const std::string& y, const VarSet& z) {
    int xi = d.index_of(x);
    Mask zm = d.mask_of(z);
    if ((zm & descendants(d, bit(xi))) != 0) return false;
    if (z.contains(y)) return false;
    return d_separated(mutilate(d, Mask{0}, bit(xi)), bit(xi), bit(d.index_of(y)), zm);
}

std::vector<std::pair<VarSet, Expr>> backdoor_sets(const CausalDiagram& d, const std::string& x, const std::string& y,
                                                   const VarSet& candidates) {
    int xi = d.index_of(x);
    int yi = d.index_of(y);
    if (xi == yi) throw OverlappingSets("treatment and outcome must differ");
    Mask pool = d.mask_of(candidates) & ~bit(xi) & ~bit(yi) & ~descendants(d, bit(xi));
    auto pool_list = members(pool);
    std::vector<Mask> subsets;
    for (Mask code = 0; code < bit(static_cast<int>(pool_list.size())); ++code) {
        Mask m = 0;
        for (int k : members(code)) m |= bit(pool_list[static_cast<std::size_t>(k)]);
        subsets.push_back(m);
    }
    std::sort(subsets.begin(), subsets.end(), [](Mask a, Mask b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        return mask_lex_less(a, b);
    });
    auto cut = mutilate(d, Mask{0}, bit(xi));
    std::vector<std::pair<VarSet, Expr>> out;
    for (Mask m : subsets) {
        if (d_separated(cut, bit(xi), bit(yi), m)) {
            VarSet z = d.names_of(m);
            out.emplace_back(z, adjustment_formula(x, {y}, z));
        }
    }
    return out;
}

std::vector<std::pair<VarSet, Expr>> backdoor_sets(const CausalDiagram& d, const std::string& x, const std::string& y) {
    return backdoor_sets(d, x, y, VarSet(d.vertices().begin(), d.vertices().end()));
}

bool satisfies_frontdoor(const CausalDiagram& d, const std::string& x, const std::string& y, const VarSet& z) {
    int xi = d.index_of(x);
    int yi = d.index_of(y);
    Mask zm = d.mask_of(z);
    if (zm == 0 || has(zm, xi) || has(zm, yi)) return false;
    // Every directed path from x to y passes through z.
    Mask seen = bit(xi);
    std::vector<int> stack{xi};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int c : members(d.children(v))) {
            if (has(zm, c) || has(seen, c)) continue;
            if (c == yi) return false;
            seen |= bit(c);
            stack.push_back(c);
        }
    }
    // No open back-door path from x into z.
    if (!d_separated(mutilate(d, Mask{0}, bit(xi)), bit(xi), zm, 0)) return false;
    // x blocks every back-door path from z to y.
    return d_separated(mutilate(d, Mask{0}, zm), zm, bit(yi), bit(xi));
}

IdentificationResult frontdoor(const CausalDiagram& d, const std::string& x, const std::string& y) {
    int xi = d.index_of(x);
    int yi = d.index_of(y);
    if (xi == yi) throw OverlappingSets("treatment and outcome must differ");
    auto pool_list = members(d.all() & ~bit(xi) & ~bit(yi));
    std::vector<Mask> subsets;
    for (Mask code = 1; code < bit(static_cast<int>(pool_list.size())); ++code) {
        Mask m = 0;
        for (int k : members(code)) m |= bit(pool_list[static_cast<std::size_t>(k)]);
        subsets.push_back(m);
    }
    std::sort(subsets.begin(), subsets.end(), [](Mask a, Mask b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        return mask_lex_less(a, b);
    });
    for (Mask m : subsets) {
        VarSet z = d.names_of(m);
        if (!satisfies_frontdoor(d, x, y, z)) continue;
        Symbol xs{x, 0};
        Expr inner = Expr::sum(xs, Expr::product({Expr::atom({{y, 0}}, symbols(set_union({x}, z))), Expr::atom({xs})}));
        Expr formula = sum_over_names(z, Expr::product({Expr::atom(symbols(z), {xs}), inner}));
        return success(Method::Frontdoor, formula);
    }
    return failure(Method::Frontdoor);
}

// ---------------------------------------------------------------------------
// ID family
// ---------------------------------------------------------------------------

namespace {

/// Drops conditioning symbols that rule 1 declares irrelevant to an atom's
/// outcome. A sum whose bound symbol would vanish keeps its original body.
Expr prune_conditioning(const CausalDiagram& d, const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::One:
        return e;
    case Expr::Kind::Atom: {
        Mask out = 0, regime = 0;
        for (const auto& s : e.outcome()) out |= bit(d.index_of(s.var));
        for (const auto& s : e.intervened()) regime |= bit(d.index_of(s.var));
        auto cut = mutilate(d, regime, Mask{0});
        std::vector<Symbol> kept = e.observed();
        for (auto it = kept.end(); it != kept.begin();) {
            --it;
            Mask given = regime;
            for (const auto& s : kept) {
                if (s != *it) given |= bit(d.index_of(s.var));
            }
            if (d_separated(cut, out, bit(d.index_of(it->var)), given)) it = kept.erase(it);
        }
        if (kept.size() == e.observed().size()) return e;
        return Expr::atom(e.outcome(), kept, e.intervened());
    }
    case Expr::Kind::Product: {
        std::vector<Expr> fs;
        for (const auto& f : e.factors()) fs.push_back(prune_conditioning(d, f));
        return Expr::product(std::move(fs));
    }
    case Expr::Kind::Sum: {
        Expr body = prune_conditioning(d, e.body());
        if (!body.mentions(e.bound())) return e;
        return Expr::sum(e.bound(), body);
    }
    case Expr::Kind::Quotient:
        return Expr::quotient(prune_conditioning(d, e.numerator()), prune_conditioning(d, e.denominator()));
    }
    return e;
}

IdentificationResult run_engine(const CausalDiagram& d, Mask z_scope, Mask x, Mask y, Method method) {
    try {
        Engine engine(d, z_scope);
        Expr f = prune_conditioning(d, engine.run(x, y));
        // Interventions added because they cannot affect y leave their symbols
        // free. The value does not depend on them, so averaging over the
        // observational marginal binds them without changing the result.
        auto extra = f.free_symbols();
        for (auto it = extra.rbegin(); it != extra.rend(); ++it) {
            int v = d.index_of(it->var);
            if (has(x | y, v)) continue;
            f = Expr::sum(*it, Expr::product({Expr::atom({*it}), f}));
        }
        return success(method, f);
    } catch (const Hedge& h) {
        return failure(method, {d.names_of(h.graph), d.names_of(h.component)});
    }
}

void check_query(const CausalDiagram& d, const VarSet& x, const VarSet& y, const VarSet& w) {
    check_vars(d, x);
    check_vars(d, y);
    check_vars(d, w);
    if (y.empty()) throw PreconditionViolated("the outcome set is empty");
    require_disjoint(x, y, "treatment and outcome");
    require_disjoint(x, w, "treatment and conditioning sets");
    require_disjoint(y, w, "outcome and conditioning sets");
}

IdentificationResult zid_unconditional(const CausalDiagram& d, const VarSet& z_scope, const VarSet& x, const VarSet& y,
                                       Method method) {
    Mask zm = d.mask_of(z_scope);
    Mask xm = d.mask_of(x);
    Mask ym = d.mask_of(y);
    // Extra interventions b drawn from the experimental scope are admissible
    // whenever rule 3 lets do(b) be inserted; smaller sets are tried first.
    auto pool = members(zm & ~xm & ~ym);
    std::vector<Mask> extras;
    for (Mask code = 0; code < bit(static_cast<int>(pool.size())); ++code) {
        Mask m = 0;
        for (int k : members(code)) m |= bit(pool[static_cast<std::size_t>(k)]);
        extras.push_back(m);
    }
    std::stable_sort(extras.begin(), extras.end(), [](Mask a, Mask b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        return mask_lex_less(a, b);
    });
    IdentificationResult first_failure;
    bool have_failure = false;
    for (Mask b : extras) {
        if (b != 0 && !do_rule_applicable(d, 3, y, x, d.names_of(b), {})) continue;
        auto r = run_engine(d, zm, xm | b, ym, method);
        if (r.identified) return r;
        if (!have_failure) {
            first_failure = r;
            have_failure = true;
        }
    }
    return first_failure;
}

}  // namespace

IdentificationResult id(const CausalDiagram& d, const VarSet& x, const VarSet& y) {
    check_query(d, x, y, {});
    return run_engine(d, 0, d.mask_of(x), d.mask_of(y), Method::Id);
}

IdentificationResult idc(const CausalDiagram& d, const VarSet& x, const VarSet& y, const VarSet& w) {
    check_query(d, x, y, w);
    return conditional_reduction(d, x, y, w, Method::Idc, [&](const VarSet& xx, const VarSet& yy) {
        return run_engine(d, 0, d.mask_of(xx), d.mask_of(yy), Method::Idc);
    });
}

IdentificationResult zid(const CausalDiagram& d, const VarSet& z_scope, const VarSet& x, const VarSet& y) {
    check_query(d, x, y, {});
    check_vars(d, z_scope);
    return zid_unconditional(d, z_scope, x, y, Method::Zid);
}

IdentificationResult zidc(const CausalDiagram& d, const VarSet& z_scope, const VarSet& x, const VarSet& y,
                          const VarSet& w) {
    check_query(d, x, y, w);
    check_vars(d, z_scope);
    return conditional_reduction(d, x, y, w, Method::Zidc, [&](const VarSet& xx, const VarSet& yy) {
        return zid_unconditional(d, z_scope, xx, yy, Method::Zidc);
    });
}

bool do_rule_applicable(const CausalDiagram& d, int rule, const VarSet& y, const VarSet& x, const VarSet& z,
                        const VarSet& w) {
    if (rule < 1 || rule > 3) throw PreconditionViolated("do-calculus rules are numbered 1 to 3");
    for (const auto* s : {&y, &x, &z, &w}) check_vars(d, *s);
    require_disjoint(y, x, "rule arguments");
    require_disjoint(y, z, "rule arguments");
    require_disjoint(y, w, "rule arguments");
    require_disjoint(x, z, "rule arguments");
    require_disjoint(x, w, "rule arguments");
    require_disjoint(z, w, "rule arguments");
    if (y.empty() || z.empty()) return true;

    Mask xm = d.mask_of(x);
    Mask zm = d.mask_of(z);
    Mask given = xm | d.mask_of(w);
    Mask ym = d.mask_of(y);
    switch (rule) {
    case 1:
        return d_separated(mutilate(d, xm, Mask{0}), ym, zm, given);
    case 2:
        return d_separated(mutilate(d, xm, zm), ym, zm, given);
    default: {
        Mask anc_w = ancestors(mutilate(d, xm, Mask{0}), d.mask_of(w));
        Mask zw = zm & ~anc_w;
        return d_separated(mutilate(d, xm | zw, Mask{0}), ym, zm, given);
    }
    }
}

}  // namespace causal
