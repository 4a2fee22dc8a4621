#include "causal/expr.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

namespace causal {

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    auto la = to_lower(a.var);
    auto lb = to_lower(b.var);
    if (auto c = la <=> lb; c != 0) return c;
    if (auto c = a.var <=> b.var; c != 0) return c;
    return a.primes <=> b.primes;
}

std::string to_string(const Symbol& s) {
    return to_lower(s.var) + std::string(static_cast<std::size_t>(s.primes), '\'');
}

struct Expr::Node {
    Kind kind = Kind::One;
    std::vector<Symbol> outcome, observed, intervened;
    std::vector<Expr> children;
    Symbol bound;
    std::vector<Symbol> free;
};

namespace {

std::vector<Symbol> sorted_unique(std::vector<Symbol> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Symbol> merge(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    std::vector<Symbol> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

Expr::Expr() {
    static const auto one_node = std::make_shared<const Node>();
    node_ = one_node;
}

Expr Expr::atom(std::vector<Symbol> outcome, std::vector<Symbol> observed, std::vector<Symbol> intervened) {
    if (outcome.empty()) throw Error("probability atom needs an outcome");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Atom;
    node->outcome = sorted_unique(std::move(outcome));
    node->observed = sorted_unique(std::move(observed));
    node->intervened = sorted_unique(std::move(intervened));
    std::set<std::string> vars;
    std::size_t count = 0;
    for (const auto* list : {&node->outcome, &node->observed, &node->intervened}) {
        for (const auto& s : *list) {
            vars.insert(s.var);
            ++count;
        }
    }
    if (vars.size() != count) throw OverlappingSets("atom mentions a variable more than once");
    node->free = merge(merge(node->outcome, node->observed), node->intervened);
    return Expr(std::move(node));
}

Expr Expr::product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::One) continue;
        if (f.kind() == Kind::Product) {
            flat.insert(flat.end(), f.factors().begin(), f.factors().end());
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat.front();
    auto node = std::make_shared<Node>();
    node->kind = Kind::Product;
    for (const auto& f : flat) node->free = merge(node->free, f.free_symbols());
    node->children = std::move(flat);
    return Expr(std::move(node));
}

Expr Expr::sum(Symbol bound, Expr body) {
    if (!body.mentions(bound)) {
        throw Error("summation symbol " + to_string(bound) + " does not occur free in its body");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Sum;
    for (const auto& s : body.free_symbols()) {
        if (s != bound) node->free.push_back(s);
    }
    node->bound = std::move(bound);
    node->children.push_back(std::move(body));
    return Expr(std::move(node));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Quotient;
    node->free = merge(numerator.free_symbols(), denominator.free_symbols());
    node->children.push_back(std::move(numerator));
    node->children.push_back(std::move(denominator));
    return Expr(std::move(node));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
const std::vector<Symbol>& Expr::outcome() const { return node_->outcome; }
const std::vector<Symbol>& Expr::observed() const { return node_->observed; }
const std::vector<Symbol>& Expr::intervened() const { return node_->intervened; }
const std::vector<Expr>& Expr::factors() const { return node_->children; }
const Symbol& Expr::bound() const { return node_->bound; }
const Expr& Expr::body() const { return node_->children.at(0); }
const Expr& Expr::numerator() const { return node_->children.at(0); }
const Expr& Expr::denominator() const { return node_->children.at(1); }
const std::vector<Symbol>& Expr::free_symbols() const noexcept { return node_->free; }

bool Expr::mentions(const Symbol& s) const {
    return std::binary_search(node_->free.begin(), node_->free.end(), s);
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.outcome == y.outcome && x.observed == y.observed && x.intervened == y.intervened &&
           x.bound == y.bound && x.children == y.children;
}

// ---------------------------------------------------------------------------
// Queries and information sets
// ---------------------------------------------------------------------------

void validate(const Query& q) {
    if (q.outcome.empty()) throw PreconditionViolated("query needs a non-empty outcome");
    if (!disjoint(q.outcome, q.observed) || !disjoint(q.outcome, q.intervened) ||
        !disjoint(q.observed, q.intervened)) {
        throw OverlappingSets("query sets must be pairwise disjoint");
    }
}

void validate(const InformationSet& i) {
    if (!includes(i.observed, i.experimental)) {
        throw PreconditionViolated("experimental scope must lie within the observed scope");
    }
}

Expr query_of(const Query& q) {
    auto symbols = [](const VarSet& s) {
        std::vector<Symbol> out;
        for (const auto& v : s) out.push_back({v, 0});
        return out;
    };
    return Expr::atom(symbols(q.outcome), symbols(q.observed), symbols(q.intervened));
}

std::string to_string(const Query& q) {
    auto join_names = [](const VarSet& s) {
        std::string out;
        for (const auto& v : s) out += (out.empty() ? "" : ",") + v;
        return out;
    };
    std::string out = "P(" + join_names(q.outcome);
    std::string cond = join_names(q.observed);
    if (!q.intervened.empty()) cond += (cond.empty() ? "" : ",") + ("do(" + join_names(q.intervened) + ")");
    if (!cond.empty()) out += "|" + cond;
    return out + ")";
}

std::string to_string(const InformationSet& i) {
    return "W=" + format_set(i.observed) + " Z=" + format_set(i.experimental);
}

Query parse_query(std::string_view text) {
    auto fail = [&]() -> Query { throw SyntaxError("expected a query like P(Y|W,do(X)), got '" + std::string(text) + "'"); };
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    if (compact.size() < 4 || compact.substr(0, 2) != "P(" || compact.back() != ')') return fail();
    std::string body = compact.substr(2, compact.size() - 3);
    Query q;
    auto add_names = [&](std::string_view list, VarSet& into) {
        std::size_t start = 0;
        while (start <= list.size()) {
            auto comma = list.find(',', start);
            auto name = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            if (!is_valid_name(name) || !into.insert(std::string(name)).second) fail();
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    };
    auto bar = body.find('|');
    add_names(std::string_view(body).substr(0, bar), q.outcome);
    if (bar != std::string::npos) {
        std::string cond = body.substr(bar + 1);
        auto d = cond.find("do(");
        if (d != std::string::npos) {
            auto close = cond.find(')', d);
            if (close == std::string::npos || close + 1 != cond.size()) return fail();
            std::string inner = cond.substr(d + 3, close - d - 3);
            if (!inner.empty()) add_names(inner, q.intervened);
            cond = cond.substr(0, d);
            if (!cond.empty()) {
                if (cond.back() != ',') return fail();
                cond.pop_back();
            }
        }
        if (!cond.empty()) add_names(cond, q.observed);
    }
    try {
        validate(q);
    } catch (const Error& e) {
        throw SyntaxError(e.what());
    }
    return q;
}

bool infoset_contains(const InformationSet& inner, const InformationSet& outer) {
    return includes(outer.observed, inner.observed) && includes(outer.experimental, inner.experimental);
}

std::vector<Expr> atoms_of(const Expr& e) {
    std::vector<Expr> out;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr cur = stack.back();
        stack.pop_back();
        if (cur.kind() == Expr::Kind::Atom) {
            out.push_back(cur);
        } else if (cur.kind() != Expr::Kind::One) {
            const auto& kids = cur.factors();
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
        }
    }
    return out;
}

bool computable_from(const Expr& e, const InformationSet& info) {
    for (const auto& a : atoms_of(e)) {
        for (const auto& s : a.intervened()) {
            if (!info.experimental.contains(s.var)) return false;
        }
        for (const auto* list : {&a.outcome(), &a.observed(), &a.intervened()}) {
            for (const auto& s : *list) {
                if (!info.observed.contains(s.var)) return false;
            }
        }
    }
    return true;
}

VarSet free_variables(const Expr& e) {
    VarSet out;
    for (const auto& s : e.free_symbols()) out.insert(s.var);
    return out;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string join(const std::vector<Symbol>& symbols) {
    std::string out;
    for (const auto& s : symbols) {
        if (!out.empty()) out += ",";
        out += to_string(s);
    }
    return out;
}

std::string text_of(const Expr& e);

std::string wrapped(const Expr& e) {
    if (e.kind() == Expr::Kind::Atom || e.kind() == Expr::Kind::One) return text_of(e);
    return "(" + text_of(e) + ")";
}

std::string text_of(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::One:
        return "1";
    case Expr::Kind::Atom: {
        std::string out = "P(" + join(e.outcome());
        std::string cond = join(e.observed());
        if (!e.intervened().empty()) {
            if (!cond.empty()) cond += ",";
            cond += "do(" + join(e.intervened()) + ")";
        }
        if (!cond.empty()) out += "|" + cond;
        return out + ")";
    }
    case Expr::Kind::Product: {
        std::string out;
        const auto& fs = e.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (i > 0) out += " * ";
            bool last = i + 1 == fs.size();
            if (fs[i].kind() == Expr::Kind::Sum && last) {
                out += text_of(fs[i]);
            } else {
                out += wrapped(fs[i]);
            }
        }
        return out;
    }
    case Expr::Kind::Sum:
        return "sum_" + to_string(e.bound()) + " " + text_of(e.body());
    case Expr::Kind::Quotient:
        return wrapped(e.numerator()) + " / " + wrapped(e.denominator());
    }
    return {};
}

int kind_rank(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::Atom:
        return 0;
    case Expr::Kind::Quotient:
        return 1;
    case Expr::Kind::Sum:
        return 2;
    default:
        return 3;
    }
}

// Conditional atoms first (more conditioning first), then quotients, then
// sums; ties broken by text.
std::vector<Expr> sort_factors(std::vector<Expr> factors) {
    std::vector<std::tuple<int, int, std::string, std::size_t>> keys;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        int conditioning = f.kind() == Expr::Kind::Atom
                               ? static_cast<int>(f.observed().size() + f.intervened().size())
                               : 0;
        keys.emplace_back(kind_rank(f), -conditioning, text_of(f), i);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<Expr> out;
    for (const auto& k : keys) out.push_back(factors[std::get<3>(k)]);
    return out;
}

Expr rename(const Expr& e, const std::map<Symbol, Symbol>& env, const std::set<Symbol>& used) {
    auto map_list = [&](const std::vector<Symbol>& list) {
        std::vector<Symbol> out;
        for (const auto& s : list) {
            auto it = env.find(s);
            out.push_back(it == env.end() ? s : it->second);
        }
        return out;
    };
    switch (e.kind()) {
    case Expr::Kind::One:
        return e;
    case Expr::Kind::Atom:
        return Expr::atom(map_list(e.outcome()), map_list(e.observed()), map_list(e.intervened()));
    case Expr::Kind::Product: {
        std::vector<Expr> kids;
        for (const auto& f : e.factors()) kids.push_back(rename(f, env, used));
        auto flat = Expr::product(std::move(kids));
        if (flat.kind() != Expr::Kind::Product) return flat;
        // Product::product already flattened; rebuild in sorted order.
        auto sorted = sort_factors(flat.factors());
        return Expr::product(std::move(sorted));
    }
    case Expr::Kind::Sum: {
        Symbol fresh{e.bound().var, 0};
        while (used.contains(fresh)) ++fresh.primes;
        auto inner_env = env;
        inner_env[e.bound()] = fresh;
        auto inner_used = used;
        inner_used.insert(fresh);
        return Expr::sum(fresh, rename(e.body(), inner_env, inner_used));
    }
    case Expr::Kind::Quotient:
        return Expr::quotient(rename(e.numerator(), env, used), rename(e.denominator(), env, used));
    }
    return e;
}

}  // namespace

Expr canonical(const Expr& e) {
    std::set<Symbol> used(e.free_symbols().begin(), e.free_symbols().end());
    return rename(e, {}, used);
}

std::string render(const Expr& e) {
    return text_of(canonical(e));
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

namespace {

bool same(const Expr& a, const Expr& b) {
    return a == b || render(a) == render(b);
}

std::vector<Expr> factor_list(const Expr& e) {
    if (e.kind() == Expr::Kind::Product) return e.factors();
    if (e.kind() == Expr::Kind::One) return {};
    return {e};
}

Expr simplify_sum(const Symbol& bound, const Expr& original_body) {
    Expr body = simplify(original_body);
    if (!body.mentions(bound)) {
        // Simplification removed the bound symbol; keep the original summand so
        // the domain-size factor is not lost.
        return Expr::sum(bound, original_body);
    }
    std::vector<Expr> dependent, independent;
    for (const auto& f : factor_list(body)) {
        (f.mentions(bound) ? dependent : independent).push_back(f);
    }
    Expr summed;
    if (dependent.size() == 1 && dependent.front().kind() == Expr::Kind::Atom) {
        const auto& a = dependent.front();
        const auto& out = a.outcome();
        if (std::find(out.begin(), out.end(), bound) != out.end()) {
            std::vector<Symbol> rest;
            for (const auto& s : out) {
                if (s != bound) rest.push_back(s);
            }
            summed = rest.empty() ? Expr::one() : Expr::atom(rest, a.observed(), a.intervened());
        } else {
            summed = Expr::sum(bound, a);
        }
    } else {
        summed = Expr::sum(bound, Expr::product(dependent));
    }
    independent.push_back(summed);
    return Expr::product(std::move(independent));
}

Expr simplify_quotient(const Expr& num_in, const Expr& den_in) {
    Expr num = simplify(num_in);
    Expr den = simplify(den_in);
    if (den.is_one()) return num;
    if (same(num, den)) return Expr::one();

    auto nf = factor_list(num);
    auto df = factor_list(den);
    bool cancelled = false;
    for (auto it = df.begin(); it != df.end();) {
        auto match = std::find_if(nf.begin(), nf.end(), [&](const Expr& f) { return same(f, *it); });
        if (match != nf.end()) {
            nf.erase(match);
            it = df.erase(it);
            cancelled = true;
        } else {
            ++it;
        }
    }
    if (cancelled) {
        num = Expr::product(nf);
        den = Expr::product(df);
        if (den.is_one()) return num;
    }

    if (num.kind() == Expr::Kind::Atom && den.kind() == Expr::Kind::Atom && num.observed() == den.observed() &&
        num.intervened() == den.intervened()) {
        const auto& no = num.outcome();
        const auto& d_o = den.outcome();
        if (d_o.size() < no.size() && std::includes(no.begin(), no.end(), d_o.begin(), d_o.end())) {
            std::vector<Symbol> outcome;
            std::set_difference(no.begin(), no.end(), d_o.begin(), d_o.end(), std::back_inserter(outcome));
            std::vector<Symbol> observed = num.observed();
            observed.insert(observed.end(), d_o.begin(), d_o.end());
            return Expr::atom(outcome, observed, num.intervened());
        }
    }
    return Expr::quotient(num, den);
}

}  // namespace

Expr simplify(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::One:
    case Expr::Kind::Atom:
        return e;
    case Expr::Kind::Product: {
        std::vector<Expr> kids;
        for (const auto& f : e.factors()) kids.push_back(simplify(f));
        return Expr::product(std::move(kids));
    }
    case Expr::Kind::Sum:
        return simplify_sum(e.bound(), e.body());
    case Expr::Kind::Quotient:
        return simplify_quotient(e.numerator(), e.denominator());
    }
    return e;
}

bool expr_equal_canonical(const Expr& a, const Expr& b) {
    return render(simplify(a)) == render(simplify(b));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& declared) : text_(text) {
        for (const auto& v : declared) lookup_[to_lower(v)] = v;
    }

    Expr parse() {
        Expr e = expression();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing text");
        return e;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    std::string word() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    int primes() {
        int n = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++pos_;
            ++n;
        }
        return n;
    }

    std::string resolve(const std::string& token) {
        if (token.empty() || !is_valid_name(token)) fail("expected a variable");
        auto it = lookup_.find(to_lower(token));
        if (it == lookup_.end()) throw UnknownVariable("unknown variable '" + token + "' in formula");
        return it->second;
    }

    Symbol occurrence() {
        auto var = resolve(word());
        Symbol s{var, primes()};
        if (s.primes > 0 && std::find(scope_.begin(), scope_.end(), s) == scope_.end()) {
            throw UnboundVariable("primed symbol " + to_string(s) + " is not bound by an enclosing sum");
        }
        return s;
    }

    std::vector<Symbol> symbol_list() {
        std::vector<Symbol> out{occurrence()};
        while (peek(',')) {
            auto save = pos_;
            ++pos_;
            skip();
            if (text_.substr(pos_, 3) == "do(") {
                pos_ = save;
                break;
            }
            out.push_back(occurrence());
        }
        return out;
    }

    Expr atom() {
        expect('(');
        std::vector<Symbol> outcome = symbol_list();
        std::vector<Symbol> observed, intervened;
        if (accept('|')) {
            bool first = true;
            while (first || accept(',')) {
                first = false;
                skip();
                if (text_.substr(pos_, 3) == "do(") {
                    pos_ += 3;
                    if (!peek(')')) {
                        auto list = symbol_list();
                        intervened.insert(intervened.end(), list.begin(), list.end());
                    }
                    expect(')');
                } else {
                    observed.push_back(occurrence());
                }
            }
        }
        expect(')');
        try {
            return Expr::atom(std::move(outcome), std::move(observed), std::move(intervened));
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    Expr factor() {
        skip();
        if (accept('(')) {
            Expr inner = expression();
            expect(')');
            return inner;
        }
        if (accept('1')) return Expr::one();
        auto start = pos_;
        std::string w = word();
        if (w == "P" && peek('(')) return atom();
        if (w.rfind("sum_", 0) == 0 && w.size() > 4) {
            Symbol bound{resolve(w.substr(4)), primes()};
            if (std::find(scope_.begin(), scope_.end(), bound) != scope_.end()) {
                throw DuplicateBinding("symbol " + to_string(bound) + " is bound twice on one path");
            }
            scope_.push_back(bound);
            Expr body = expression();
            scope_.pop_back();
            last_was_sum_ = true;
            try {
                return Expr::sum(bound, body);
            } catch (const Error& e) {
                fail(e.what());
            }
        }
        pos_ = start;
        fail("expected P(...), sum_v, '1' or '('");
    }

    // A sum swallows the remainder of the product it starts in.
    Expr expression() {
        last_was_sum_ = false;
        Expr left = factor();
        while (!last_was_sum_) {
            if (accept('*')) {
                Expr right = factor();
                left = Expr::product({left, right});
            } else if (accept('/')) {
                Expr right = factor();
                left = Expr::quotient(left, right);
            } else {
                break;
            }
        }
        last_was_sum_ = false;
        return left;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::map<std::string, std::string> lookup_;
    std::vector<Symbol> scope_;
    bool last_was_sum_ = false;
};

}  // namespace

Expr parse_expr(std::string_view text, const std::vector<std::string>& declared) {
    return Parser(text, declared).parse();
}

}  // namespace causal
