#include "causal/diagram.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>

namespace causal {

bool mask_lex_less(Mask a, Mask b) {
    return members(a) < members(b);
}

std::vector<Mask> normalize_confounding(std::vector<Mask> family) {
    std::vector<Mask> out;
    for (Mask m : family) {
        if (popcount(m) < 2) continue;
        bool dominated = false;
        for (Mask other : family) {
            if (other != m && subset_of(m, other)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(m);
    }
    std::sort(out.begin(), out.end(), mask_lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CausalDiagram::CausalDiagram(std::vector<std::string> vertices, const std::vector<Edge>& edges,
                             const std::vector<VarSet>& confounding, bool normalize)
    : names_(std::move(vertices)) {
    if (names_.size() > kMaxVertices) throw SearchSpaceTooLarge("at most 64 vertices are supported");
    parents_.assign(names_.size(), 0);
    for (const auto& [from, to] : edges) {
        parents_[static_cast<std::size_t>(index_of(to))] |= bit(index_of(from));
    }
    for (const auto& members : confounding) {
        confounding_.push_back(mask_of(members));
    }
    validate_and_index(normalize);
}

CausalDiagram CausalDiagram::from_masks(std::vector<std::string> vertices, std::vector<Mask> parents,
                                        std::vector<Mask> confounding, bool normalize) {
    if (vertices.size() > kMaxVertices) throw SearchSpaceTooLarge("at most 64 vertices are supported");
    if (parents.size() != vertices.size()) throw Error("parent list does not match vertex list");
    CausalDiagram d;
    d.names_ = std::move(vertices);
    d.parents_ = std::move(parents);
    d.confounding_ = std::move(confounding);
    d.validate_and_index(normalize);
    return d;
}

void CausalDiagram::validate_and_index(bool normalize) {
    const auto n = names_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_valid_name(names_[i])) throw SyntaxError("invalid variable name '" + names_[i] + "'");
        for (std::size_t j = 0; j < i; ++j) {
            if (to_lower(names_[i]) == to_lower(names_[j])) {
                throw SyntaxError("duplicate variable '" + names_[i] + "'");
            }
        }
    }
    const Mask everything = all();
    for (std::size_t i = 0; i < n; ++i) {
        if (!subset_of(parents_[i], everything)) throw UnknownVariable("edge endpoint outside vertex set");
        if (has(parents_[i], static_cast<int>(i))) throw CycleError("self loop at " + names_[i]);
    }
    for (Mask m : confounding_) {
        if (!subset_of(m, everything)) throw UnknownVariable("confounding member outside vertex set");
        if (popcount(m) < 2) {
            throw SingletonConfounding("confounding set " + format_set(names_of(m)) + " has fewer than 2 members");
        }
    }
    if (!normalize) {
        for (std::size_t a = 0; a < confounding_.size(); ++a) {
            for (std::size_t b = 0; b < confounding_.size(); ++b) {
                if (a != b && confounding_[a] != confounding_[b] && subset_of(confounding_[a], confounding_[b])) {
                    throw SpernerViolation("confounding set " + format_set(names_of(confounding_[a])) +
                                           " is nested in " + format_set(names_of(confounding_[b])));
                }
            }
        }
    }
    confounding_ = normalize_confounding(std::move(confounding_));

    children_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int p : members(parents_[i])) children_[static_cast<std::size_t>(p)] |= bit(static_cast<int>(i));
    }

    // Kahn's algorithm, always taking the lowest ready index.
    topo_.clear();
    Mask placed = 0;
    while (topo_.size() < n) {
        bool progressed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!has(placed, static_cast<int>(i)) && subset_of(parents_[i], placed)) {
                topo_.push_back(static_cast<int>(i));
                placed |= bit(static_cast<int>(i));
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            throw CycleError("directed cycle through " + format_set(names_of(everything & ~placed)));
        }
    }
}

std::optional<int> CausalDiagram::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

int CausalDiagram::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw UnknownVariable("unknown variable '" + std::string(name) + "'");
}

Mask CausalDiagram::mask_of(const VarSet& names) const {
    Mask m = 0;
    for (const auto& n : names) m |= bit(index_of(n));
    return m;
}

VarSet CausalDiagram::names_of(Mask m) const {
    VarSet out;
    for (int i : members(m)) out.insert(names_.at(static_cast<std::size_t>(i)));
    return out;
}

std::vector<std::pair<int, int>> CausalDiagram::edge_indices() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t child = 0; child < size(); ++child) {
        for (int p : members(parents_[child])) out.emplace_back(p, static_cast<int>(child));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CausalDiagram::Edge> CausalDiagram::edges() const {
    std::vector<Edge> out;
    for (auto [p, c] : edge_indices()) out.emplace_back(name(p), name(c));
    return out;
}

std::vector<VarSet> CausalDiagram::confounding_sets() const {
    std::vector<VarSet> out;
    for (Mask m : confounding_) out.push_back(names_of(m));
    return out;
}

std::size_t CausalDiagram::edge_count() const {
    std::size_t total = 0;
    for (Mask p : parents_) total += static_cast<std::size_t>(popcount(p));
    return total;
}

// ---------------------------------------------------------------------------
// DSL
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    void skip_blanks() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
    }
    bool done() {
        skip_blanks();
        return pos >= text.size();
    }
    bool accept(std::string_view token) {
        skip_blanks();
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
    bool accept_keyword(std::string_view word) {
        skip_blanks();
        if (text.substr(pos, word.size()) != word) return false;
        auto after = pos + word.size();
        if (after < text.size() && (std::isalnum(static_cast<unsigned char>(text[after])) || text[after] == '_')) {
            return false;
        }
        pos = after;
        return true;
    }
    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }
    std::string identifier() {
        skip_blanks();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        std::string id(text.substr(start, pos - start));
        if (!is_valid_name(id)) fail("expected a variable name");
        return id;
    }
    [[noreturn]] void fail(const std::string& what) const {
        std::string near(text.substr(pos, 12));
        throw SyntaxError(what + (near.empty() ? " at end of statement" : " near '" + near + "'"), line);
    }
};

std::vector<std::pair<std::string, int>> split_statements(std::string_view text) {
    std::vector<std::pair<std::string, int>> out;
    int line = 1;
    std::string current;
    bool in_comment = false;
    auto flush = [&] {
        out.emplace_back(current, line);
        current.clear();
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
            in_comment = false;
            ++line;
        } else if (in_comment) {
            continue;
        } else if (c == '#') {
            in_comment = true;
        } else if (c == ';') {
            flush();
        } else {
            current += c;
        }
    }
    flush();
    return out;
}

}  // namespace

CausalDiagram parse_diagram(std::string_view text, DiagramParseOptions options) {
    std::vector<std::string> vertices;
    std::vector<CausalDiagram::Edge> edges;
    std::vector<VarSet> confounding;
    bool have_vars = false;

    auto known = [&](const std::string& name, const Cursor& c) {
        if (std::find(vertices.begin(), vertices.end(), name) == vertices.end()) {
            c.fail("undeclared variable '" + name + "'");
        }
        return name;
    };

    for (const auto& [statement, line] : split_statements(text)) {
        Cursor c{statement, 0, line};
        if (c.done()) continue;
        if (c.accept_keyword("vars")) {
            if (have_vars) c.fail("'vars' declared twice");
            have_vars = true;
            do {
                auto v = c.identifier();
                if (std::find(vertices.begin(), vertices.end(), v) != vertices.end()) {
                    c.fail("duplicate variable '" + v + "'");
                }
                vertices.push_back(v);
            } while (c.accept(","));
        } else if (!have_vars) {
            c.fail("'vars' must be the first statement");
        } else if (c.accept_keyword("conf")) {
            c.expect("{");
            VarSet members;
            do {
                members.insert(known(c.identifier(), c));
            } while (c.accept(","));
            c.expect("}");
            if (members.size() < 2) {
                throw SingletonConfounding("line " + std::to_string(line) + ": confounding set " +
                                           format_set(members) + " has fewer than 2 members");
            }
            confounding.push_back(std::move(members));
        } else {
            auto from = known(c.identifier(), c);
            if (c.accept("<->")) {
                auto to = known(c.identifier(), c);
                if (to == from) {
                    throw SingletonConfounding("line " + std::to_string(line) + ": " + from + " <-> " + to);
                }
                confounding.push_back({from, to});
            } else {
                // Chains such as A -> B -> C are accepted.
                bool any = false;
                while (c.accept("->")) {
                    auto to = known(c.identifier(), c);
                    edges.emplace_back(from, to);
                    from = to;
                    any = true;
                }
                if (!any) c.fail("expected '->' or '<->'");
            }
        }
        if (!c.done()) c.fail("unexpected trailing text");
    }
    if (!have_vars) throw SyntaxError("missing 'vars' declaration");
    return CausalDiagram(std::move(vertices), edges, confounding, options.normalize);
}

namespace {

std::vector<std::string> dsl_statements(const CausalDiagram& d) {
    std::vector<std::string> out;
    std::string vars = "vars ";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i > 0) vars += ", ";
        vars += d.vertices()[i];
    }
    out.push_back(vars);
    for (auto [p, c] : d.edge_indices()) out.push_back(d.name(p) + " -> " + d.name(c));
    for (Mask m : d.confounding()) {
        std::string s = "conf {";
        bool first = true;
        for (int i : members(m)) {
            if (!first) s += ", ";
            s += d.name(i);
            first = false;
        }
        out.push_back(s + "}");
    }
    return out;
}

}  // namespace

std::string to_dsl(const CausalDiagram& d) {
    std::string out;
    for (const auto& s : dsl_statements(d)) out += s + "\n";
    return out;
}

std::string to_dsl_inline(const CausalDiagram& d) {
    std::string out;
    for (const auto& s : dsl_statements(d)) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph primitives
// ---------------------------------------------------------------------------

Mask ancestors(const CausalDiagram& d, Mask s) {
    Mask result = s;
    Mask frontier = s;
    while (frontier != 0) {
        Mask next = 0;
        for (int v : members(frontier)) next |= d.parents(v);
        frontier = next & ~result;
        result |= next;
    }
    return result;
}

Mask descendants(const CausalDiagram& d, Mask s) {
    Mask result = s;
    Mask frontier = s;
    while (frontier != 0) {
        Mask next = 0;
        for (int v : members(frontier)) next |= d.children(v);
        frontier = next & ~result;
        result |= next;
    }
    return result;
}

VarSet ancestors(const CausalDiagram& d, const VarSet& s) {
    return d.names_of(ancestors(d, d.mask_of(s)));
}

CausalDiagram mutilate(const CausalDiagram& d, Mask cut_incoming, Mask cut_outgoing) {
    std::vector<Mask> parents = d.parent_masks();
    for (std::size_t i = 0; i < parents.size(); ++i) {
        if (has(cut_incoming, static_cast<int>(i))) parents[i] = 0;
        parents[i] &= ~cut_outgoing;
    }
    std::vector<Mask> confounding;
    for (Mask m : d.confounding()) confounding.push_back(m & ~cut_incoming);
    return CausalDiagram::from_masks(d.vertices(), std::move(parents), normalize_confounding(std::move(confounding)),
                                     true);
}

CausalDiagram mutilate(const CausalDiagram& d, const VarSet& cut_incoming, const VarSet& cut_outgoing) {
    return mutilate(d, d.mask_of(cut_incoming), d.mask_of(cut_outgoing));
}

std::vector<Mask> c_components(const CausalDiagram& d, Mask within) {
    std::vector<Mask> blocks;
    for (int v : members(within)) blocks.push_back(bit(v));
    for (Mask conf : d.confounding()) {
        Mask part = conf & within;
        if (popcount(part) < 2) continue;
        Mask merged = part;
        std::vector<Mask> rest;
        for (Mask b : blocks) {
            if ((b & part) != 0) {
                merged |= b;
            } else {
                rest.push_back(b);
            }
        }
        rest.push_back(merged);
        blocks = std::move(rest);
    }
    std::sort(blocks.begin(), blocks.end(), [](Mask a, Mask b) { return std::countr_zero(a) < std::countr_zero(b); });
    return blocks;
}

std::vector<VarSet> c_components(const CausalDiagram& d) {
    std::vector<VarSet> out;
    for (Mask m : c_components(d, d.all())) out.push_back(d.names_of(m));
    return out;
}

bool d_separated(const CausalDiagram& d, Mask a, Mask b, Mask c) {
    if (a == 0 || b == 0) throw OverlappingSets("d-separation needs non-empty sets");
    if ((a & b) != 0 || (a & c) != 0 || (b & c) != 0) throw OverlappingSets("d-separation sets must be disjoint");
    const auto n = d.size();
    const auto& latent = d.confounding();
    const auto total = n + latent.size();

    // Augmented DAG: vertex n + k is the latent parent of confounding set k.
    std::vector<std::vector<int>> parents(total), children(total);
    for (std::size_t v = 0; v < n; ++v) {
        for (int p : members(d.parents(static_cast<int>(v)))) {
            parents[v].push_back(p);
            children[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
        }
    }
    for (std::size_t k = 0; k < latent.size(); ++k) {
        for (int v : members(latent[k])) {
            parents[static_cast<std::size_t>(v)].push_back(static_cast<int>(n + k));
            children[n + k].push_back(v);
        }
    }

    // Vertices that are, or have a descendant, in the conditioning set.
    std::vector<char> in_c(total, 0), anc_c(total, 0);
    std::vector<int> stack;
    for (int v : members(c)) {
        in_c[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (anc_c[static_cast<std::size_t>(v)]) continue;
        anc_c[static_cast<std::size_t>(v)] = 1;
        for (int p : parents[static_cast<std::size_t>(v)]) stack.push_back(p);
    }

    // Reachability over (vertex, direction); up = entered from a child.
    std::vector<char> seen_up(total, 0), seen_down(total, 0);
    std::vector<std::pair<int, bool>> queue;
    for (int v : members(a)) queue.emplace_back(v, true);
    while (!queue.empty()) {
        auto [v, up] = queue.back();
        queue.pop_back();
        auto idx = static_cast<std::size_t>(v);
        if (up ? seen_up[idx] : seen_down[idx]) continue;
        (up ? seen_up[idx] : seen_down[idx]) = 1;
        if (!in_c[idx] && idx < n && has(b, v)) return false;
        if (up) {
            if (in_c[idx]) continue;
            for (int p : parents[idx]) queue.emplace_back(p, true);
            for (int ch : children[idx]) queue.emplace_back(ch, false);
        } else {
            if (!in_c[idx]) {
                for (int ch : children[idx]) queue.emplace_back(ch, false);
            }
            if (anc_c[idx]) {
                for (int p : parents[idx]) queue.emplace_back(p, true);
            }
        }
    }
    return true;
}

bool d_separated(const CausalDiagram& d, const VarSet& a, const VarSet& b, const VarSet& c) {
    return d_separated(d, d.mask_of(a), d.mask_of(b), d.mask_of(c));
}

std::string to_string(const IndependenceStatement& s) {
    std::string out = format_set(s.left) + " _||_ " + format_set(s.right);
    if (!s.given.empty()) out += " | " + format_set(s.given);
    return out;
}

std::vector<IndependenceStatement> implied_independences(const CausalDiagram& d) {
    std::vector<IndependenceStatement> out;
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Mask rest = d.all() & ~bit(i) & ~bit(j);
            std::vector<Mask> subsets;
            for (Mask s = rest;; s = (s - 1) & rest) {
                subsets.push_back(s);
                if (s == 0) break;
            }
            std::sort(subsets.begin(), subsets.end(), [](Mask x, Mask y) {
                return popcount(x) != popcount(y) ? popcount(x) < popcount(y) : x < y;
            });
            for (Mask s : subsets) {
                if (d_separated(d, bit(i), bit(j), s)) {
                    out.push_back({d.names_of(bit(i)), d.names_of(bit(j)), d.names_of(s)});
                }
            }
        }
    }
    return out;
}

CausalDiagram induced_subgraph(const CausalDiagram& d, Mask keep) {
    std::vector<int> old_of_new = members(keep & d.all());
    std::vector<int> new_of_old(d.size(), -1);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < old_of_new.size(); ++k) {
        new_of_old[static_cast<std::size_t>(old_of_new[k])] = static_cast<int>(k);
        names.push_back(d.name(old_of_new[k]));
    }
    auto remap = [&](Mask m) {
        Mask out = 0;
        for (int v : members(m & keep)) out |= bit(new_of_old[static_cast<std::size_t>(v)]);
        return out;
    };
    std::vector<Mask> parents;
    for (int v : old_of_new) parents.push_back(remap(d.parents(v)));
    std::vector<Mask> confounding;
    for (Mask m : d.confounding()) confounding.push_back(remap(m));
    return CausalDiagram::from_masks(std::move(names), std::move(parents),
                                     normalize_confounding(std::move(confounding)), true);
}

CausalDiagram latent_projection(const CausalDiagram& d, const VarSet& observed) {
    const Mask keep = d.mask_of(observed);
    const Mask hidden = d.all() & ~keep;

    // Observed vertices reached from `from` along directed paths whose interior
    // is hidden.
    auto first_observed = [&](Mask from) {
        Mask reached = 0;
        Mask visited = 0;
        std::vector<int> stack = members(from);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int ch : members(d.children(v))) {
                if (has(keep, ch)) {
                    reached |= bit(ch);
                } else if (!has(visited, ch)) {
                    visited |= bit(ch);
                    stack.push_back(ch);
                }
            }
        }
        return reached;
    };

    std::vector<Mask> parents(d.size(), 0);
    for (int a : members(keep)) {
        for (int b : members(first_observed(bit(a)))) parents[static_cast<std::size_t>(b)] |= bit(a);
    }
    std::vector<Mask> confounding;
    for (int h : members(hidden)) confounding.push_back(first_observed(bit(h)));
    for (Mask m : d.confounding()) {
        confounding.push_back((m & keep) | first_observed(m & hidden));
    }
    auto full = CausalDiagram::from_masks(d.vertices(), std::move(parents),
                                          normalize_confounding(std::move(confounding)), true);
    return induced_subgraph(full, keep);
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

std::size_t default_max_vars() {
    if (const char* env = std::getenv("CAUSAL_MAX_VARS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= static_cast<long>(kMaxVertices)) {
            return static_cast<std::size_t>(v);
        }
    }
    return 5;
}

std::uint64_t dag_code_count(std::size_t n) {
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < n * (n - (n > 0 ? 1 : 0)) / 2; ++k) total *= 3;
    return total;
}

std::vector<std::vector<Mask>> confounding_families(std::size_t n, std::size_t max_size) {
    std::vector<Mask> candidates;
    const Mask everything = n == 64 ? ~Mask{0} : bit(static_cast<int>(n)) - 1;
    for (Mask m = 1; m <= everything && m != 0; ++m) {
        auto k = static_cast<std::size_t>(popcount(m));
        if (k >= 2 && k <= max_size) candidates.push_back(m);
        if (m == everything) break;
    }
    std::sort(candidates.begin(), candidates.end(), [](Mask a, Mask b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : mask_lex_less(a, b);
    });

    std::vector<std::vector<std::size_t>> families;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> extend = [&](std::size_t start) {
        families.push_back(chosen);
        for (std::size_t i = start; i < candidates.size(); ++i) {
            bool comparable = false;
            for (std::size_t c : chosen) {
                if (subset_of(candidates[c], candidates[i]) || subset_of(candidates[i], candidates[c])) {
                    comparable = true;
                    break;
                }
            }
            if (comparable) continue;
            chosen.push_back(i);
            extend(i + 1);
            chosen.pop_back();
        }
    };
    extend(0);
    std::sort(families.begin(), families.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::vector<std::vector<Mask>> out;
    out.reserve(families.size());
    for (const auto& f : families) {
        std::vector<Mask> fam;
        for (std::size_t i : f) fam.push_back(candidates[i]);
        std::sort(fam.begin(), fam.end(), mask_lex_less);
        out.push_back(std::move(fam));
    }
    return out;
}

void enumerate_diagrams(const std::vector<std::string>& vars, const EnumerationOptions& options,
                        std::uint64_t first_code, std::uint64_t last_code,
                        const std::function<bool(const CausalDiagram&)>& visit) {
    const auto n = vars.size();
    if (n > options.max_vars) {
        throw SearchSpaceTooLarge("enumeration over " + std::to_string(n) + " variables exceeds the bound of " +
                                  std::to_string(options.max_vars) + " (raise CAUSAL_MAX_VARS)");
    }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    std::vector<std::vector<Mask>> families{{}};
    if (options.include_semi_markovian) families = confounding_families(n, options.max_confounding_size);

    last_code = std::min(last_code, dag_code_count(n));
    std::vector<Mask> parents(n);
    for (std::uint64_t code = first_code; code < last_code; ++code) {
        std::fill(parents.begin(), parents.end(), 0);
        std::uint64_t rest = code;
        for (std::size_t k = pairs.size(); k-- > 0;) {
            auto digit = rest % 3;
            rest /= 3;
            auto [i, j] = pairs[k];
            if (digit == 1) parents[static_cast<std::size_t>(j)] |= bit(i);
            if (digit == 2) parents[static_cast<std::size_t>(i)] |= bit(j);
        }
        // Acyclicity by repeated source removal.
        Mask placed = 0;
        bool grew = true;
        const Mask everything = n == 0 ? 0 : (bit(static_cast<int>(n)) - 1);
        while (grew && placed != everything) {
            grew = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (!has(placed, static_cast<int>(v)) && subset_of(parents[v], placed)) {
                    placed |= bit(static_cast<int>(v));
                    grew = true;
                }
            }
        }
        if (placed != everything) continue;
        for (const auto& fam : families) {
            if (!visit(CausalDiagram::from_masks(vars, parents, fam))) return;
        }
    }
}

void enumerate_diagrams(const std::vector<std::string>& vars, const EnumerationOptions& options,
                        const std::function<bool(const CausalDiagram&)>& visit) {
    enumerate_diagrams(vars, options, 0, dag_code_count(vars.size()), visit);
}

std::vector<CausalDiagram> collect_diagrams(const std::vector<std::string>& vars,
                                            const EnumerationOptions& options) {
    std::vector<CausalDiagram> out;
    enumerate_diagrams(vars, options, [&](const CausalDiagram& d) {
        out.push_back(d);
        return true;
    });
    return out;
}

}  // namespace causal
