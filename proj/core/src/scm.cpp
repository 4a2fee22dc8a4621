#include "causal/scm.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace causal {

namespace {

std::string_view trim(std::string_view s) {
    auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(s.front())) s.remove_prefix(1);
    while (!s.empty() && issp(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        auto part = trim(s.substr(0, pos));
        if (!part.empty()) out.push_back(part);
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

}  // namespace

DiscreteSCM::DiscreteSCM(std::vector<std::string> vars, std::vector<int> domains, std::vector<BackgroundVar> background,
                         std::vector<Mechanism> mechanisms)
    : vars_(std::move(vars)),
      domains_(std::move(domains)),
      background_(std::move(background)),
      mechanisms_(std::move(mechanisms)) {
    const std::size_t n = vars_.size();
    if (domains_.size() != n || mechanisms_.size() != n) {
        throw FormatError("every endogenous variable needs a domain and a mechanism");
    }
    std::map<std::string, int> endo, exo;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_valid_name(vars_[i])) throw FormatError("invalid variable name '" + vars_[i] + "'");
        if (domains_[i] < 1) throw FormatError("domain of " + vars_[i] + " must be non-empty");
        if (!endo.emplace(vars_[i], static_cast<int>(i)).second) throw FormatError("duplicate variable " + vars_[i]);
    }
    for (std::size_t b = 0; b < background_.size(); ++b) {
        const auto& bg = background_[b];
        if (!is_valid_name(bg.name) || endo.contains(bg.name)) {
            throw FormatError("invalid or clashing background name '" + bg.name + "'");
        }
        if (!exo.emplace(bg.name, static_cast<int>(b)).second) throw FormatError("duplicate background " + bg.name);
        if (bg.probs.empty()) throw FormatError("background " + bg.name + " has an empty domain");
        Rational total = 0;
        for (const auto& p : bg.probs) {
            if (p < 0) throw FormatError("background " + bg.name + " has a negative probability");
            total += p;
        }
        if (total != 1) throw FormatError("background " + bg.name + " does not sum to 1");
    }

    wiring_.resize(n);
    std::vector<Mask> parents(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = mechanisms_[i];
        auto& w = wiring_[i];
        std::size_t rows = 1;
        for (const auto& in : m.inputs) {
            auto it = endo.find(in);
            if (it == endo.end()) throw UnknownVariable("mechanism of " + vars_[i] + " reads unknown variable " + in);
            if (it->second == static_cast<int>(i)) throw CycleError(vars_[i] + " reads itself");
            if (has(parents[i], it->second)) throw FormatError("duplicate input " + in + " for " + vars_[i]);
            parents[i] |= bit(it->second);
            w.inputs.push_back(it->second);
            w.radix.push_back(domains_[static_cast<std::size_t>(it->second)]);
            rows *= static_cast<std::size_t>(w.radix.back());
        }
        for (const auto& in : m.background) {
            auto it = exo.find(in);
            if (it == exo.end()) throw UnknownVariable("mechanism of " + vars_[i] + " reads unknown background " + in);
            if (std::find(w.background.begin(), w.background.end(), it->second) != w.background.end()) {
                throw FormatError("duplicate background input " + in + " for " + vars_[i]);
            }
            w.background.push_back(it->second);
            w.radix.push_back(static_cast<int>(background_[static_cast<std::size_t>(it->second)].probs.size()));
            rows *= static_cast<std::size_t>(w.radix.back());
        }
        if (m.table.size() != rows) throw FormatError("mechanism of " + vars_[i] + " is not total");
        for (int v : m.table) {
            if (v < 0 || v >= domains_[i]) throw OutOfDomainValue("mechanism of " + vars_[i] + " leaves its domain");
        }
    }

    // Kahn's algorithm, lowest index first.
    std::vector<int> indegree(n);
    for (std::size_t i = 0; i < n; ++i) indegree[i] = popcount(parents[i]);
    std::vector<bool> done(n, false);
    while (topo_.size() < n) {
        int next = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && indegree[i] == 0) {
                next = static_cast<int>(i);
                break;
            }
        }
        if (next < 0) throw CycleError("mechanisms form a directed cycle");
        done[static_cast<std::size_t>(next)] = true;
        topo_.push_back(next);
        for (std::size_t i = 0; i < n; ++i) {
            if (has(parents[i], next)) --indegree[i];
        }
    }
}

Domains DiscreteSCM::domain_map() const {
    Domains out;
    for (std::size_t i = 0; i < vars_.size(); ++i) out[vars_[i]] = domains_[i];
    return out;
}

int DiscreteSCM::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) return static_cast<int>(i);
    }
    throw UnknownVariable("unknown variable '" + std::string(name) + "'");
}

int DiscreteSCM::output(int i, const std::vector<int>& v, const std::vector<int>& u) const {
    const auto& w = wiring_[static_cast<std::size_t>(i)];
    std::size_t row = 0;
    std::size_t k = 0;
    for (int in : w.inputs) row = row * static_cast<std::size_t>(w.radix[k++]) + static_cast<std::size_t>(v[in]);
    for (int in : w.background) row = row * static_cast<std::size_t>(w.radix[k++]) + static_cast<std::size_t>(u[in]);
    return mechanisms_[static_cast<std::size_t>(i)].table[row];
}

std::vector<int> DiscreteSCM::solve(const std::vector<int>& u, const std::vector<int>& forced) const {
    std::vector<int> v(vars_.size(), 0);
    for (int i : topo_) {
        auto idx = static_cast<std::size_t>(i);
        v[idx] = (idx < forced.size() && forced[idx] >= 0) ? forced[idx] : output(i, v, u);
    }
    return v;
}

std::size_t DiscreteSCM::background_count() const {
    std::size_t n = 1;
    for (const auto& b : background_) n *= b.probs.size();
    return n;
}

std::vector<int> DiscreteSCM::background_values(std::size_t index) const {
    std::vector<int> u(background_.size());
    for (std::size_t b = background_.size(); b-- > 0;) {
        u[b] = static_cast<int>(index % background_[b].probs.size());
        index /= background_[b].probs.size();
    }
    return u;
}

Rational DiscreteSCM::background_probability(const std::vector<int>& u) const {
    Rational p = 1;
    for (std::size_t b = 0; b < background_.size(); ++b) p *= background_[b].probs[static_cast<std::size_t>(u[b])];
    return p;
}

CausalDiagram induced_diagram(const DiscreteSCM& s) {
    const auto& vars = s.vars();
    std::vector<Mask> parents(vars.size(), 0);
    std::vector<Mask> readers(s.background().size(), 0);
    std::map<std::string, int> bg_index;
    for (std::size_t b = 0; b < s.background().size(); ++b) bg_index[s.background()[b].name] = static_cast<int>(b);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& m = s.mechanisms()[i];
        for (const auto& in : m.inputs) parents[i] |= bit(s.index_of(in));
        for (const auto& b : m.background) readers[static_cast<std::size_t>(bg_index.at(b))] |= bit(static_cast<int>(i));
    }
    std::vector<Mask> family;
    for (Mask r : readers) {
        if (popcount(r) >= 2) family.push_back(r);
    }
    return CausalDiagram::from_masks(vars, parents, normalize_confounding(std::move(family)), true);
}

namespace {

// Computes P(v | do(forced)) by summing each mechanism's private backgrounds
// into a conditional table and enumerating only the backgrounds shared by
// several active mechanisms.
DistributionTable factorized_joint(const DiscreteSCM& s, const std::vector<int>& forced) {
    const std::size_t n = s.vars().size();
    const auto& bgs = s.background();
    std::map<std::string, int> bg_index;
    for (std::size_t b = 0; b < bgs.size(); ++b) bg_index[bgs[b].name] = static_cast<int>(b);

    auto active = [&](std::size_t i) { return forced[i] < 0; };
    std::vector<int> readers(bgs.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active(i)) continue;
        for (const auto& b : s.mechanisms()[i].background) ++readers[static_cast<std::size_t>(bg_index.at(b))];
    }
    std::vector<int> shared;
    for (std::size_t b = 0; b < bgs.size(); ++b) {
        if (readers[b] >= 2) shared.push_back(static_cast<int>(b));
    }

    // cond[i] maps (parent values, shared background values) to a distribution
    // over the values of variable i.
    struct Conditional {
        std::vector<int> parents;
        std::vector<int> shared;
        std::vector<int> radix;
        std::vector<std::vector<Rational>> rows;
    };
    std::vector<Conditional> cond(n);
    std::vector<int> u(bgs.size(), 0);
    std::vector<int> v(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active(i)) continue;
        auto& c = cond[i];
        std::vector<int> priv;
        for (const auto& name : s.mechanisms()[i].inputs) {
            c.parents.push_back(s.index_of(name));
            c.radix.push_back(s.domains()[static_cast<std::size_t>(c.parents.back())]);
        }
        for (const auto& name : s.mechanisms()[i].background) {
            int b = bg_index.at(name);
            if (readers[static_cast<std::size_t>(b)] >= 2) {
                c.shared.push_back(b);
                c.radix.push_back(static_cast<int>(bgs[static_cast<std::size_t>(b)].probs.size()));
            } else {
                priv.push_back(b);
            }
        }
        std::size_t rows = 1;
        for (int r : c.radix) rows *= static_cast<std::size_t>(r);
        std::size_t priv_rows = 1;
        for (int b : priv) priv_rows *= bgs[static_cast<std::size_t>(b)].probs.size();
        c.rows.assign(rows, std::vector<Rational>(static_cast<std::size_t>(s.domains()[i]), Rational(0)));
        for (std::size_t row = 0; row < rows; ++row) {
            std::size_t rest = row;
            for (std::size_t k = c.radix.size(); k-- > 0;) {
                int value = static_cast<int>(rest % static_cast<std::size_t>(c.radix[k]));
                rest /= static_cast<std::size_t>(c.radix[k]);
                if (k < c.parents.size()) {
                    v[static_cast<std::size_t>(c.parents[k])] = value;
                } else {
                    u[static_cast<std::size_t>(c.shared[k - c.parents.size()])] = value;
                }
            }
            for (std::size_t prow = 0; prow < priv_rows; ++prow) {
                std::size_t prest = prow;
                Rational weight = 1;
                for (std::size_t k = priv.size(); k-- > 0;) {
                    const auto& probs = bgs[static_cast<std::size_t>(priv[k])].probs;
                    auto value = prest % probs.size();
                    prest /= probs.size();
                    u[static_cast<std::size_t>(priv[k])] = static_cast<int>(value);
                    weight *= probs[value];
                }
                if (weight == 0) continue;
                c.rows[row][static_cast<std::size_t>(s.output(static_cast<int>(i), v, u))] += weight;
            }
        }
    }

    std::vector<std::string> scope;
    std::vector<int> sizes, positions(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active(i)) continue;
        positions[i] = static_cast<int>(scope.size());
        scope.push_back(s.vars()[i]);
        sizes.push_back(s.domains()[i]);
    }
    auto out = DistributionTable::zeros(scope, sizes);

    std::size_t shared_rows = 1;
    for (int b : shared) shared_rows *= bgs[static_cast<std::size_t>(b)].probs.size();
    const auto& topo = s.topological_order();
    std::vector<int> row_values(scope.size());

    // Depth-first over the topological order, multiplying conditionals.
    std::function<void(std::size_t, const Rational&)> descend = [&](std::size_t depth, const Rational& weight) {
        if (depth == topo.size()) {
            out[out.index_of(row_values)] += weight;
            return;
        }
        auto i = static_cast<std::size_t>(topo[depth]);
        if (!active(i)) {
            v[i] = forced[i];
            descend(depth + 1, weight);
            return;
        }
        const auto& c = cond[i];
        std::size_t row = 0;
        for (std::size_t k = 0; k < c.radix.size(); ++k) {
            int value = k < c.parents.size() ? v[static_cast<std::size_t>(c.parents[k])]
                                             : u[static_cast<std::size_t>(c.shared[k - c.parents.size()])];
            row = row * static_cast<std::size_t>(c.radix[k]) + static_cast<std::size_t>(value);
        }
        const auto& dist = c.rows[row];
        for (std::size_t value = 0; value < dist.size(); ++value) {
            if (dist[value] == 0) continue;
            v[i] = static_cast<int>(value);
            row_values[static_cast<std::size_t>(positions[i])] = static_cast<int>(value);
            descend(depth + 1, weight * dist[value]);
        }
    };

    for (std::size_t srow = 0; srow < shared_rows; ++srow) {
        std::size_t rest = srow;
        Rational weight = 1;
        for (std::size_t k = shared.size(); k-- > 0;) {
            const auto& probs = bgs[static_cast<std::size_t>(shared[k])].probs;
            auto value = rest % probs.size();
            rest /= probs.size();
            u[static_cast<std::size_t>(shared[k])] = static_cast<int>(value);
            weight *= probs[value];
        }
        if (weight != 0) descend(0, weight);
    }
    return out;
}

std::vector<int> forced_vector(const DiscreteSCM& s, const Assignment& assignment) {
    std::vector<int> forced(s.vars().size(), -1);
    for (const auto& [var, value] : assignment) {
        auto i = static_cast<std::size_t>(s.index_of(var));
        if (value < 0 || value >= s.domains()[i]) {
            throw OutOfDomainValue("value " + std::to_string(value) + " is outside the domain of " + var);
        }
        forced[i] = value;
    }
    return forced;
}

}  // namespace

DistributionTable observational_joint(const DiscreteSCM& s) {
    return factorized_joint(s, std::vector<int>(s.vars().size(), -1));
}

DiscreteSCM intervene(const DiscreteSCM& s, const Assignment& assignment) {
    auto forced = forced_vector(s, assignment);
    auto mechanisms = s.mechanisms();
    for (std::size_t i = 0; i < forced.size(); ++i) {
        if (forced[i] >= 0) mechanisms[i] = Mechanism{{}, {}, {forced[i]}};
    }
    return DiscreteSCM(s.vars(), s.domains(), s.background(), std::move(mechanisms));
}

DistributionTable interventional_joint(const DiscreteSCM& s, const Assignment& assignment) {
    return factorized_joint(s, forced_vector(s, assignment));
}

DistributionTable interventional(const DiscreteSCM& s, const Assignment& assignment,
                                 const std::vector<std::string>& targets) {
    for (const auto& t : targets) {
        s.index_of(t);
        if (assignment.contains(t)) throw OverlappingSets("target " + t + " is also intervened on");
    }
    return interventional_joint(s, assignment).marginal(targets);
}

DistributionTable counterfactual_joint(const DiscreteSCM& s, const std::vector<World>& worlds,
                                       const Assignment& condition) {
    std::vector<std::vector<int>> forced;
    std::vector<std::string> scope;
    std::vector<int> sizes;
    std::vector<std::pair<std::size_t, int>> reads;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
        forced.push_back(forced_vector(s, worlds[w].intervention));
        for (const auto& t : worlds[w].targets) {
            int i = s.index_of(t);
            scope.push_back(t + "@" + std::to_string(w));
            sizes.push_back(s.domains()[static_cast<std::size_t>(i)]);
            reads.emplace_back(w, i);
        }
    }
    std::vector<std::pair<int, int>> cond;
    for (const auto& [var, value] : condition) {
        int i = s.index_of(var);
        if (value < 0 || value >= s.domains()[static_cast<std::size_t>(i)]) {
            throw OutOfDomainValue("condition value outside the domain of " + var);
        }
        cond.emplace_back(i, value);
    }

    auto out = DistributionTable::zeros(scope, sizes);
    Rational evidence = 0;
    std::vector<int> row(scope.size());
    for (std::size_t k = 0; k < s.background_count(); ++k) {
        auto u = s.background_values(k);
        Rational p = s.background_probability(u);
        if (p == 0) continue;
        auto actual = s.solve(u);
        bool holds = std::all_of(cond.begin(), cond.end(), [&](const auto& c) {
            return actual[static_cast<std::size_t>(c.first)] == c.second;
        });
        if (!holds) continue;
        evidence += p;
        std::vector<std::vector<int>> solved;
        for (const auto& f : forced) solved.push_back(s.solve(u, f));
        for (std::size_t r = 0; r < reads.size(); ++r) {
            row[r] = solved[reads[r].first][static_cast<std::size_t>(reads[r].second)];
        }
        out[out.index_of(row)] += p;
    }
    if (evidence == 0) throw ZeroProbabilityCondition("the conditioning event has probability zero");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= evidence;
    return out;
}

DiscreteSCM random_scm(const CausalDiagram& d, const Domains& domains, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> weight(1, 9);
    const auto& vars = d.vertices();
    const std::size_t n = vars.size();

    auto fresh_name = [&](std::string base) {
        VarSet taken(vars.begin(), vars.end());
        while (taken.contains(base)) base = "_" + base;
        return base;
    };
    auto random_distribution = [&](std::size_t size) {
        std::vector<int> w(size);
        int total = 0;
        for (auto& x : w) {
            x = weight(rng);
            total += x;
        }
        std::vector<Rational> probs;
        for (int x : w) {
            Rational p(x, total);
            p.canonicalize();
            probs.push_back(p);
        }
        return probs;
    };

    std::vector<int> sizes(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = domains.find(vars[i]);
        sizes[i] = it == domains.end() ? 2 : it->second;
        if (sizes[i] < 2) throw PreconditionViolated("domain sizes must be at least 2");
    }

    std::vector<BackgroundVar> background;
    const auto& family = d.confounding();
    for (std::size_t k = 0; k < family.size(); ++k) {
        background.push_back({fresh_name("_c" + std::to_string(k + 1)), random_distribution(2)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        background.push_back({fresh_name("_u" + vars[i]), random_distribution(static_cast<std::size_t>(sizes[i]) + 1)});
    }

    std::vector<Mechanism> mechanisms(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& m = mechanisms[i];
        std::size_t context_rows = 1;
        for (int p : members(d.parents(static_cast<int>(i)))) {
            m.inputs.push_back(vars[static_cast<std::size_t>(p)]);
            context_rows *= static_cast<std::size_t>(sizes[static_cast<std::size_t>(p)]);
        }
        for (std::size_t k = 0; k < family.size(); ++k) {
            if (has(family[k], static_cast<int>(i))) {
                m.background.push_back(background[k].name);
                context_rows *= 2;
            }
        }
        m.background.push_back(background[family.size() + i].name);
        std::vector<std::size_t> radices;
        for (int p : members(d.parents(static_cast<int>(i)))) {
            radices.push_back(static_cast<std::size_t>(sizes[static_cast<std::size_t>(p)]));
        }
        for (std::size_t k = 0; k + 1 < m.background.size(); ++k) radices.push_back(2);
        // A table that ignores one of its inputs would hide that arrow or
        // latent cause, so resample until every input matters.
        auto depends_on_all = [&](const std::vector<int>& natural) {
            std::size_t stride = context_rows;
            for (std::size_t radix : radices) {
                stride /= radix;
                bool matters = false;
                for (std::size_t row = 0; row < context_rows && !matters; ++row) {
                    if ((row / stride) % radix != 0) continue;
                    for (std::size_t v = 1; v < radix && !matters; ++v) {
                        matters = natural[row] != natural[row + v * stride];
                    }
                }
                if (!matters) return false;
            }
            return true;
        };
        std::uniform_int_distribution<int> value(0, sizes[i] - 1);
        std::vector<int> natural(context_rows);
        for (int attempt = 0; attempt < 256; ++attempt) {
            for (auto& x : natural) x = value(rng);
            if (depends_on_all(natural)) break;
        }
        for (std::size_t row = 0; row < context_rows; ++row) {
            for (int force = 0; force <= sizes[i]; ++force) m.table.push_back(force < sizes[i] ? force : natural[row]);
        }
    }
    return DiscreteSCM(vars, sizes, std::move(background), std::move(mechanisms));
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

DiscreteSCM parse_scm(std::string_view text) {
    std::vector<std::string> vars;
    std::vector<int> domains;
    std::vector<BackgroundVar> background;
    std::map<std::string, int> var_index, bg_index;
    std::map<int, Mechanism> mechanisms;
    std::map<int, std::vector<int>> filled;  // -1 marks a missing row
    std::map<int, std::vector<std::pair<std::string, int>>> radix;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& what) -> void { throw SyntaxError(what, line_no); };
        auto words = split_words(line);

        if (words[0] == "var") {
            if (words.size() != 3) fail("expected 'var NAME SIZE'");
            std::string name(words[1]);
            if (!is_valid_name(name) || var_index.contains(name) || bg_index.contains(name)) {
                fail("invalid or duplicate variable '" + name + "'");
            }
            int size = 0;
            auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), size);
            if (ec != std::errc{} || ptr != words[2].data() + words[2].size() || size < 1) fail("bad domain size");
            var_index[name] = static_cast<int>(vars.size());
            vars.push_back(name);
            domains.push_back(size);
        } else if (words[0] == "background") {
            if (words.size() < 3) fail("expected 'background NAME p0 p1 ...'");
            std::string name(words[1]);
            if (!is_valid_name(name) || var_index.contains(name) || bg_index.contains(name)) {
                fail("invalid or duplicate background '" + name + "'");
            }
            BackgroundVar bg{name, {}};
            for (std::size_t k = 2; k < words.size(); ++k) {
                try {
                    bg.probs.push_back(parse_rational(words[k]));
                } catch (const FormatError& e) {
                    fail(e.what());
                }
            }
            bg_index[name] = static_cast<int>(background.size());
            background.push_back(std::move(bg));
        } else if (words[0] == "mechanism") {
            if (words.size() < 2) fail("expected 'mechanism NAME inputs A, B'");
            auto it = var_index.find(std::string(words[1]));
            if (it == var_index.end()) fail("mechanism for undeclared variable '" + std::string(words[1]) + "'");
            if (mechanisms.contains(it->second)) fail("second mechanism for " + std::string(words[1]));
            Mechanism m;
            std::vector<std::pair<std::string, int>> rdx;
            std::size_t rows = 1;
            if (words.size() > 2) {
                if (words[2] != "inputs") fail("expected 'inputs' after the mechanism name");
                auto pos = line.find("inputs");
                for (auto in : split_list(line.substr(pos + 6), ',')) {
                    std::string name(in);
                    if (auto v = var_index.find(name); v != var_index.end()) {
                        m.inputs.push_back(name);
                        rdx.emplace_back(name, domains[static_cast<std::size_t>(v->second)]);
                    } else if (auto b = bg_index.find(name); b != bg_index.end()) {
                        m.background.push_back(name);
                        rdx.emplace_back(name,
                                         static_cast<int>(background[static_cast<std::size_t>(b->second)].probs.size()));
                    } else {
                        fail("unknown input '" + name + "'");
                    }
                    rows *= static_cast<std::size_t>(rdx.back().second);
                }
            }
            // Table rows follow inputs then backgrounds.
            std::stable_partition(rdx.begin(), rdx.end(), [&](const auto& r) { return var_index.contains(r.first); });
            mechanisms[it->second] = std::move(m);
            filled[it->second] = std::vector<int>(rows, -1);
            radix[it->second] = std::move(rdx);
        } else {
            auto open = line.find('(');
            auto close = line.find(')');
            auto eq = line.rfind('=');
            if (open == std::string_view::npos || close == std::string_view::npos || eq == std::string_view::npos ||
                eq < close) {
                fail("unrecognized statement");
            }
            std::string name(trim(line.substr(0, open)));
            auto it = var_index.find(name);
            if (it == var_index.end() || !mechanisms.contains(it->second)) {
                fail("row for a variable without a mechanism line: '" + name + "'");
            }
            std::map<std::string, int> given;
            for (auto part : split_list(line.substr(open + 1, close - open - 1), ',')) {
                auto peq = part.find('=');
                if (peq == std::string_view::npos) fail("row entries look like NAME=value");
                int value = 0;
                auto vtext = trim(part.substr(peq + 1));
                auto [ptr, ec] = std::from_chars(vtext.data(), vtext.data() + vtext.size(), value);
                if (ec != std::errc{} || ptr != vtext.data() + vtext.size()) fail("bad value in row");
                if (!given.emplace(std::string(trim(part.substr(0, peq))), value).second) fail("repeated row entry");
            }
            const auto& rdx = radix[it->second];
            if (given.size() != rdx.size()) fail("row must assign every input exactly once");
            std::size_t row = 0;
            for (const auto& [in, size] : rdx) {
                auto g = given.find(in);
                if (g == given.end()) fail("row does not assign input " + in);
                if (g->second < 0 || g->second >= size) fail("input value out of domain for " + in);
                row = row * static_cast<std::size_t>(size) + static_cast<std::size_t>(g->second);
            }
            int out = 0;
            auto otext = trim(line.substr(eq + 1));
            auto [ptr, ec] = std::from_chars(otext.data(), otext.data() + otext.size(), out);
            if (ec != std::errc{} || ptr != otext.data() + otext.size()) fail("bad output value");
            if (out < 0 || out >= domains[static_cast<std::size_t>(it->second)]) fail("output value out of domain");
            auto& slot = filled[it->second][row];
            if (slot >= 0) fail("duplicate row");
            slot = out;
        }
    }

    std::vector<Mechanism> ordered;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = mechanisms.find(static_cast<int>(i));
        if (it == mechanisms.end()) throw SyntaxError("variable " + vars[i] + " has no mechanism");
        auto& table = filled[static_cast<int>(i)];
        if (std::find(table.begin(), table.end(), -1) != table.end()) {
            throw SyntaxError("mechanism of " + vars[i] + " is missing rows");
        }
        it->second.table = table;
        ordered.push_back(std::move(it->second));
    }
    try {
        return DiscreteSCM(std::move(vars), std::move(domains), std::move(background), std::move(ordered));
    } catch (const SyntaxError&) {
        throw;
    } catch (const Error& e) {
        throw SyntaxError(e.what());
    }
}

std::string to_scm_text(const DiscreteSCM& s) {
    std::ostringstream out;
    for (std::size_t i = 0; i < s.vars().size(); ++i) out << "var " << s.vars()[i] << " " << s.domains()[i] << "\n";
    for (const auto& b : s.background()) {
        out << "background " << b.name;
        for (const auto& p : b.probs) out << " " << to_string(p);
        out << "\n";
    }
    std::map<std::string, int> bg_size;
    for (const auto& b : s.background()) bg_size[b.name] = static_cast<int>(b.probs.size());
    for (std::size_t i = 0; i < s.vars().size(); ++i) {
        const auto& m = s.mechanisms()[i];
        std::vector<std::pair<std::string, int>> rdx;
        for (const auto& in : m.inputs) rdx.emplace_back(in, s.domains()[static_cast<std::size_t>(s.index_of(in))]);
        for (const auto& in : m.background) rdx.emplace_back(in, bg_size.at(in));
        out << "mechanism " << s.vars()[i];
        for (std::size_t k = 0; k < rdx.size(); ++k) out << (k == 0 ? " inputs " : ", ") << rdx[k].first;
        out << "\n";
        for (std::size_t row = 0; row < m.table.size(); ++row) {
            std::vector<int> values(rdx.size());
            std::size_t rest = row;
            for (std::size_t k = rdx.size(); k-- > 0;) {
                values[k] = static_cast<int>(rest % static_cast<std::size_t>(rdx[k].second));
                rest /= static_cast<std::size_t>(rdx[k].second);
            }
            out << s.vars()[i] << "(";
            for (std::size_t k = 0; k < rdx.size(); ++k) out << (k ? ", " : "") << rdx[k].first << "=" << values[k];
            out << ") = " << m.table[row] << "\n";
        }
    }
    return out.str();
}

ExperimentBank make_bank(const DiscreteSCM& s, const InformationSet& info) {
    validate(info);
    ExperimentBank bank;
    bank.info = info;
    for (const auto& v : info.observed) bank.domains[v] = s.domains()[static_cast<std::size_t>(s.index_of(v))];
    std::vector<std::string> zvars(info.experimental.begin(), info.experimental.end());
    for (Mask sub = 0; sub < bit(static_cast<int>(zvars.size())); ++sub) {
        std::vector<std::string> chosen;
        for (int k : members(sub)) chosen.push_back(zvars[static_cast<std::size_t>(k)]);
        std::vector<std::string> kept;
        for (const auto& v : s.vars()) {
            if (info.observed.contains(v) && std::find(chosen.begin(), chosen.end(), v) == chosen.end()) {
                kept.push_back(v);
            }
        }
        std::size_t combos = 1;
        for (const auto& c : chosen) combos *= static_cast<std::size_t>(bank.domains[c]);
        for (std::size_t idx = 0; idx < combos; ++idx) {
            Assignment a;
            std::size_t rest = idx;
            for (std::size_t k = chosen.size(); k-- > 0;) {
                auto size = static_cast<std::size_t>(bank.domains[chosen[k]]);
                a[chosen[k]] = static_cast<int>(rest % size);
                rest /= size;
            }
            bank.tables.emplace(make_regime(a), interventional_joint(s, a).marginal(kept));
        }
    }
    return bank;
}

}  // namespace causal
