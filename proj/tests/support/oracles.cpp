#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace causal::testing {

std::uint64_t count_dags_brute(int n) {
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) arcs.emplace_back(i, j);
        }
    }
    std::uint64_t count = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << arcs.size()); ++code) {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
        std::vector<int> indegree(static_cast<std::size_t>(n), 0);
        for (std::size_t k = 0; k < arcs.size(); ++k) {
            if ((code >> k) & 1U) {
                out[static_cast<std::size_t>(arcs[k].first)].push_back(arcs[k].second);
                ++indegree[static_cast<std::size_t>(arcs[k].second)];
            }
        }
        // Peel sources; a cycle leaves vertices behind.
        std::vector<int> ready;
        for (int v = 0; v < n; ++v) {
            if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
        }
        int removed = 0;
        while (!ready.empty()) {
            int v = ready.back();
            ready.pop_back();
            ++removed;
            for (int w : out[static_cast<std::size_t>(v)]) {
                if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
            }
        }
        if (removed == n) ++count;
    }
    return count;
}

bool d_separated_by_paths(const CausalDiagram& d, Mask a, Mask b, Mask c) {
    const int n = static_cast<int>(d.size());
    const auto& family = d.confounding();
    const int total = n + static_cast<int>(family.size());
    // arrow[u][v]: a directed edge u -> v in the augmented graph.
    std::vector<std::vector<bool>> arrow(static_cast<std::size_t>(total), std::vector<bool>(static_cast<std::size_t>(total)));
    for (int v = 0; v < n; ++v) {
        for (int p = 0; p < n; ++p) {
            if (has(d.parents(v), p)) arrow[static_cast<std::size_t>(p)][static_cast<std::size_t>(v)] = true;
        }
    }
    for (std::size_t k = 0; k < family.size(); ++k) {
        for (int v = 0; v < n; ++v) {
            if (has(family[k], v)) arrow[static_cast<std::size_t>(n) + k][static_cast<std::size_t>(v)] = true;
        }
    }
    auto in_c = [&](int v) { return v < n && has(c, v); };
    // Vertices with a descendant (or themselves) in c.
    std::vector<bool> reaches_c(static_cast<std::size_t>(total));
    for (int v = 0; v < total; ++v) {
        std::vector<bool> seen(static_cast<std::size_t>(total));
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (seen[static_cast<std::size_t>(u)]) continue;
            seen[static_cast<std::size_t>(u)] = true;
            if (in_c(u)) reaches_c[static_cast<std::size_t>(v)] = true;
            for (int w = 0; w < total; ++w) {
                if (arrow[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)]) stack.push_back(w);
            }
        }
    }
    auto adjacent = [&](int u, int w) {
        return arrow[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] ||
               arrow[static_cast<std::size_t>(w)][static_cast<std::size_t>(u)];
    };

    std::vector<int> path;
    std::vector<bool> on_path(static_cast<std::size_t>(total));
    std::function<bool(int, int)> active_path_to = [&](int u, int target) -> bool {
        if (u == target) {
            for (std::size_t k = 1; k + 1 < path.size(); ++k) {
                int prev = path[k - 1], mid = path[k], next = path[k + 1];
                bool collider = arrow[static_cast<std::size_t>(prev)][static_cast<std::size_t>(mid)] &&
                                arrow[static_cast<std::size_t>(next)][static_cast<std::size_t>(mid)];
                if (collider ? !reaches_c[static_cast<std::size_t>(mid)] : in_c(mid)) return false;
            }
            return true;
        }
        for (int w = 0; w < total; ++w) {
            if (on_path[static_cast<std::size_t>(w)] || !adjacent(u, w)) continue;
            on_path[static_cast<std::size_t>(w)] = true;
            path.push_back(w);
            bool found = active_path_to(w, target);
            path.pop_back();
            on_path[static_cast<std::size_t>(w)] = false;
            if (found) return true;
        }
        return false;
    };
    for (int s = 0; s < n; ++s) {
        if (!has(a, s)) continue;
        for (int t = 0; t < n; ++t) {
            if (!has(b, t)) continue;
            path = {s};
            std::fill(on_path.begin(), on_path.end(), false);
            on_path[static_cast<std::size_t>(s)] = true;
            if (active_path_to(s, t)) return false;
        }
    }
    return true;
}

namespace {

std::vector<std::vector<int>> all_backgrounds(const DiscreteSCM& s) {
    std::vector<std::vector<int>> out{{}};
    for (const auto& b : s.background()) {
        std::vector<std::vector<int>> next;
        for (const auto& prefix : out) {
            for (int v = 0; v < static_cast<int>(b.probs.size()); ++v) {
                auto u = prefix;
                u.push_back(v);
                next.push_back(std::move(u));
            }
        }
        out = std::move(next);
    }
    return out;
}

Rational weight(const DiscreteSCM& s, const std::vector<int>& u) {
    Rational p = 1;
    for (std::size_t k = 0; k < u.size(); ++k) p *= s.background()[k].probs[static_cast<std::size_t>(u[k])];
    return p;
}

}  // namespace

std::vector<int> brute_solve(const DiscreteSCM& s, const std::vector<int>& u, const Assignment& forced) {
    const auto& vars = s.vars();
    std::map<std::string, int> value;
    std::map<std::string, int> background;
    for (std::size_t k = 0; k < u.size(); ++k) background[s.background()[k].name] = u[k];
    for (const auto& [name, v] : forced) value[name] = v;
    // Sweep until every variable is solved; recursion guarantees progress.
    while (value.size() < vars.size()) {
        bool progress = false;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (value.contains(vars[i])) continue;
            const auto& m = s.mechanisms()[i];
            bool ready = true;
            for (const auto& in : m.inputs) ready = ready && value.contains(in);
            if (!ready) continue;
            std::size_t row = 0;
            for (const auto& in : m.inputs) {
                row = row * static_cast<std::size_t>(s.domains()[static_cast<std::size_t>(s.index_of(in))]) +
                      static_cast<std::size_t>(value[in]);
            }
            for (const auto& b : m.background) {
                std::size_t k = 0;
                while (s.background()[k].name != b) ++k;
                row = row * s.background()[k].probs.size() + static_cast<std::size_t>(background[b]);
            }
            value[vars[i]] = m.table.at(row);
            progress = true;
        }
        if (!progress) throw std::logic_error("cyclic model");
    }
    std::vector<int> out;
    for (const auto& v : vars) out.push_back(value[v]);
    return out;
}

DistributionTable brute_joint(const DiscreteSCM& s, const Assignment& forced) {
    std::vector<std::string> scope;
    std::vector<int> sizes;
    for (std::size_t i = 0; i < s.vars().size(); ++i) {
        if (forced.contains(s.vars()[i])) continue;
        scope.push_back(s.vars()[i]);
        sizes.push_back(s.domains()[i]);
    }
    auto table = DistributionTable::zeros(scope, sizes);
    for (const auto& u : all_backgrounds(s)) {
        auto v = brute_solve(s, u, forced);
        std::vector<int> row;
        for (const auto& name : scope) row.push_back(v[static_cast<std::size_t>(s.index_of(name))]);
        table[table.index_of(row)] += weight(s, u);
    }
    return table;
}

DistributionTable brute_counterfactual(const DiscreteSCM& s, const std::vector<World>& worlds,
                                       const Assignment& condition) {
    std::vector<std::string> scope;
    std::vector<int> sizes;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
        for (const auto& t : worlds[w].targets) {
            scope.push_back(t + "@" + std::to_string(w));
            sizes.push_back(s.domains()[static_cast<std::size_t>(s.index_of(t))]);
        }
    }
    auto table = DistributionTable::zeros(scope, sizes);
    Rational evidence = 0;
    for (const auto& u : all_backgrounds(s)) {
        auto actual = brute_solve(s, u, {});
        bool consistent = true;
        for (const auto& [name, v] : condition) consistent = consistent && actual[static_cast<std::size_t>(s.index_of(name))] == v;
        if (!consistent) continue;
        Rational p = weight(s, u);
        evidence += p;
        std::vector<int> row;
        for (const auto& world : worlds) {
            auto values = brute_solve(s, u, world.intervention);
            for (const auto& t : world.targets) row.push_back(values[static_cast<std::size_t>(s.index_of(t))]);
        }
        table[table.index_of(row)] += p;
    }
    if (evidence == 0) throw std::domain_error("null condition");
    for (std::size_t k = 0; k < table.size(); ++k) table[k] /= evidence;
    return table;
}

ExperimentBank brute_bank(const DiscreteSCM& s, const InformationSet& info) {
    ExperimentBank bank;
    bank.info = info;
    std::vector<std::string> z(info.experimental.begin(), info.experimental.end());
    for (const auto& v : info.observed) bank.domains[v] = s.domains()[static_cast<std::size_t>(s.index_of(v))];
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << z.size()); ++pick) {
        std::vector<std::string> chosen;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if ((pick >> k) & 1U) chosen.push_back(z[k]);
        }
        std::vector<std::string> keep;
        for (const auto& v : s.vars()) {
            if (info.observed.contains(v) && std::find(chosen.begin(), chosen.end(), v) == chosen.end()) {
                keep.push_back(v);
            }
        }
        // Every value combination of the chosen variables.
        std::vector<int> values(chosen.size(), 0);
        while (true) {
            Assignment forced;
            for (std::size_t k = 0; k < chosen.size(); ++k) forced[chosen[k]] = values[k];
            bank.tables.emplace(make_regime(forced), brute_joint(s, forced).marginal(keep));
            std::size_t k = 0;
            for (; k < chosen.size(); ++k) {
                if (++values[k] < bank.domains[chosen[k]]) break;
                values[k] = 0;
            }
            if (k == chosen.size()) break;
        }
    }
    return bank;
}

std::optional<Assignment> oracle_mismatch(const DiscreteSCM& s, const InformationSet& info, const Query& q,
                                          const Expr& f) {
    auto bank = brute_bank(s, info);
    Evaluator ev(bank);
    std::vector<std::string> vars, yw, w;
    for (const auto& v : s.vars()) {
        bool in_y = q.outcome.contains(v), in_w = q.observed.contains(v);
        if (in_y || in_w || q.intervened.contains(v)) vars.push_back(v);
        if (in_y || in_w) yw.push_back(v);
        if (in_w) w.push_back(v);
    }
    std::vector<int> values(vars.size(), 0);
    std::map<Assignment, DistributionTable> joints;
    while (true) {
        Assignment row, forced;
        for (std::size_t k = 0; k < vars.size(); ++k) {
            row[vars[k]] = values[k];
            if (q.intervened.contains(vars[k])) forced[vars[k]] = values[k];
        }
        auto it = joints.find(forced);
        if (it == joints.end()) it = joints.emplace(forced, brute_joint(s, forced)).first;
        Rational norm = it->second.marginal(w).at(row);
        if (norm != 0) {
            Rational expected = it->second.marginal(yw).at(row) / norm;
            if (ev.value(f, row) != expected) return row;
        }
        std::size_t k = 0;
        for (; k < vars.size(); ++k) {
            if (++values[k] < s.domains()[static_cast<std::size_t>(s.index_of(vars[k]))]) break;
            values[k] = 0;
        }
        if (k == vars.size()) break;
    }
    return std::nullopt;
}

}  // namespace causal::testing
