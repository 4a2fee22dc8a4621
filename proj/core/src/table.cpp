#include "causal/table.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace causal {

namespace {

std::size_t product_of(const std::vector<int>& sizes) {
    std::size_t n = 1;
    for (int s : sizes) n *= static_cast<std::size_t>(s);
    return n;
}

std::string_view trim(std::string_view s) {
    auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && issp(s.front())) s.remove_prefix(1);
    while (!s.empty() && issp(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(std::string_view s, const std::string& context) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
        throw FormatError(context + ": expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

DistributionTable::DistributionTable(std::vector<std::string> scope, std::vector<int> sizes,
                                     std::vector<Rational> entries)
    : scope_(std::move(scope)), sizes_(std::move(sizes)), entries_(std::move(entries)) {
    if (scope_.size() != sizes_.size()) throw FormatError("table scope and sizes differ in length");
    for (int s : sizes_) {
        if (s < 1) throw FormatError("domain sizes must be positive");
    }
    if (entries_.size() != product_of(sizes_)) throw FormatError("table entry count does not match its domain");
}

DistributionTable DistributionTable::zeros(std::vector<std::string> scope, std::vector<int> sizes) {
    std::size_t n = product_of(sizes);
    return DistributionTable(std::move(scope), std::move(sizes), std::vector<Rational>(n, Rational(0)));
}

int DistributionTable::position(std::string_view name) const {
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (scope_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::size_t DistributionTable::index_of(const std::vector<int>& values) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (values[i] < 0 || values[i] >= sizes_[i]) {
            throw OutOfDomainValue("value " + std::to_string(values[i]) + " outside the domain of " + scope_[i]);
        }
        idx = idx * static_cast<std::size_t>(sizes_[i]) + static_cast<std::size_t>(values[i]);
    }
    return idx;
}

std::vector<int> DistributionTable::values_at(std::size_t index) const {
    std::vector<int> values(sizes_.size());
    for (std::size_t i = sizes_.size(); i-- > 0;) {
        values[i] = static_cast<int>(index % static_cast<std::size_t>(sizes_[i]));
        index /= static_cast<std::size_t>(sizes_[i]);
    }
    return values;
}

const Rational& DistributionTable::at(const Assignment& values) const {
    std::vector<int> row(scope_.size());
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        auto it = values.find(scope_[i]);
        if (it == values.end()) throw UnknownVariable("no value given for " + scope_[i]);
        row[i] = it->second;
    }
    return entries_[index_of(row)];
}

Rational DistributionTable::total() const {
    Rational sum = 0;
    for (const auto& e : entries_) sum += e;
    return sum;
}

bool DistributionTable::is_positive() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& r) { return r > 0; });
}

DistributionTable DistributionTable::marginal(const std::vector<std::string>& keep) const {
    std::vector<int> pos;
    std::vector<int> sizes;
    for (const auto& v : keep) {
        int p = position(v);
        if (p < 0) throw UnknownVariable("variable " + v + " is not in the table scope");
        pos.push_back(p);
        sizes.push_back(sizes_[static_cast<std::size_t>(p)]);
    }
    auto out = zeros(keep, sizes);
    std::vector<int> sub(keep.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto vals = values_at(i);
        for (std::size_t k = 0; k < pos.size(); ++k) sub[k] = vals[static_cast<std::size_t>(pos[k])];
        out.entries_[out.index_of(sub)] += entries_[i];
    }
    return out;
}

DistributionTable DistributionTable::reordered(const std::vector<std::string>& order) const {
    if (order.size() != scope_.size()) throw ScopeMismatch("reorder needs a permutation of the scope");
    return marginal(order);
}

std::string to_csv(const DistributionTable& t) {
    std::string out;
    for (const auto& v : t.scope()) out += v + ",";
    out += "p\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int v : t.values_at(i)) out += std::to_string(v) + ",";
        out += to_string(t[i]) + "\n";
    }
    return out;
}

DistributionTable parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.front() != '#') lines.push_back(line);
    }
    if (lines.empty()) throw FormatError("empty table");
    auto header = split(lines.front(), ',');
    if (header.empty() || header.back() != "p") throw FormatError("table header must end with a 'p' column");
    std::vector<std::string> scope;
    for (std::size_t i = 0; i + 1 < header.size(); ++i) {
        if (!is_valid_name(header[i])) throw FormatError("invalid column name '" + std::string(header[i]) + "'");
        scope.emplace_back(header[i]);
    }
    VarSet distinct(scope.begin(), scope.end());
    if (distinct.size() != scope.size()) throw FormatError("duplicate column in table header");

    std::vector<std::pair<std::vector<int>, Rational>> rows;
    std::vector<int> sizes(scope.size(), 1);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto cells = split(lines[r], ',');
        std::string context = "table row " + std::to_string(r + 1);
        if (cells.size() != header.size()) throw FormatError(context + ": wrong number of cells");
        std::vector<int> values;
        for (std::size_t i = 0; i < scope.size(); ++i) {
            values.push_back(parse_int(cells[i], context));
            sizes[i] = std::max(sizes[i], values.back() + 1);
        }
        Rational p = parse_rational(cells.back());
        if (p < 0) throw FormatError(context + ": negative probability");
        rows.emplace_back(std::move(values), std::move(p));
    }
    auto table = DistributionTable::zeros(scope, sizes);
    if (rows.size() != table.size()) throw FormatError("table rows do not cover the full product domain");
    std::vector<bool> seen(table.size(), false);
    for (auto& [values, p] : rows) {
        auto idx = table.index_of(values);
        if (seen[idx]) throw FormatError("duplicate table row");
        seen[idx] = true;
        table[idx] = p;
    }
    return table;
}

bool independent(const DistributionTable& t, const VarSet& a, const VarSet& b, const VarSet& c) {
    std::vector<std::string> av(a.begin(), a.end()), bv(b.begin(), b.end()), cv(c.begin(), c.end());
    std::vector<std::string> all = av;
    all.insert(all.end(), bv.begin(), bv.end());
    all.insert(all.end(), cv.begin(), cv.end());
    std::vector<std::string> ac = av, bc = bv;
    ac.insert(ac.end(), cv.begin(), cv.end());
    bc.insert(bc.end(), cv.begin(), cv.end());
    auto pabc = t.marginal(all);
    auto pac = t.marginal(ac);
    auto pbc = t.marginal(bc);
    auto pc = t.marginal(cv);
    for (std::size_t i = 0; i < pabc.size(); ++i) {
        auto vals = pabc.values_at(i);
        std::vector<int> va(vals.begin(), vals.begin() + static_cast<long>(av.size()));
        std::vector<int> vb(vals.begin() + static_cast<long>(av.size()),
                            vals.begin() + static_cast<long>(av.size() + bv.size()));
        std::vector<int> vc(vals.begin() + static_cast<long>(av.size() + bv.size()), vals.end());
        std::vector<int> vac = va, vbc = vb;
        vac.insert(vac.end(), vc.begin(), vc.end());
        vbc.insert(vbc.end(), vc.begin(), vc.end());
        if (pabc[i] * pc[pc.index_of(vc)] != pac[pac.index_of(vac)] * pbc[pbc.index_of(vbc)]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Regimes and banks
// ---------------------------------------------------------------------------

Regime make_regime(const Assignment& a) {
    return Regime(a.begin(), a.end());
}

std::string to_string(const Regime& r) {
    std::string out = "do(";
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) out += ",";
        out += r[i].first + "=" + std::to_string(r[i].second);
    }
    return out + ")";
}

Regime parse_regime(std::string_view text) {
    text = trim(text);
    if (text.substr(0, 3) != "do(" || text.back() != ')') {
        throw FormatError("regime must look like do(X=1,Z=0), got '" + std::string(text) + "'");
    }
    auto inner = trim(text.substr(3, text.size() - 4));
    Assignment a;
    if (!inner.empty()) {
        for (auto part : split(inner, ',')) {
            auto eq = part.find('=');
            if (eq == std::string_view::npos) throw FormatError("regime entry needs '=': " + std::string(part));
            auto name = trim(part.substr(0, eq));
            if (!is_valid_name(name)) throw FormatError("invalid variable in regime: " + std::string(name));
            if (!a.emplace(std::string(name), parse_int(trim(part.substr(eq + 1)), "regime")).second) {
                throw FormatError("variable repeated in regime: " + std::string(name));
            }
        }
    }
    return make_regime(a);
}

const DistributionTable* ExperimentBank::find(const Regime& r) const {
    auto it = tables.find(r);
    return it == tables.end() ? nullptr : &it->second;
}

void validate(const ExperimentBank& bank) {
    const auto* obs = bank.find({});
    if (!obs) throw FormatError("experiment bank lacks the observational table do()");
    for (const auto& [regime, table] : bank.tables) {
        if (!table.is_normalized()) throw FormatError("table for " + to_string(regime) + " does not sum to 1");
        VarSet scope(table.scope().begin(), table.scope().end());
        VarSet expected = bank.info.observed;
        for (const auto& [var, value] : regime) {
            if (!bank.info.experimental.contains(var)) {
                throw FormatError("regime " + to_string(regime) + " intervenes outside the experimental scope");
            }
            auto dom = bank.domains.find(var);
            if (dom == bank.domains.end() || value >= dom->second) {
                throw FormatError("regime " + to_string(regime) + " assigns an out-of-domain value");
            }
            expected.erase(var);
        }
        if (scope != expected) throw FormatError("table for " + to_string(regime) + " has the wrong scope");
    }
}

ExperimentBank load_bank(const std::filesystem::path& manifest) {
    auto text = read_file(manifest);
    ExperimentBank bank;
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.rfind('=');
        auto close = line.find(')');
        if (close == std::string_view::npos || eq == std::string_view::npos || eq < close) {
            throw FormatError("manifest line " + std::to_string(line_no) + ": expected 'do(...) = file.csv'");
        }
        auto regime = parse_regime(line.substr(0, close + 1));
        auto file = manifest.parent_path() / std::string(trim(line.substr(eq + 1)));
        auto table = parse_csv(read_file(file));
        for (std::size_t i = 0; i < table.scope().size(); ++i) {
            auto& d = bank.domains[table.scope()[i]];
            d = std::max(d, table.sizes()[i]);
        }
        for (const auto& [var, value] : regime) {
            bank.info.experimental.insert(var);
            auto& d = bank.domains[var];
            d = std::max(d, value + 1);
        }
        if (!bank.tables.emplace(regime, std::move(table)).second) {
            throw FormatError("manifest line " + std::to_string(line_no) + ": regime listed twice");
        }
    }
    const auto* obs = bank.find({});
    if (!obs) throw FormatError("manifest lacks the observational regime do()");
    bank.info.observed = VarSet(obs->scope().begin(), obs->scope().end());
    validate(bank);
    return bank;
}

ExperimentBank observational_bank(const DistributionTable& joint) {
    ExperimentBank bank;
    bank.info.observed = VarSet(joint.scope().begin(), joint.scope().end());
    for (std::size_t i = 0; i < joint.scope().size(); ++i) bank.domains[joint.scope()[i]] = joint.sizes()[i];
    bank.tables.emplace(Regime{}, joint);
    return bank;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const ExperimentBank& bank) : bank_(bank) {}

const DistributionTable& Evaluator::marginal(const Regime& r, const std::vector<std::string>& vars) {
    auto key = std::make_pair(r, vars);
    auto it = marginals_.find(key);
    if (it != marginals_.end()) return it->second;
    const auto* table = bank_.find(r);
    if (!table) throw NotComputable("the bank has no table for " + to_string(r));
    for (const auto& v : vars) {
        if (table->position(v) < 0) {
            throw NotComputable("variable " + v + " is not observed under " + to_string(r));
        }
    }
    return marginals_.emplace(std::move(key), table->marginal(vars)).first->second;
}

Rational Evaluator::atom(const Expr& e, const Env& env) {
    auto value_of = [&](const Symbol& s) {
        auto it = env.find(s);
        if (it == env.end()) throw UnboundVariable("no value for " + to_string(s));
        return it->second;
    };
    Assignment regime_values;
    for (const auto& s : e.intervened()) regime_values[s.var] = value_of(s);
    Regime regime = make_regime(regime_values);

    std::vector<std::string> joint_vars, cond_vars;
    std::vector<int> joint_vals, cond_vals;
    for (const auto& s : e.outcome()) {
        joint_vars.push_back(s.var);
        joint_vals.push_back(value_of(s));
    }
    for (const auto& s : e.observed()) {
        joint_vars.push_back(s.var);
        joint_vals.push_back(value_of(s));
        cond_vars.push_back(s.var);
        cond_vals.push_back(value_of(s));
    }
    const auto& joint = marginal(regime, joint_vars);
    Rational numerator = joint[joint.index_of(joint_vals)];
    if (cond_vars.empty()) return numerator;
    const auto& cond = marginal(regime, cond_vars);
    const Rational& denominator = cond[cond.index_of(cond_vals)];
    if (denominator == 0) throw DivisionByZero("conditioning event has probability zero");
    return numerator / denominator;
}

Rational Evaluator::eval(const Expr& e, Env& env) {
    std::vector<int> key;
    key.reserve(e.free_symbols().size());
    for (const auto& s : e.free_symbols()) key.push_back(env.at(s));
    auto& memo = memo_.try_emplace(e.id(), Memo{e, {}}).first->second;
    if (auto it = memo.values.find(key); it != memo.values.end()) return it->second;

    Rational result;
    switch (e.kind()) {
    case Expr::Kind::One:
        result = 1;
        break;
    case Expr::Kind::Atom:
        result = atom(e, env);
        break;
    case Expr::Kind::Product:
        result = 1;
        for (const auto& f : e.factors()) {
            result *= eval(f, env);
            if (result == 0) break;
        }
        break;
    case Expr::Kind::Sum: {
        const auto& bound = e.bound();
        auto dom = bank_.domains.find(bound.var);
        if (dom == bank_.domains.end()) throw NotComputable("no domain known for " + bound.var);
        auto saved = env.find(bound);
        std::optional<int> previous;
        if (saved != env.end()) previous = saved->second;
        result = 0;
        for (int v = 0; v < dom->second; ++v) {
            env[bound] = v;
            result += eval(e.body(), env);
        }
        if (previous) {
            env[bound] = *previous;
        } else {
            env.erase(bound);
        }
        break;
    }
    case Expr::Kind::Quotient: {
        Rational den = eval(e.denominator(), env);
        if (den == 0) throw DivisionByZero("quotient denominator evaluates to zero");
        result = eval(e.numerator(), env) / den;
        break;
    }
    }
    memo.values.emplace(std::move(key), result);
    return result;
}

Rational Evaluator::value(const Expr& e, const Assignment& env) {
    Env symbols;
    for (const auto& s : e.free_symbols()) {
        auto it = env.find(s.var);
        if (it == env.end()) throw UnboundVariable("no value given for free variable " + s.var);
        auto dom = bank_.domains.find(s.var);
        if (dom != bank_.domains.end() && (it->second < 0 || it->second >= dom->second)) {
            throw OutOfDomainValue("value outside the domain of " + s.var);
        }
        symbols[s] = it->second;
    }
    return eval(e, symbols);
}

DistributionTable evaluate(const Expr& e, const ExperimentBank& bank) {
    auto free = free_variables(e);
    std::vector<std::string> scope;
    std::vector<int> sizes;
    const auto* obs = bank.find({});
    if (obs) {
        for (const auto& v : obs->scope()) {
            if (free.contains(v)) scope.push_back(v);
        }
    }
    for (const auto& v : free) {
        if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
    }
    for (const auto& v : scope) {
        auto dom = bank.domains.find(v);
        if (dom == bank.domains.end()) throw NotComputable("no domain known for " + v);
        sizes.push_back(dom->second);
    }
    auto out = DistributionTable::zeros(scope, sizes);
    Evaluator evaluator(bank);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto vals = out.values_at(i);
        Assignment env;
        for (std::size_t k = 0; k < scope.size(); ++k) env[scope[k]] = vals[k];
        out[i] = evaluator.value(e, env);
    }
    return out;
}

Rational average_effect(const DistributionTable& treated, const DistributionTable& control,
                        const std::map<int, Rational>& value_map) {
    if (treated.scope().size() != 1 || treated.scope() != control.scope() || treated.sizes() != control.sizes()) {
        throw ScopeMismatch("average_effect needs two tables over the same single variable");
    }
    auto expectation = [&](const DistributionTable& t) {
        Rational sum = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            int v = static_cast<int>(i);
            auto it = value_map.find(v);
            Rational y = it == value_map.end() ? Rational(v) : it->second;
            sum += y * t[i];
        }
        return sum;
    };
    return expectation(treated) - expectation(control);
}

}  // namespace causal
