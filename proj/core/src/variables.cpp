#include "causal/variables.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

namespace causal {

std::vector<int> members(Mask m) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(popcount(m)));
    while (m != 0) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

bool is_valid_name(std::string_view name) {
    if (name.empty()) return false;
    auto head = static_cast<unsigned char>(name[0]);
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string format_set(const VarSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ", ";
        out += v;
        first = false;
    }
    return out + "}";
}

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool disjoint(const VarSet& a, const VarSet& b) {
    return set_intersection(a, b).empty();
}

bool includes(const VarSet& outer, const VarSet& inner) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace causal
