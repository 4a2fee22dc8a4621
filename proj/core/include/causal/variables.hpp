#pragma once

#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

/// A set of variable names. Ordered by name; position-sensitive orderings go
/// through the owning diagram instead.
using VarSet = std::set<std::string>;

/// Bitset over a diagram's vertex indices.
using Mask = std::uint64_t;

inline constexpr std::size_t kMaxVertices = 64;

inline constexpr Mask bit(int i) { return Mask{1} << i; }
inline constexpr bool has(Mask m, int i) { return (m >> i) & 1U; }
inline constexpr int popcount(Mask m) { return std::popcount(m); }
inline constexpr bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

/// Indices of the set bits, ascending.
std::vector<int> members(Mask m);

/// True when `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_valid_name(std::string_view name);

std::string to_lower(std::string_view s);

/// "{A, B}" style rendering used by diagnostics and listings.
std::string format_set(const VarSet& s);

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
bool disjoint(const VarSet& a, const VarSet& b);
bool includes(const VarSet& outer, const VarSet& inner);

}  // namespace causal
