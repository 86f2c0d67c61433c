#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbatlas/finspace.hpp"

namespace orb {

/// Finite group given by an explicit Cayley table. table[a][b] = a*b.
struct FiniteGroup {
    std::vector<std::string> elems;
    std::vector<std::vector<int>> table;
    int identity{0};
    std::vector<int> inverse;

    int order() const { return static_cast<int>(elems.size()); }
    int mul(int a, int b) const { return table[a][b]; }
    int inv(int a) const { return inverse[a]; }

    /// Full law verification (associativity, identity, inverses).
    std::optional<std::string> check() const;
    /// Laws that don't need the inverse table (for staged input checking).
    std::optional<std::string> check_table_only() const;
    void compute_inverses();

    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n, const std::string& prefix = "r");
    static FiniteGroup symmetric3();

    /// Smallest subgroup containing the given elements.
    std::vector<int> subgroup_closure(std::vector<int> gens) const;
};

/// Index sets name subsets of the basic chart labels; kept sorted and unique.
using IndexSet = std::vector<int>;

IndexSet iset_union(const IndexSet& a, const IndexSet& b);
IndexSet iset_intersect(const IndexSet& a, const IndexSet& b);
IndexSet iset_minus(const IndexSet& a, const IndexSet& b);
bool iset_subset(const IndexSet& a, const IndexSet& b);
std::string iset_str(const IndexSet& I);

/// The product group Gamma_I = prod_{i in I} Gamma_i, with tuple codec.
/// Elements are encoded lexicographically: first (smallest) factor index is
/// most significant. Gamma_emptyset is the trivial group.
struct ProductGroup {
    IndexSet index;
    std::vector<FiniteGroup> factors; // aligned with index
    FiniteGroup grp;                  // materialized Cayley table
    std::vector<int> stride;

    int order() const { return grp.order(); }
    int id() const { return grp.identity; }
    int mul(int a, int b) const { return grp.mul(a, b); }
    int inv(int a) const { return grp.inv(a); }

    std::vector<int> decode(int code) const;
    int encode(const std::vector<int>& comps) const;

    /// Coordinate projection Gamma_index -> Gamma_{sub.index} (rho^Gamma).
    int project(int code, const ProductGroup& sub) const;
    /// Extension by identities into a larger product.
    int embed(int code, const ProductGroup& super) const;

    /// split at K: returns (projection to I-cap-K extended by identities,
    /// the complement gamma * first^{-1}); the parts commute.
    std::pair<int, int> split(int code, const IndexSet& K) const;

    std::string elem_name(int code) const { return grp.elems[code]; }
};

ProductGroup product_group(const std::map<int, FiniteGroup>& basic, const IndexSet& I);

/// Group action on a finite space: act[g][point] -> point.
struct FiniteGroupAction {
    std::vector<std::vector<int>> act;
};

std::optional<std::string> verify_action(const FiniteGroup& g, const FiniteSpace& s,
                                         const FiniteGroupAction& a);
std::vector<int> orbit_of(const FiniteGroupAction& a, const FiniteGroup& g, int x);
/// Elements fixing x.
std::vector<int> stabilizer_elems(const FiniteGroupAction& a, const FiniteGroup& g, int x);
/// Stabilizer as a FiniteGroup in its own right plus the element embedding.
std::pair<FiniteGroup, std::vector<int>> stabilizer_group(const FiniteGroupAction& a,
                                                          const FiniteGroup& g, int x);
/// Witnesses (g, x) with g != e in the subgroup and g.x = x; empty means free.
std::vector<std::pair<int, int>> fixed_point_witnesses(const FiniteGroupAction& a,
                                                       const FiniteGroup& g,
                                                       const std::vector<int>& subgroup);

} // namespace orb
