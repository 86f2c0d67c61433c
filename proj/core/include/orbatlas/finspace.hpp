#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orb {

/// Finite T0 space encoded as a poset. Convention: x <= y means
/// x lies in the closure of {y}; the open sets are the up-closed subsets.
/// This is the combinatorial stand-in for every manifold in the library.
class FiniteSpace {
public:
    FiniteSpace() = default;

    /// Build from generating relations (lower, upper). Reflexive-transitive
    /// closure is taken; throws if antisymmetry fails.
    static FiniteSpace from_covers(std::vector<std::string> names,
                                   const std::vector<std::pair<int, int>>& covers);
    static FiniteSpace discrete(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int p) const { return names_[p]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> index_of(const std::string& name) const;

    bool le(int x, int y) const { return le_[x][y]; }

    /// Down-closure (topological closure) of a subset.
    std::vector<int> closure(const std::vector<int>& subset) const;
    /// Up-closure of a subset (smallest open set containing it).
    std::vector<int> up_closure(const std::vector<int>& subset) const;
    /// closure(A) minus A.
    std::vector<int> frontier(const std::vector<int>& subset) const;
    /// Up-set of a point: the unique minimal open neighbourhood.
    std::vector<int> min_open_nbhd(int p) const;

    bool is_open(const std::vector<int>& subset) const;
    bool is_closed(const std::vector<int>& subset) const;

    /// Order-connected components of a subset (comparability as adjacency).
    std::vector<std::vector<int>> components(const std::vector<int>& subset) const;

    /// Induced subspace; second result maps local index -> global point.
    std::pair<FiniteSpace, std::vector<int>> subspace(const std::vector<int>& subset) const;

    /// Product poset; point (x, y) has index x * b.size() + y.
    static FiniteSpace product(const FiniteSpace& a, const FiniteSpace& b);
    /// Disjoint union; second result holds the block offsets.
    static std::pair<FiniteSpace, std::vector<int>> disjoint_union(
        const std::vector<const FiniteSpace*>& parts);

    /// Hasse diagram (transitive reduction), as (lower, upper) pairs.
    std::vector<std::pair<int, int>> hasse_pairs() const;

    /// Largest open set contained in the given subset.
    std::vector<int> open_core(const std::vector<int>& subset) const;

    bool is_automorphism(const std::vector<int>& perm) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<bool>> le_;

    friend struct SpaceBuilder;
};

/// Point map between two spaces, stored as target indices per source point.
struct SpaceMap {
    std::vector<int> assign;
    int operator()(int p) const { return assign[p]; }
};

bool is_order_preserving(const FiniteSpace& src, const FiniteSpace& dst, const SpaceMap& f);
/// Order-isomorphism test for a given bijection candidate.
bool is_space_iso_map(const FiniteSpace& a, const FiniteSpace& b, const std::vector<int>& bij);
/// Brute-force isomorphism search (small spaces only).
std::optional<std::vector<int>> find_space_iso(const FiniteSpace& a, const FiniteSpace& b);

/// Quotient by a partition: finest preorder making the projection
/// order-preserving, then T0-ified by collapsing order-cycles.
/// cls_of[p] gives the class of each point; classes need not be numbered densely.
struct QuotientResult {
    FiniteSpace space;
    SpaceMap projection; // original point -> quotient point
};
QuotientResult quotient_space(const FiniteSpace& s, const std::vector<int>& cls_of);

} // namespace orb
