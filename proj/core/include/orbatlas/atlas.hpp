#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbatlas/finspace.hpp"
#include "orbatlas/group.hpp"
#include "orbatlas/report.hpp"

namespace orb {

/// One chart (W_I, Gamma_I, psi_I). The group is always the product of the
/// basic groups over I; the action and footprint map are explicit tables.
struct Chart {
    IndexSet index;
    FiniteSpace space;                      // W_I
    ProductGroup group;                     // Gamma_I
    FiniteGroupAction action;               // Gamma_I on W_I
    SpaceMap footprint_map;                 // psi_I : W_I -> Y
    std::optional<std::vector<int>> orientation; // per-point sign, +1/-1
    std::vector<int> footprint;             // F_I = psi_I(W_I), computed
};

/// Covering map rho_{IJ} : W_J -> W_IJ c= W_I for I c= J, with the canonical
/// coordinate projection on groups.
struct Covering {
    int sub{};  // chart id of I
    int sup{};  // chart id of J
    SpaceMap rho;
};

class Atlas {
public:
    FiniteSpace base;                       // Y
    IndexSet basic_ids;                     // A
    std::map<int, FiniteGroup> basic_groups;
    bool generalized{false};
    /// F_i per basic id. In strict mode this is filled from the basic charts
    /// by finalize(); generalized atlases must supply it (the basic footprints
    /// need not correspond to charts there).
    std::map<int, std::vector<int>> basic_footprints;
    std::vector<Chart> charts;              // indexed by chart id
    std::map<std::pair<int, int>, Covering> coverings; // key (sub chart, sup chart)

    /// Intersection of the basic footprints over I.
    std::vector<int> footprint_intersection(const IndexSet& I) const;

    int chart_id(const IndexSet& I) const;
    const Chart* chart_for(const IndexSet& I) const; // nullptr if I not in the index set
    const Chart& chart(int id) const { return charts[id]; }
    int num_charts() const { return static_cast<int>(charts.size()); }

    bool has_index(const IndexSet& I) const { return chart_for(I) != nullptr; }

    /// rho_{IJ} applied to a point of W_J (identity when I == J).
    int rho(int sub_chart, int sup_chart, int pt) const;
    const Covering* covering(int sub_chart, int sup_chart) const;

    /// Gamma_I for an arbitrary subset of the basic ids (memoized).
    const ProductGroup& group_of(const IndexSet& I) const;

    /// psi-fiber of chart `c` over base point `y`.
    const std::vector<int>& fiber(int c, int y) const;

    /// Recompute footprints, fibers, and the chart lookup table.
    void finalize();

private:
    std::map<IndexSet, int> chart_of_;
    mutable std::map<IndexSet, ProductGroup> group_cache_; // node-stable references
    std::vector<std::vector<std::vector<int>>> fibers_;
};

/// Full axiom check for strict (or generalized) orbifold atlases.
/// Never throws on semantic failure; everything lands in the report.
Report validate_atlas(const Atlas& K);

/// Product of two atlases, always in generalized mode. Basic ids of `b` are
/// shifted by (max basic id of `a`) + 1.
Atlas product_atlas(const Atlas& a, const Atlas& b);

} // namespace orb
