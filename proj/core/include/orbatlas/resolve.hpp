#pragma once

#include <optional>
#include <unordered_map>

#include "orbatlas/completion.hpp"
#include "orbatlas/rational.hpp"

namespace orb {

/// Cover reduction: an open Q_I c= F_I per chart (possibly empty) with
/// closure containment, covering, and the nesting property. V_I and the
/// tilde sets are derived.
struct Reduction {
    std::vector<std::vector<int>> Q; // per chart id: sorted base point set
    std::vector<std::vector<int>> V; // per chart id: sorted W_I point set

    /// V_J n psi_J^{-1}(Q_I), a subset of W_J points (I = sub chart).
    std::vector<int> vtilde(const Atlas& K, int sub_chart, int sup_chart) const;
};

Reduction make_reduction(const Atlas& K, std::vector<std::vector<int>> Q);

/// The three Def-style bullets, reported with witnesses.
Report validate_reduction(const Atlas& K, const Reduction& red);

struct ReductionSearchOptions {
    unsigned seed{0};        // 0 = canonical candidate order
    long long max_nodes{200000};
};

/// Backtracking search: charts by decreasing |I| then lexicographic, open
/// candidates from the admissible core, largest first with a shrink chain.
/// Throws std::runtime_error (NoReductionFound) when the model is too coarse
/// or the node budget runs out.
Reduction cover_reduction(const Atlas& K, const ReductionSearchOptions& opts = {});

/// The resolution V_K (and its morphism closure V^H). Morphisms are stored
/// as references into G_K; composition is inherited.
class ResolutionGroupoid {
public:
    static ResolutionGroupoid build(const GkGroupoid& gk, const Reduction& red);
    /// Adds the frontier morphisms (and their inverses); result models V^H.
    ResolutionGroupoid hausdorff_close() const;

    const GroupoidModel& model() const { return model_; }
    const GkGroupoid& gk() const { return *gk_; }
    const Atlas& atlas() const { return gk_->atlas(); }
    const Reduction& reduction() const { return *red_; }
    bool closed() const { return closed_; }

    int gk_mor_of(int vmor) const { return gk_mor_of_[vmor]; }
    int vmor_of_gk(int gkmor) const;
    int gk_object_of(int vobj) const;
    std::optional<int> vobj_of_gk(int gkobj) const;

    std::optional<int> compose(int a, int b) const; // nullopt when not composable
    int invert(int m) const;
    CatOps ops() const;

    /// Closure under composition/inverse and nonsingularity.
    Report verify_structure() const;

    /// Two-route check of the frontier formula: the carrier sets added by
    /// hausdorff_close must equal the topological closure of the open
    /// resolution's morphism blocks inside Mor_{G_V}. Call on the closed
    /// version, passing the open one.
    Report check_frontier_formula(const ResolutionGroupoid& open_version) const;

private:
    const GkGroupoid* gk_{};
    const Reduction* red_{};
    GroupoidModel model_;
    std::vector<int> gk_mor_of_;
    std::unordered_map<int, int> vmor_of_gk_;
    std::vector<int> gk_obj_of_;
    std::unordered_map<int, int> vobj_of_gk_;
    bool closed_{false};

    void index_mors();
};

/// Weighting data on |V^H| (exact rationals), with per-point branch lists
/// and the branch locus.
struct Weighting {
    Realization real;                 // realization of V^H
    std::vector<Rat> value;           // per realization point
    std::vector<std::vector<std::pair<int, Rat>>> branches; // (chart, weight) per point
    std::vector<int> branch_locus;    // realization points with >1 |V|-preimage
    std::vector<int> base_point;      // realization point -> Y point (via psi)
};

/// Lambda_V(y) = n(y)/|Gamma_J|, the minimal chart I_y, and the free-orbit
/// property of Prop-V(3); inconsistencies land in the report.
std::pair<Weighting, Report> compute_weighting(const ResolutionGroupoid& vh,
                                               const ResolutionGroupoid& vk);

/// Covering / Local Regularity / Weighting wnb axioms at every point of the
/// Hausdorff realization.
Report wnb_check(const ResolutionGroupoid& vk, const ResolutionGroupoid& vh,
                 const Weighting& w);

} // namespace orb
