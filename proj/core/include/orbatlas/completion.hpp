#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <unordered_map>

#include "orbatlas/atlas.hpp"
#include "orbatlas/cat_bk.hpp"
#include "orbatlas/groupoid.hpp"

namespace orb {

/// The canonical groupoid completion G_K. Morphisms from W_I to W_J are
/// pairs (z, gamma) with z in W_{I u J} and gamma in Gamma_{I n J}; source is
/// (I, gamma^{-1} rho_{I,IuJ}(z)), target (J, rho_{J,IuJ}(z)). Composition
/// solves for the unique lift (v, alpha) through the fiber-product square.
class GkGroupoid {
public:
    static GkGroupoid build(const Atlas& K, bool with_mor_space = false);

    const GroupoidModel& model() const { return model_; }
    const Atlas& atlas() const { return *atlas_; }

    int mor_id(int ci, int cj, int carrier, int label) const;

    struct ComposeResult {
        int mor{-1};
        int solutions{0}; // number of (v, alpha) solutions found
    };
    /// Runs the lift solver; counts all solutions (valid atlases give 1).
    ComposeResult compose_detail(int a, int b) const;
    std::optional<int> compose(int a, int b) const;
    int invert(int m) const;

    CatOps ops() const;

    /// Full groupoid verification: category laws, inverses, condition (*),
    /// stabilizer isomorphisms, solver uniqueness, fiber counts, orientation.
    Report verify() const;

    /// When set, every composition prints its (gamma_IJK, gamma_IJ\K, alpha, v).
    void set_trace(std::ostream* os) { trace_ = os; }

    /// rho-preimage list of a covering pair (cached).
    const std::vector<std::vector<int>>& preimages(int sub_chart, int sup_chart) const;

private:
    const Atlas* atlas_{};
    GroupoidModel model_;
    std::unordered_map<uint64_t, int> lookup_;
    mutable std::map<std::pair<int, int>, std::vector<std::vector<int>>> preimage_cache_;
    std::ostream* trace_{};
};

/// Result bundle of the point-orbifold construction (Y = one point with
/// stabilizer S embedded into each Gamma_i). Heap members keep every
/// internal pointer stable when the bundle itself is moved.
struct PointOrbifold {
    std::unique_ptr<Atlas> atlas_ptr;    // charts W_I = Gamma_I / S
    std::unique_ptr<Atlas> id_atlas;     // trivial-S twin (domains Gamma_I)
    std::unique_ptr<BkCategory> b_s;     // B_S
    std::unique_ptr<GkGroupoid> g_s;     // completion G_S
    std::unique_ptr<BkCategory> b_id;    // B_id on the twin atlas

    GroupoidModel g_id;                  // objects Gamma_I, one morphism per pair
    GroupoidModel g_id_mod_s;            // quotient G_id / S

    Functor f_s;                         // F_S : B_id -> B_S
    Functor phi;                         // G_id/S -> G_S isomorphism candidate

    std::vector<std::vector<int>> coset_rep;     // per chart: coset point -> rep code
    std::vector<std::vector<int>> coset_of_code; // per chart: group code -> coset point
    std::vector<std::vector<int>> diag;          // per chart: s -> diagonal embedding code

    std::map<std::pair<int, int>, int> id_pair_offset;   // g_id morphism id layout
    std::unordered_map<uint64_t, int> quot_lookup;       // g_id_mod_s morphism ids
    FiniteGroup s_group;

    const Atlas& atlas() const { return *atlas_ptr; }
    CatOps g_id_ops() const;
    CatOps g_id_mod_s_ops() const;
};

/// Builds the whole Example-style data set. Throws std::invalid_argument if
/// some embedding S -> Gamma_i is not an injective homomorphism.
PointOrbifold point_orbifold(const std::vector<FiniteGroup>& gammas,
                             const FiniteGroup& s,
                             const std::vector<std::vector<int>>& s_embeddings);

/// Verification bundle for a point orbifold: F_S functoriality,
/// F_S . F_s = F_S, and the isomorphism G_id/S ~ G_S (exhaustive).
/// full_laws additionally runs the exhaustive category-law suites on G_id
/// and G_id/S (cubic in morphism count; keep it for the small fixtures).
Report verify_point_orbifold(const PointOrbifold& po, bool full_laws = true);

} // namespace orb
