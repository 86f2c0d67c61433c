#pragma once

#include <memory>

#include "orbatlas/cat_bk.hpp"
#include "orbatlas/completion.hpp"

namespace orb {

/// A basic chart (W_i, Gamma_i) embedded into a groupoid G: sigma on objects
/// and sigma-tilde on the action morphisms.
struct BasicChartEmbedding {
    int basic_id{};
    FiniteSpace domain;
    FiniteGroup group;
    FiniteGroupAction action;
    std::vector<int> obj_of;               // domain point -> G object
    std::vector<std::vector<int>> mor_of;  // [point][gamma] -> G morphism
};

/// Canonical embeddings of an atlas's basic charts into its own completion.
std::vector<BasicChartEmbedding> canonical_embeddings(const GkGroupoid& gk);

/// Atlas derived from a groupoid with chosen basic charts, plus provenance.
struct DerivedAtlas {
    std::unique_ptr<Atlas> atlas;
    /// chart id -> tuple list (per point, the G-morphism ids alpha_{i_1}..,
    /// ascending); empty vectors for basic charts.
    std::vector<std::vector<std::vector<int>>> tuples;
    /// chart id -> the enumeration sequence of I in the chosen total order.
    std::vector<std::vector<int>> enumeration;
    std::vector<int> order;                // total order on the basic ids
    std::vector<BasicChartEmbedding> embeddings;
    const GroupoidModel* source{};
};

/// Builds the derived atlas. `order` lists the basic ids in their chosen
/// total order (defaults to ascending id order). The source model must carry
/// a morphism-space order. Throws std::invalid_argument on embedding or
/// cover violations; the returned atlas passes validate_atlas on the
/// fixtures this library ships.
DerivedAtlas derive_atlas(const CatOps& g, const std::vector<BasicChartEmbedding>& embeddings,
                          std::vector<int> order = {});

/// The comparison functor F_K : B_K(derived) -> G with its verification
/// (functor laws, realization bijection, stabilizer isomorphisms).
struct InducedFunctor {
    Functor f;
    Report report;
};
InducedFunctor induced_functor(const DerivedAtlas& da, const BkCategory& bk, const CatOps& g);

/// Swaps two adjacent basic indices in the total order and rebuilds; S maps
/// every tuple chart by inverting/composing at the swapped position.
struct ReorderResult {
    DerivedAtlas derived;
    std::vector<std::vector<int>> s_map; // per chart: W_I point -> W'_I point
    Report report;                       // equivariance + completion functor checks
};
ReorderResult reorder_atlas(const DerivedAtlas& da, const CatOps& g, int id_a, int id_b);

} // namespace orb
