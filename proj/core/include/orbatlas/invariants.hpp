#pragma once

#include <map>

#include "orbatlas/resolve.hpp"

namespace orb {

/// Lambda_G(y) = 1 / |stabilizer| per base point, checked well defined
/// across every psi-fiber of every chart.
std::pair<std::vector<Rat>, Report> orbifold_weighting(const GkGroupoid& gk);

/// Pushforward of Lambda_V along |psi| . |iota| equals Lambda_G, pointwise
/// exact; per-point residuals are reported.
Report pushforward_check(const Weighting& w, const std::vector<Rat>& lambda_g,
                         const FiniteSpace& base);

/// Signed total weight of a 0-dimensional weighted object.
Rat total_weight(const std::vector<std::pair<Rat, int>>& weighted_signed_points);

/// A compatible section over a reduction: a value per V_I point (0 marks the
/// zero set) plus signs on zero points.
struct SectionData {
    std::vector<std::vector<int>> values;        // per chart: per V-local point
    std::map<std::pair<int, int>, int> signs;    // (chart, V-local point) -> +1/-1
};

/// Compatibility (nu_J = nu_I . rho on the tilde sets) and Gamma-invariance.
Report check_section(const Atlas& K, const Reduction& red, const SectionData& nu);

struct EulerResult {
    GroupoidModel zero_model;     // full subcategory Z^nu of V^H on the zeros
    std::vector<int> zero_objects; // V^H object ids
    std::vector<Rat> class_weight; // per zero realization class
    std::vector<int> class_sign;
    Rat total;
    Report report;
};
EulerResult euler_number(const ResolutionGroupoid& vh, const Weighting& w,
                         const SectionData& nu);

/// Z/2 gerbe data of a trivially-acting Z2 atlas. A "sheet" of W_I is a
/// union of components that psi maps bijectively onto F_I; the cocycle and
/// the family search run over sheets (components, when footprints are
/// connected and domains split).
struct GerbeResult {
    bool precondition_ok{false};
    std::map<IndexSet, int> alpha;     // per |J| = 3 chart, against the base sheets
    bool trivial{false};
    int class_bit{1};                  // 0 iff a compatible sheet family exists
    std::map<IndexSet, int> family;    // chosen sheet per chart when trivial
    std::map<IndexSet, int> sheet_count;
    Report report;
};

/// Computes the Cech cocycle, verifies the parity identity on every 4-set,
/// and searches for a globally compatible sheet family. base_choice
/// optionally overrides the base sheets W0_I for |I| = 2 (chart id -> sheet).
GerbeResult gerbe_class(const Atlas& K, const std::map<int, int>& base_choice = {});

/// Candidate subatlas embedding iota : B_K -> B_K2 over the same base.
struct AtlasEmbedding {
    std::map<int, int> basic_map;                  // basic id -> basic id
    std::map<IndexSet, std::vector<int>> point_maps; // per K-chart index: W_I -> W_I' points
};
Report subatlas_check(const Atlas& K, const Atlas& K2, const AtlasEmbedding& emb);

} // namespace orb
