#pragma once

#include <memory>
#include <unordered_map>

#include "orbatlas/atlas.hpp"
#include "orbatlas/groupoid.hpp"

namespace orb {

/// The etale category B_K of an atlas: objects are the disjoint chart
/// domains, morphisms (I,J,y,gamma) for I c= J with y in W_J, gamma in
/// Gamma_I, source (I, gamma^{-1} rho_IJ(y)) and target (J, y).
class BkCategory {
public:
    static BkCategory build(const Atlas& K, bool with_mor_space = false);

    const GroupoidModel& model() const { return model_; }
    const Atlas& atlas() const { return *atlas_; }

    /// Morphism id for key (sub chart, sup chart, carrier in W_J, gamma in
    /// Gamma_I); -1 when absent.
    int mor_id(int ci, int cj, int carrier, int label) const;

    /// Composition in categorical order: a: x->y then b: y->z.
    std::optional<int> compose(int a, int b) const;

    CatOps ops() const;

    /// Category laws plus the realization check |psi| : |B_K| -> Y.
    Report verify() const;

private:
    const Atlas* atlas_{};
    GroupoidModel model_;
    std::unordered_map<uint64_t, int> lookup_;
};

/// Packs a morphism key; asserts the component bounds.
uint64_t mor_key(int ci, int cj, int carrier, int label);

/// Checks that |psi| induces a space isomorphism realize(M) -> Y.
void check_realization_is_base(const GroupoidModel& m, const Atlas& K, Report& rep,
                               const std::string& tag);

} // namespace orb
