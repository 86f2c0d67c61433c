#include "orbatlas/cat_bk.hpp"

#include <stdexcept>

namespace orb {

uint64_t mor_key(int ci, int cj, int carrier, int label) {
    if (ci > 0xFF || cj > 0xFF || carrier > 0xFFFFFF || label > 0xFFFFFF)
        throw std::length_error("morphism key component out of packing range");
    return (static_cast<uint64_t>(ci) << 56) | (static_cast<uint64_t>(cj) << 48) |
           (static_cast<uint64_t>(carrier) << 24) | static_cast<uint64_t>(label);
}

BkCategory BkCategory::build(const Atlas& K, bool with_mor_space) {
    BkCategory bk;
    bk.atlas_ = &K;
    GroupoidModel& M = bk.model_;
    M.groupoid_flag = false;

    std::vector<const FiniteSpace*> spaces;
    for (auto& ch : K.charts) spaces.push_back(&ch.space);
    auto [uspace, offsets] = FiniteSpace::disjoint_union(spaces);
    M.obj_space = std::move(uspace);
    for (int c = 0; c < K.num_charts(); ++c)
        M.blocks.push_back({K.chart(c).index, offsets[c], K.chart(c).space.size()});

    for (int ci = 0; ci < K.num_charts(); ++ci)
        for (int cj = 0; cj < K.num_charts(); ++cj) {
            const Chart& CI = K.chart(ci);
            const Chart& CJ = K.chart(cj);
            if (!iset_subset(CI.index, CJ.index)) continue;
            for (int y = 0; y < CJ.space.size(); ++y)
                for (int g = 0; g < CI.group.order(); ++g) {
                    GroupoidModel::Mor mor;
                    mor.iblk = ci;
                    mor.jblk = cj;
                    mor.carrier = y;
                    mor.label = g;
                    int ry = K.rho(ci, cj, y);
                    mor.src = M.object(ci, CI.action.act[CI.group.inv(g)][ry]);
                    mor.dst = M.object(cj, y);
                    bk.lookup_[mor_key(ci, cj, y, g)] = M.num_mors();
                    M.mors.push_back(mor);
                }
        }

    M.identity_of.assign(M.num_objects(), -1);
    for (int c = 0; c < K.num_charts(); ++c)
        for (int x = 0; x < K.chart(c).space.size(); ++x)
            M.identity_of[M.object(c, x)] = bk.mor_id(c, c, x, K.chart(c).group.id());

    if (with_mor_space) {
        // Morphisms are ordered by their carriers within a (ci, cj, gamma) block.
        std::vector<std::string> names;
        names.reserve(M.num_mors());
        for (auto& mor : M.mors)
            names.push_back("m" + std::to_string(&mor - M.mors.data()));
        std::vector<std::pair<int, int>> covers;
        for (int a = 0; a < M.num_mors(); ++a)
            for (int b = 0; b < M.num_mors(); ++b) {
                auto& ma = M.mors[a];
                auto& mb = M.mors[b];
                if (a == b || ma.iblk != mb.iblk || ma.jblk != mb.jblk || ma.label != mb.label)
                    continue;
                if (K.chart(ma.jblk).space.le(ma.carrier, mb.carrier)) covers.emplace_back(a, b);
            }
        M.mor_space = FiniteSpace::from_covers(std::move(names), covers);
    }
    return bk;
}

int BkCategory::mor_id(int ci, int cj, int carrier, int label) const {
    auto it = lookup_.find(mor_key(ci, cj, carrier, label));
    return it == lookup_.end() ? -1 : it->second;
}

std::optional<int> BkCategory::compose(int a, int b) const {
    const auto& m1 = model_.mors[a];
    const auto& m2 = model_.mors[b];
    if (m1.dst != m2.src) return std::nullopt;
    // (I,J,y,gamma) ; (J,K,z,delta) = (I,K,z, rho^Gamma_IJ(delta) * gamma)
    const Chart& CI = atlas_->chart(m1.iblk);
    const Chart& CJ = atlas_->chart(m2.iblk);
    int delta_i = CJ.group.project(m2.label, CI.group);
    int label = CI.group.mul(delta_i, m1.label);
    int r = mor_id(m1.iblk, m2.jblk, m2.carrier, label);
    if (r < 0) throw std::logic_error("B_K composite missing from morphism set");
    return r;
}

CatOps BkCategory::ops() const {
    CatOps o;
    o.model = &model_;
    o.compose = [this](int a, int b) { return compose(a, b); };
    return o;
}

void check_realization_is_base(const GroupoidModel& m, const Atlas& K, Report& rep,
                               const std::string& tag) {
    auto real = realize(m);
    bool ok = real.space.size() == K.base.size();
    std::string wit = ok ? "" : "realization has " + std::to_string(real.space.size()) +
                                    " points, base has " + std::to_string(K.base.size());
    std::vector<int> bij(real.space.size(), -1);
    for (int c = 0; c < K.num_charts() && ok; ++c) {
        const Chart& ch = K.chart(c);
        for (int x = 0; x < ch.space.size(); ++x) {
            int cls = real.cls_of[m.object(c, x)];
            int y = ch.footprint_map(x);
            if (bij[cls] < 0) bij[cls] = y;
            else if (bij[cls] != y) {
                ok = false;
                wit = "|psi| not well defined at class of " + m.obj_name(m.object(c, x));
                break;
            }
        }
    }
    if (ok && !is_space_iso_map(real.space, K.base, bij)) {
        ok = false;
        wit = "|psi| is not a space isomorphism";
    }
    rep.require(ok, tag + " realization is Y", wit);
}

Report BkCategory::verify() const {
    Report rep;
    verify_category_laws(ops(), rep, "B_K");
    check_realization_is_base(model_, *atlas_, rep, "B_K");
    return rep;
}

} // namespace orb
