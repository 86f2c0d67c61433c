#include "orbatlas/resolve.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>
#include <stdexcept>

namespace orb {

std::vector<int> Reduction::vtilde(const Atlas& K, int sub_chart, int sup_chart) const {
    std::set<int> qi(Q[sub_chart].begin(), Q[sub_chart].end());
    std::vector<int> out;
    for (int y : V[sup_chart])
        if (qi.count(K.chart(sup_chart).footprint_map(y))) out.push_back(y);
    return out;
}

Reduction make_reduction(const Atlas& K, std::vector<std::vector<int>> Q) {
    Reduction red;
    red.Q = std::move(Q);
    red.V.resize(K.num_charts());
    for (int c = 0; c < K.num_charts(); ++c) {
        std::set<int> q(red.Q[c].begin(), red.Q[c].end());
        for (int x = 0; x < K.chart(c).space.size(); ++x)
            if (q.count(K.chart(c).footprint_map(x))) red.V[c].push_back(x);
    }
    return red;
}

Report validate_reduction(const Atlas& K, const Reduction& red) {
    Report rep;
    if (static_cast<int>(red.Q.size()) != K.num_charts()) {
        rep.fail("reduction well-formed", "Q list size mismatch");
        return rep;
    }
    std::vector<bool> covered(K.base.size(), false);
    for (int c = 0; c < K.num_charts(); ++c) {
        const auto& Q = red.Q[c];
        std::string tag = "Q" + iset_str(K.chart(c).index);
        rep.require(K.base.is_open(Q), tag + " open", "not an up-set");
        auto cl = K.base.closure(Q);
        std::set<int> fp(K.chart(c).footprint.begin(), K.chart(c).footprint.end());
        bool inside = true;
        std::string wit;
        for (int p : cl)
            if (!fp.count(p)) {
                inside = false;
                wit = "closure contains " + K.base.name(p);
                break;
            }
        rep.require(inside, tag + " precompact in F", wit);
        for (int p : Q) covered[p] = true;
    }
    {
        bool all = true;
        std::string wit;
        for (int p = 0; p < K.base.size(); ++p)
            if (!covered[p]) { all = false; wit = K.base.name(p); break; }
        rep.require(all, "reduction covers Y", "uncovered: " + wit);
    }
    for (int a = 0; a < K.num_charts(); ++a)
        for (int b = a + 1; b < K.num_charts(); ++b) {
            const IndexSet& I = K.chart(a).index;
            const IndexSet& J = K.chart(b).index;
            if (iset_subset(I, J) || iset_subset(J, I)) continue;
            auto ca = K.base.closure(red.Q[a]);
            auto cb = K.base.closure(red.Q[b]);
            std::set<int> sa(ca.begin(), ca.end());
            bool disjoint = true;
            std::string wit;
            for (int p : cb)
                if (sa.count(p)) {
                    disjoint = false;
                    wit = "meet at " + K.base.name(p);
                    break;
                }
            rep.require(disjoint, "nesting " + iset_str(I) + " vs " + iset_str(J), wit);
        }
    return rep;
}

namespace {

// Admissible points for Q_I given the already chosen sets: closure stays in
// F_I and avoids the closures of incomparable choices.
std::vector<int> admissible_core(const Atlas& K, int c,
                                 const std::vector<std::vector<int>>& chosen,
                                 const std::vector<bool>& done) {
    std::set<int> fp(K.chart(c).footprint.begin(), K.chart(c).footprint.end());
    std::vector<std::set<int>> bad;
    for (int d = 0; d < K.num_charts(); ++d) {
        if (!done[d] || chosen[d].empty()) continue;
        const IndexSet& I = K.chart(c).index;
        const IndexSet& J = K.chart(d).index;
        if (iset_subset(I, J) || iset_subset(J, I)) continue;
        auto cl = K.base.closure(chosen[d]);
        bad.emplace_back(cl.begin(), cl.end());
    }
    std::vector<int> B;
    for (int p : K.chart(c).footprint) {
        auto cl = K.base.closure({p});
        bool ok = true;
        for (int q : cl)
            if (!fp.count(q)) { ok = false; break; }
        for (auto& s : bad) {
            if (!ok) break;
            for (int q : cl)
                if (s.count(q)) { ok = false; break; }
        }
        if (ok) B.push_back(p);
    }
    return K.base.open_core(B);
}

std::vector<int> shrink_once(const FiniteSpace& Y, const std::vector<int>& S) {
    std::set<int> in(S.begin(), S.end());
    std::vector<int> kept;
    for (int p : S) {
        bool ok = true;
        for (int q : Y.closure({p}))
            if (!in.count(q)) { ok = false; break; }
        if (ok) kept.push_back(p);
    }
    return Y.open_core(kept);
}

struct SearchState {
    const Atlas* K;
    std::vector<int> order;                 // chart ids, |I| desc then lex
    std::vector<std::vector<int>> chosen;
    std::vector<bool> done;
    long long nodes{0};
    long long max_nodes;
    unsigned seed;
    std::string blocked_point;              // diagnostics for failures
};

bool point_still_coverable(SearchState& st, int p) {
    const Atlas& K = *st.K;
    for (int c = 0; c < K.num_charts(); ++c) {
        if (st.done[c]) continue;
        auto core = admissible_core(K, c, st.chosen, st.done);
        if (std::binary_search(core.begin(), core.end(), p)) return true;
    }
    return false;
}

bool feasible(SearchState& st) {
    const Atlas& K = *st.K;
    std::vector<bool> covered(K.base.size(), false);
    for (int c = 0; c < K.num_charts(); ++c)
        if (st.done[c])
            for (int p : st.chosen[c]) covered[p] = true;
    for (int p = 0; p < K.base.size(); ++p) {
        if (covered[p]) continue;
        if (!point_still_coverable(st, p)) {
            st.blocked_point = K.base.name(p);
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> candidates_for(SearchState& st, int c) {
    const Atlas& K = *st.K;
    auto core = admissible_core(K, c, st.chosen, st.done);
    std::vector<std::vector<int>> cands;
    std::set<std::vector<int>> seen;
    // Shrink chain first: the nested interiors tend to respect the margins
    // the nesting condition needs.
    auto cur = core;
    while (!cur.empty()) {
        if (seen.insert(cur).second) cands.push_back(cur);
        auto next = shrink_once(K.base, cur);
        if (next == cur) break;
        cur = next;
    }
    // General up-sets of the core, largest first (bounded enumeration).
    int n = static_cast<int>(core.size());
    if (n > 0 && n <= 18) {
        std::vector<std::vector<int>> ups(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                if (K.base.le(core[i], core[j])) ups[i].push_back(j);
        }
        std::vector<std::vector<int>> all;
        for (int mask = (1 << n) - 1; mask > 0; --mask) {
            bool up = true;
            for (int i = 0; i < n && up; ++i) {
                if (!(mask & (1 << i))) continue;
                for (int j : ups[i])
                    if (!(mask & (1 << j))) { up = false; break; }
            }
            if (!up) continue;
            std::vector<int> s;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) s.push_back(core[i]);
            if (seen.insert(s).second) all.push_back(std::move(s));
        }
        std::stable_sort(all.begin(), all.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
        if (st.seed != 0) {
            std::mt19937 rng(st.seed);
            // shuffle within equal-size runs, keeping determinism per seed
            size_t i = 0;
            while (i < all.size()) {
                size_t j = i;
                while (j < all.size() && all[j].size() == all[i].size()) ++j;
                std::shuffle(all.begin() + i, all.begin() + j, rng);
                i = j;
            }
        }
        for (auto& s : all) cands.push_back(std::move(s));
    }
    cands.push_back({}); // empty Q_I is always admissible
    return cands;
}

bool search(SearchState& st, size_t k) {
    const Atlas& K = *st.K;
    if (k == st.order.size()) {
        std::vector<bool> covered(K.base.size(), false);
        for (int c = 0; c < K.num_charts(); ++c)
            for (int p : st.chosen[c]) covered[p] = true;
        for (int p = 0; p < K.base.size(); ++p)
            if (!covered[p]) return false;
        return true;
    }
    int c = st.order[k];
    for (auto& cand : candidates_for(st, c)) {
        if (++st.nodes > st.max_nodes)
            throw std::runtime_error("NoReductionFound: search budget exhausted (" +
                                     std::to_string(st.max_nodes) + " nodes)");
        st.chosen[c] = cand;
        st.done[c] = true;
        if (feasible(st) && search(st, k + 1)) return true;
        st.done[c] = false;
        st.chosen[c].clear();
    }
    return false;
}

} // namespace

Reduction cover_reduction(const Atlas& K, const ReductionSearchOptions& opts) {
    SearchState st;
    st.K = &K;
    st.max_nodes = opts.max_nodes;
    st.seed = opts.seed;
    if (const char* env = std::getenv("ORBATLAS_MAX_SEARCH")) {
        long long v = std::atoll(env);
        if (v > 0) st.max_nodes = v;
    }
    st.chosen.assign(K.num_charts(), {});
    st.done.assign(K.num_charts(), false);
    for (int c = 0; c < K.num_charts(); ++c) st.order.push_back(c);
    std::sort(st.order.begin(), st.order.end(), [&](int a, int b) {
        const IndexSet& A = K.chart(a).index;
        const IndexSet& B = K.chart(b).index;
        return A.size() != B.size() ? A.size() > B.size() : A < B;
    });
    if (!search(st, 0))
        throw std::runtime_error("NoReductionFound: model too coarse" +
                                 (st.blocked_point.empty()
                                      ? std::string()
                                      : " (first uncoverable point: " + st.blocked_point + ")"));
    return make_reduction(K, std::move(st.chosen));
}

// ---------------------------------------------------------------------------
// Resolution groupoids.

void ResolutionGroupoid::index_mors() {
    vmor_of_gk_.clear();
    for (int m = 0; m < model_.num_mors(); ++m) vmor_of_gk_[gk_mor_of_[m]] = m;
    vobj_of_gk_.clear();
    for (int o = 0; o < model_.num_objects(); ++o) vobj_of_gk_[gk_obj_of_[o]] = o;
}

int ResolutionGroupoid::vmor_of_gk(int gkmor) const {
    auto it = vmor_of_gk_.find(gkmor);
    return it == vmor_of_gk_.end() ? -1 : it->second;
}

int ResolutionGroupoid::gk_object_of(int vobj) const { return gk_obj_of_[vobj]; }

std::optional<int> ResolutionGroupoid::vobj_of_gk(int gkobj) const {
    auto it = vobj_of_gk_.find(gkobj);
    return it == vobj_of_gk_.end() ? std::nullopt : std::optional<int>(it->second);
}

ResolutionGroupoid ResolutionGroupoid::build(const GkGroupoid& gk, const Reduction& red) {
    ResolutionGroupoid vk;
    vk.gk_ = &gk;
    vk.red_ = &red;
    const Atlas& K = gk.atlas();
    GroupoidModel& M = vk.model_;
    M.groupoid_flag = true;

    // Objects: V_I as subspaces of the chart domains.
    std::vector<FiniteSpace> vspaces;
    std::vector<std::vector<int>> vpts;
    for (int c = 0; c < K.num_charts(); ++c) {
        auto [sp, pts] = K.chart(c).space.subspace(red.V[c]);
        vspaces.push_back(std::move(sp));
        vpts.push_back(std::move(pts));
    }
    std::vector<const FiniteSpace*> ptrs;
    for (auto& sp : vspaces) ptrs.push_back(&sp);
    auto [uspace, offsets] = FiniteSpace::disjoint_union(ptrs);
    M.obj_space = std::move(uspace);
    for (int c = 0; c < K.num_charts(); ++c)
        M.blocks.push_back({K.chart(c).index, offsets[c], static_cast<int>(vpts[c].size())});
    for (int c = 0; c < K.num_charts(); ++c)
        for (int k = 0; k < static_cast<int>(vpts[c].size()); ++k)
            vk.gk_obj_of_.push_back(gk.model().object(c, vpts[c][k]));

    // Local index of a W-point inside V_I.
    auto local_of = [&](int c, int wpt) -> int {
        auto& v = red.V[c];
        auto it = std::lower_bound(v.begin(), v.end(), wpt);
        if (it == v.end() || *it != wpt) return -1;
        return static_cast<int>(it - v.begin());
    };

    // Forward morphisms per Eq-(Vv): for I c= J the union over nonempty
    // K c= I of (Vt_KJ n Vt_IJ) x Gamma_{I\K}.
    std::set<int> gk_ids;
    for (int ci = 0; ci < K.num_charts(); ++ci)
        for (int cj = 0; cj < K.num_charts(); ++cj) {
            const IndexSet& I = K.chart(ci).index;
            const IndexSet& J = K.chart(cj).index;
            if (!iset_subset(I, J)) continue;
            auto vt_ij = red.vtilde(K, ci, cj);
            std::set<int> vt_ij_set(vt_ij.begin(), vt_ij.end());
            int nsub = static_cast<int>(I.size());
            for (int mask = 1; mask < (1 << nsub); ++mask) {
                IndexSet Ks;
                for (int t = 0; t < nsub; ++t)
                    if (mask & (1 << t)) Ks.push_back(I[t]);
                if (!K.has_index(Ks)) continue;
                int ck = K.chart_id(Ks);
                const ProductGroup& GIK = K.group_of(iset_minus(I, Ks));
                const ProductGroup& GI = K.group_of(I);
                auto vt_kj = red.vtilde(K, ck, cj);
                for (int y : vt_kj) {
                    if (!vt_ij_set.count(y)) continue;
                    for (int g = 0; g < GIK.order(); ++g) {
                        int gi = GIK.embed(g, GI);
                        int gkm = gk.mor_id(ci, cj, y, gi);
                        if (gkm < 0) throw std::logic_error("resolution references missing G_K morphism");
                        gk_ids.insert(gkm);
                    }
                }
            }
        }
    // Formal inverses for the strict containments.
    {
        std::vector<int> fwd(gk_ids.begin(), gk_ids.end());
        for (int gkm : fwd) {
            const auto& mor = gk.model().mors[gkm];
            if (mor.iblk != mor.jblk) gk_ids.insert(gk.invert(gkm));
        }
    }

    for (int gkm : gk_ids) {
        const auto& gmor = gk.model().mors[gkm];
        auto [bi, xi] = gk.model().tag_of(gmor.src);
        auto [bj, xj] = gk.model().tag_of(gmor.dst);
        int li = local_of(bi, xi);
        int lj = local_of(bj, xj);
        if (li < 0 || lj < 0)
            throw std::logic_error("resolution morphism endpoint outside V");
        GroupoidModel::Mor vm;
        vm.iblk = gmor.iblk;
        vm.jblk = gmor.jblk;
        vm.carrier = gmor.carrier;
        vm.label = gmor.label;
        vm.src = M.object(bi, li);
        vm.dst = M.object(bj, lj);
        vk.gk_mor_of_.push_back(gkm);
        M.mors.push_back(vm);
    }

    M.identity_of.assign(M.num_objects(), -1);
    for (int o = 0; o < M.num_objects(); ++o) {
        int gko = vk.gk_obj_of_[o];
        int gkid = gk.model().identity_of[gko];
        auto it = std::find(vk.gk_mor_of_.begin(), vk.gk_mor_of_.end(), gkid);
        if (it == vk.gk_mor_of_.end())
            throw std::logic_error("identity morphism missing in resolution");
        M.identity_of[o] = static_cast<int>(it - vk.gk_mor_of_.begin());
    }

    vk.index_mors();
    return vk;
}

ResolutionGroupoid ResolutionGroupoid::hausdorff_close() const {
    const Atlas& K = atlas();
    const Reduction& red = *red_;
    ResolutionGroupoid vh = *this;
    vh.closed_ = true;

    std::set<int> gk_ids(gk_mor_of_.begin(), gk_mor_of_.end());
    std::set<int> added;
    // Frontier morphisms: (Vt_IJ n Fr_{V_J}(Vt_FJ)) x Gamma_{I\F}, F proper
    // nonempty in I; frontiers are taken inside V_J.
    for (int ci = 0; ci < K.num_charts(); ++ci)
        for (int cj = 0; cj < K.num_charts(); ++cj) {
            const IndexSet& I = K.chart(ci).index;
            const IndexSet& J = K.chart(cj).index;
            if (!iset_subset(I, J)) continue;
            auto vt_ij = red.vtilde(K, ci, cj);
            std::set<int> vt_ij_set(vt_ij.begin(), vt_ij.end());
            auto [vj_space, vj_pts] = K.chart(cj).space.subspace(red.V[cj]);
            auto local = [&](int wpt) {
                return static_cast<int>(std::lower_bound(vj_pts.begin(), vj_pts.end(), wpt) -
                                        vj_pts.begin());
            };
            int nsub = static_cast<int>(I.size());
            for (int mask = 1; mask + 1 < (1 << nsub); ++mask) { // proper nonempty F
                IndexSet F;
                for (int t = 0; t < nsub; ++t)
                    if (mask & (1 << t)) F.push_back(I[t]);
                if (!K.has_index(F)) continue;
                int cf = K.chart_id(F);
                auto vt_fj = red.vtilde(K, cf, cj);
                std::vector<int> vt_fj_local;
                for (int y : vt_fj) vt_fj_local.push_back(local(y));
                auto fr_local = vj_space.frontier(vt_fj_local);
                const ProductGroup& GIF = K.group_of(iset_minus(I, F));
                const ProductGroup& GI = K.group_of(I);
                for (int fl : fr_local) {
                    int y = vj_pts[fl];
                    if (!vt_ij_set.count(y)) continue;
                    for (int g = 0; g < GIF.order(); ++g) {
                        int gkm = gk_->mor_id(ci, cj, y, GIF.embed(g, GI));
                        if (gkm < 0) throw std::logic_error("frontier references missing morphism");
                        if (!gk_ids.count(gkm)) added.insert(gkm);
                    }
                }
            }
        }
    {
        std::vector<int> fwd(added.begin(), added.end());
        for (int gkm : fwd) {
            int inv = gk_->invert(gkm);
            if (!gk_ids.count(inv)) added.insert(inv);
        }
    }

    for (int gkm : added) {
        const auto& gmor = gk_->model().mors[gkm];
        auto src = vobj_of_gk(gmor.src);
        auto dst = vobj_of_gk(gmor.dst);
        if (!src || !dst) throw std::logic_error("frontier morphism endpoint outside V");
        GroupoidModel::Mor vm;
        vm.iblk = gmor.iblk;
        vm.jblk = gmor.jblk;
        vm.carrier = gmor.carrier;
        vm.label = gmor.label;
        vm.src = *src;
        vm.dst = *dst;
        vh.gk_mor_of_.push_back(gkm);
        vh.model_.mors.push_back(vm);
    }
    vh.index_mors();
    return vh;
}

std::optional<int> ResolutionGroupoid::compose(int a, int b) const {
    if (model_.mors[a].dst != model_.mors[b].src) return std::nullopt;
    auto g = gk_->compose(gk_mor_of_[a], gk_mor_of_[b]);
    if (!g) return std::nullopt;
    int v = vmor_of_gk(*g);
    if (v < 0) return std::nullopt; // not closed under composition
    return v;
}

int ResolutionGroupoid::invert(int m) const {
    int v = vmor_of_gk(gk_->invert(gk_mor_of_[m]));
    if (v < 0) throw std::logic_error("resolution not closed under inverse");
    return v;
}

CatOps ResolutionGroupoid::ops() const {
    CatOps o;
    o.model = &model_;
    o.compose = [this](int a, int b) { return compose(a, b); };
    o.invert = [this](int m) { return invert(m); };
    return o;
}

Report ResolutionGroupoid::verify_structure() const {
    Report rep;
    std::string tag = closed_ ? "V^H" : "V_K";

    // Closure under composition, checked against G_K.
    {
        auto out = model_.out_adj();
        bool ok = true;
        std::string wit;
        for (int a = 0; a < model_.num_mors() && ok; ++a)
            for (int b : out[model_.mors[a].dst]) {
                auto g = gk_->compose(gk_mor_of_[a], gk_mor_of_[b]);
                if (!g || vmor_of_gk(*g) < 0) {
                    ok = false;
                    wit = "composite of " + std::to_string(a) + "," + std::to_string(b) +
                          " leaves the morphism set";
                    break;
                }
            }
        rep.require(ok, tag + " closed under composition", wit);
    }
    // Closure under inverse.
    {
        bool ok = true;
        std::string wit;
        for (int m = 0; m < model_.num_mors(); ++m)
            if (vmor_of_gk(gk_->invert(gk_mor_of_[m])) < 0) {
                ok = false;
                wit = "morphism " + std::to_string(m);
                break;
            }
        rep.require(ok, tag + " closed under inverse", wit);
    }
    // Nonsingularity.
    {
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        std::string wit;
        for (auto& mor : model_.mors)
            if (!seen.insert({mor.src, mor.dst}).second) {
                ok = false;
                wit = model_.obj_name(mor.src) + " -> " + model_.obj_name(mor.dst);
                break;
            }
        rep.require(ok, tag + " nonsingular", wit);
    }
    if (rep.ok()) verify_category_laws(ops(), rep, tag);
    return rep;
}

Report ResolutionGroupoid::check_frontier_formula(const ResolutionGroupoid& open_version) const {
    Report rep;
    const Atlas& K = atlas();
    if (!closed_) {
        rep.fail("frontier two-route", "must be called on the closed resolution");
        return rep;
    }
    // Route A: carriers of V^H per block (ci, cj, label), forward direction.
    // Route B: topological closure of the open carriers inside the carrier
    // space of the G_V block (endpoints restricted to V-objects).
    std::map<std::tuple<int, int, int>, std::set<int>> closed_carriers, open_carriers;
    for (int m = 0; m < model_.num_mors(); ++m) {
        const auto& mor = model_.mors[m];
        if (!iset_subset(K.chart(mor.iblk).index, K.chart(mor.jblk).index)) continue;
        closed_carriers[{mor.iblk, mor.jblk, mor.label}].insert(mor.carrier);
    }
    for (int m = 0; m < open_version.model().num_mors(); ++m) {
        const auto& mor = open_version.model().mors[m];
        if (!iset_subset(K.chart(mor.iblk).index, K.chart(mor.jblk).index)) continue;
        open_carriers[{mor.iblk, mor.jblk, mor.label}].insert(mor.carrier);
    }
    bool ok = true;
    std::string wit;
    std::set<std::tuple<int, int, int>> keys;
    for (auto& [k, v] : closed_carriers) keys.insert(k);
    for (auto& [k, v] : open_carriers) keys.insert(k);
    for (auto& key : keys) {
        auto [ci, cj, label] = key;
        const auto& openset = open_carriers[key];
        std::vector<int> carriers(openset.begin(), openset.end());
        // Closure in the carrier chart W_{IuJ} = W_J, then intersect with the
        // endpoint condition (both endpoints in V).
        auto cl = K.chart(cj).space.closure(carriers);
        std::set<int> routeB;
        for (int z : cl) {
            int gkm = gk_->mor_id(ci, cj, z, label);
            if (gkm < 0) continue;
            const auto& gmor = gk_->model().mors[gkm];
            if (vobj_of_gk(gmor.src) && vobj_of_gk(gmor.dst)) routeB.insert(z);
        }
        if (routeB != closed_carriers[key]) {
            ok = false;
            wit = "block " + iset_str(K.chart(ci).index) + "->" + iset_str(K.chart(cj).index) +
                  " label " + std::to_string(label);
            break;
        }
    }
    rep.require(ok, "V^H frontier closure equals topological closure", wit);
    return rep;
}

// ---------------------------------------------------------------------------
// Weighting.

std::pair<Weighting, Report> compute_weighting(const ResolutionGroupoid& vh,
                                               const ResolutionGroupoid& vk) {
    Report rep;
    const Atlas& K = vh.atlas();
    Weighting w;
    w.real = realize(vh.model());
    int npts = w.real.space.size();
    w.value.assign(npts, Rat(0));
    w.branches.assign(npts, {});
    w.base_point.assign(npts, -1);

    // psi-image per realization point.
    for (int o = 0; o < vh.model().num_objects(); ++o) {
        auto [c, l] = vh.model().tag_of(o);
        int wpt = vh.reduction().V[c][l];
        int y = K.chart(c).footprint_map(wpt);
        int p = w.real.cls_of[o];
        if (w.base_point[p] < 0) w.base_point[p] = y;
        else if (w.base_point[p] != y)
            rep.fail("psi constant on realization classes", w.real.space.name(p));
    }

    // Fibers per (realization point, chart).
    std::vector<std::map<int, std::vector<int>>> fiber(npts); // chart -> local objs
    for (int o = 0; o < vh.model().num_objects(); ++o) {
        auto [c, l] = vh.model().tag_of(o);
        fiber[w.real.cls_of[o]][c].push_back(l);
    }

    // pi^H(V_I) as realization point sets, and their closures.
    std::vector<std::vector<int>> image(K.num_charts());
    std::vector<std::set<int>> image_closure(K.num_charts());
    for (int c = 0; c < K.num_charts(); ++c) {
        std::set<int> img;
        for (int l = 0; l < static_cast<int>(vh.reduction().V[c].size()); ++l)
            img.insert(w.real.cls_of[vh.model().object(c, l)]);
        image[c].assign(img.begin(), img.end());
        auto cl = w.real.space.closure(image[c]);
        image_closure[c] = std::set<int>(cl.begin(), cl.end());
    }

    bool value_ok = true, orbit_ok = true, min_ok = true;
    std::string value_wit, orbit_wit, min_wit;
    for (int p = 0; p < npts; ++p) {
        bool first = true;
        for (auto& [c, locs] : fiber[p]) {
            Rat v(static_cast<std::int64_t>(locs.size()), K.chart(c).group.order());
            if (first) {
                w.value[p] = v;
                first = false;
            } else if (v != w.value[p] && value_ok) {
                value_ok = false;
                value_wit = w.real.space.name(p) + ": " + v.str() + " vs " + w.value[p].str();
            }
            // I_y = min{I c= J : p in closure(pi^H(V_I))}; fiber must be a
            // free Gamma_{J \ I_y} orbit.
            std::vector<int> chain;
            for (int d = 0; d < K.num_charts(); ++d)
                if (iset_subset(K.chart(d).index, K.chart(c).index) && image_closure[d].count(p))
                    chain.push_back(d);
            int best = -1;
            for (int d : chain) {
                bool minimal = true;
                for (int e : chain)
                    if (e != d && !iset_subset(K.chart(d).index, K.chart(e).index)) minimal = false;
                if (minimal) { best = d; break; }
            }
            if (best < 0) {
                if (min_ok) {
                    min_ok = false;
                    min_wit = "no unique minimal chart at " + w.real.space.name(p);
                }
                continue;
            }
            IndexSet JmI = iset_minus(K.chart(c).index, K.chart(best).index);
            const ProductGroup& G = K.group_of(JmI);
            const ProductGroup& GJ = K.chart(c).group;
            if (static_cast<int>(locs.size()) != G.order()) {
                if (orbit_ok) {
                    orbit_ok = false;
                    orbit_wit = w.real.space.name(p) + ": fiber size " +
                                std::to_string(locs.size()) + " != |Gamma_" + iset_str(JmI) + "|";
                }
                continue;
            }
            // single free orbit through any member
            std::set<int> wpts;
            for (int l : locs) wpts.insert(vh.reduction().V[c][l]);
            int x0 = *wpts.begin();
            std::set<int> orb;
            for (int g = 0; g < G.order(); ++g)
                orb.insert(K.chart(c).action.act[G.embed(g, GJ)][x0]);
            if (orb != wpts && orbit_ok) {
                orbit_ok = false;
                orbit_wit = w.real.space.name(p) + ": fiber is not the Gamma_" + iset_str(JmI) +
                            " orbit";
            }
        }
    }
    rep.require(value_ok, "Lambda_V well defined across charts", value_wit);
    rep.require(min_ok, "minimal chart I_y unique", min_wit);
    rep.require(orbit_ok, "fibers are free Gamma_{J\\I_y} orbits", orbit_wit);

    // Branch locus: realization points of V^H with several |V| preimages.
    {
        auto vreal = realize(vk.model());
        std::vector<std::set<int>> pre(npts);
        for (int o = 0; o < vk.model().num_objects(); ++o)
            pre[w.real.cls_of[o]].insert(vreal.cls_of[o]); // object layouts match
        for (int p = 0; p < npts; ++p)
            if (pre[p].size() > 1) w.branch_locus.push_back(p);
    }

    // Branch data at each point: pieces of the maximal chart covering it.
    for (int p = 0; p < npts; ++p) {
        int best = -1;
        for (auto& [c, locs] : fiber[p])
            if (best < 0 || iset_subset(K.chart(best).index, K.chart(c).index)) best = c;
        if (best < 0) continue;
        Rat weight(1, K.chart(best).group.order());
        auto& locs = fiber[p].at(best);
        for (size_t i = 0; i < locs.size(); ++i) w.branches[p].push_back({best, weight});
    }

    return {std::move(w), std::move(rep)};
}

Report wnb_check(const ResolutionGroupoid& vk, const ResolutionGroupoid& vh, const Weighting& w) {
    Report rep;
    const Atlas& K = vh.atlas();
    const auto& real = w.real;
    auto vreal = realize(vk.model());

    // |V| class -> |V^H| point, and per-object realization data.
    int nObj = vh.model().num_objects();
    std::vector<int> h_of_obj(nObj), v_of_obj(nObj);
    for (int o = 0; o < nObj; ++o) {
        h_of_obj[o] = real.cls_of[o];
        v_of_obj[o] = vreal.cls_of[o];
    }

    bool all_ok = true;
    std::string wit;
    for (int p = 0; p < real.space.size() && all_ok; ++p) {
        auto N = real.space.min_open_nbhd(p);
        std::set<int> Nset(N.begin(), N.end());
        // Objects over N, grouped by chart.
        std::map<int, std::vector<int>> over; // chart -> local points
        for (int o = 0; o < nObj; ++o)
            if (Nset.count(h_of_obj[o])) {
                auto [c, l] = vh.model().tag_of(o);
                over[c].push_back(l);
            }
        // Charts whose image contains p form a chain; try branch families from
        // the top of the chain downward.
        std::vector<int> chain;
        for (auto& [c, locs] : over) {
            bool contains_p = false;
            for (int l : locs)
                if (h_of_obj[vh.model().object(c, l)] == p) contains_p = true;
            if (contains_p) chain.push_back(c);
        }
        std::sort(chain.begin(), chain.end(), [&](int a, int b) {
            return K.chart(a).index.size() > K.chart(b).index.size();
        });
        if (chain.empty()) {
            all_ok = false;
            wit = "no chart covers " + real.space.name(p);
            break;
        }

        bool point_ok = false;
        std::string point_wit;
        for (int cstar : chain) {
            // Branches: order components of V_{cstar} over N.
            auto [vs_space, vs_pts] = K.chart(cstar).space.subspace(vh.reduction().V[cstar]);
            auto comps = vs_space.components(over[cstar]);
            std::vector<std::vector<int>> branches; // object lists
            for (auto& comp : comps) {
                std::vector<int> objs;
                for (int l : comp) objs.push_back(vh.model().object(cstar, l));
                branches.push_back(std::move(objs));
            }
            Rat weight(1, K.chart(cstar).group.order());

            // (Covering) every |V| class over N is the image of some branch.
            std::set<int> vneeded, vgot;
            for (int o = 0; o < nObj; ++o)
                if (Nset.count(h_of_obj[o])) vneeded.insert(v_of_obj[o]);
            for (auto& br : branches)
                for (int o : br) vgot.insert(v_of_obj[o]);
            bool covering = vneeded == vgot;

            // (Local Regularity) injective, order-embedding, relatively
            // closed image in N.
            bool regular = true;
            for (auto& br : branches) {
                std::set<int> img;
                for (int o : br) img.insert(h_of_obj[o]);
                if (img.size() != br.size()) { regular = false; break; }
                for (int a : br)
                    for (int b : br) {
                        bool oa = vh.model().obj_space.le(a, b);
                        bool ob = real.space.le(h_of_obj[a], h_of_obj[b]);
                        if (oa != ob) { regular = false; break; }
                    }
                if (!regular) break;
                std::vector<int> imgv(img.begin(), img.end());
                auto cl = real.space.closure(imgv);
                for (int q : cl)
                    if (Nset.count(q) && !img.count(q)) { regular = false; break; }
                if (!regular) break;
            }

            // (Weighting) Lambda(q) is the weight-sum of branches through q.
            bool weighting = true;
            for (int q : N) {
                Rat sum(0);
                for (auto& br : branches) {
                    bool through = false;
                    for (int o : br)
                        if (h_of_obj[o] == q) through = true;
                    if (through) sum += weight;
                }
                if (sum != w.value[q]) {
                    weighting = false;
                    point_wit = "Lambda(" + real.space.name(q) + ")=" + w.value[q].str() +
                                " but branch sum " + sum.str();
                    break;
                }
            }

            if (covering && regular && weighting) {
                point_ok = true;
                break;
            }
            if (point_wit.empty())
                point_wit = covering ? (regular ? "weighting" : "local regularity") : "covering";
        }
        if (!point_ok) {
            all_ok = false;
            wit = "at " + real.space.name(p) + ": " + point_wit;
        }
    }
    rep.require(all_ok, "wnb axioms (Covering/Local Regularity/Weighting)", wit);
    return rep;
}

} // namespace orb
