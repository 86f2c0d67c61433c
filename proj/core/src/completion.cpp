#include "orbatlas/completion.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

namespace orb {

GkGroupoid GkGroupoid::build(const Atlas& K, bool with_mor_space) {
    GkGroupoid gk;
    gk.atlas_ = &K;
    GroupoidModel& M = gk.model_;
    M.groupoid_flag = true;

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
            IndexSet U = iset_union(CI.index, CJ.index);
            if (!K.has_index(U)) continue; // F_I n F_J empty
            int cu = K.chart_id(U);
            const Chart& CU = K.chart(cu);
            const ProductGroup& GM = K.group_of(iset_intersect(CI.index, CJ.index));
            for (int z = 0; z < CU.space.size(); ++z)
                for (int g = 0; g < GM.order(); ++g) {
                    GroupoidModel::Mor mor;
                    mor.iblk = ci;
                    mor.jblk = cj;
                    mor.carrier = z;
                    mor.label = g;
                    int gi = GM.embed(GM.inv(g), CI.group);
                    mor.src = M.object(ci, CI.action.act[gi][K.rho(ci, cu, z)]);
                    mor.dst = M.object(cj, K.rho(cj, cu, z));
                    gk.lookup_[mor_key(ci, cj, z, g)] = M.num_mors();
                    M.mors.push_back(mor);
                }
        }

    M.identity_of.assign(M.num_objects(), -1);
    for (int c = 0; c < K.num_charts(); ++c)
        for (int x = 0; x < K.chart(c).space.size(); ++x)
            M.identity_of[M.object(c, x)] = gk.mor_id(c, c, x, K.chart(c).group.id());

    if (with_mor_space) {
        std::vector<std::string> names;
        for (int m = 0; m < M.num_mors(); ++m) names.push_back("m" + std::to_string(m));
        std::vector<std::pair<int, int>> covers;
        for (int a = 0; a < M.num_mors(); ++a)
            for (int b = 0; b < M.num_mors(); ++b) {
                auto& ma = M.mors[a];
                auto& mb = M.mors[b];
                if (a == b || ma.iblk != mb.iblk || ma.jblk != mb.jblk || ma.label != mb.label)
                    continue;
                IndexSet U = iset_union(K.chart(ma.iblk).index, K.chart(ma.jblk).index);
                if (K.chart(K.chart_id(U)).space.le(ma.carrier, mb.carrier))
                    covers.emplace_back(a, b);
            }
        M.mor_space = FiniteSpace::from_covers(std::move(names), covers);
    }
    return gk;
}

int GkGroupoid::mor_id(int ci, int cj, int carrier, int label) const {
    auto it = lookup_.find(mor_key(ci, cj, carrier, label));
    return it == lookup_.end() ? -1 : it->second;
}

const std::vector<std::vector<int>>& GkGroupoid::preimages(int sub_chart, int sup_chart) const {
    auto key = std::make_pair(sub_chart, sup_chart);
    auto it = preimage_cache_.find(key);
    if (it == preimage_cache_.end()) {
        std::vector<std::vector<int>> pre(atlas_->chart(sub_chart).space.size());
        for (int z = 0; z < atlas_->chart(sup_chart).space.size(); ++z)
            pre[atlas_->rho(sub_chart, sup_chart, z)].push_back(z);
        it = preimage_cache_.emplace(key, std::move(pre)).first;
    }
    return it->second;
}

GkGroupoid::ComposeResult GkGroupoid::compose_detail(int a, int b) const {
    ComposeResult res;
    const Atlas& K = *atlas_;
    const auto& m1 = model_.mors[a];
    const auto& m2 = model_.mors[b];
    if (m1.dst != m2.src || m1.jblk != m2.iblk) return res;

    const IndexSet& I = K.chart(m1.iblk).index;
    const IndexSet& J = K.chart(m1.jblk).index;
    const IndexSet& Kk = K.chart(m2.jblk).index;
    IndexSet U1 = iset_union(I, J), U2 = iset_union(J, Kk), U = iset_union(U1, Kk);
    int cu1 = K.chart_id(U1), cu2 = K.chart_id(U2), cu = K.chart_id(U);
    int cik = K.chart_id(iset_union(I, Kk));

    const ProductGroup& GIJ = K.group_of(iset_intersect(I, J));
    const ProductGroup& GJK = K.group_of(iset_intersect(J, Kk));
    const ProductGroup& GIJK = K.group_of(iset_intersect(iset_intersect(I, J), Kk));
    const ProductGroup& GIK = K.group_of(iset_intersect(I, Kk));
    const ProductGroup& GA = K.group_of(iset_minus(iset_intersect(I, Kk), J));
    const ProductGroup& GU1 = K.chart(cu1).group;
    const ProductGroup& GU2 = K.chart(cu2).group;

    int gamma = m1.label, delta = m2.label;
    int gamma_rest = GIJ.split(gamma, Kk).second; // gamma_{IJ\K}
    int gamma_ijk = GIJ.project(gamma, GIJK);
    int delta_ijk = GJK.project(delta, GIJK);

    // Alpha-dependent targets t_alpha = gamma_{IJ\K}^{-1} alpha delta z in W_{IuJ}.
    int zd = K.chart(cu1).action.act[GJK.embed(delta, GU1)][m1.carrier];
    int grest_inv_u1 = GIJ.embed(GIJ.inv(gamma_rest), GU1);
    std::vector<int> target(GA.order());
    for (int al = 0; al < GA.order(); ++al) {
        int g = GU1.mul(grest_inv_u1, GA.embed(al, GU1));
        target[al] = K.chart(cu1).action.act[g][zd];
    }

    // b = gamma_{IJ\K}^{-1} w in W_{JuK}; candidates are its rho-fiber in W_U.
    int b_pt = K.chart(cu2).action.act[GIJ.embed(GIJ.inv(gamma_rest), GU2)][m2.carrier];
    const auto& cand = preimages(cu2, cu)[b_pt];

    int v_found = -1, alpha_found = -1;
    for (int v : cand) {
        int x = K.rho(cu1, cu, v);
        for (int al = 0; al < GA.order(); ++al)
            if (target[al] == x) {
                ++res.solutions;
                v_found = v;
                alpha_found = al;
            }
    }
    if (res.solutions != 1) return res;

    int v_prime = K.rho(cik, cu, v_found);
    int label = GIK.mul(GIK.mul(GA.embed(alpha_found, GIK), GIJK.embed(delta_ijk, GIK)),
                        GIJK.embed(gamma_ijk, GIK));
    res.mor = mor_id(m1.iblk, m2.jblk, v_prime, label);
    if (res.mor < 0) throw std::logic_error("G_K composite missing from morphism set");
    const auto& mr = model_.mors[res.mor];
    if (mr.src != m1.src || mr.dst != m2.dst)
        throw std::logic_error("G_K composite has wrong endpoints (invalid atlas?)");

    if (trace_) {
        *trace_ << "compose " << iset_str(I) << "->" << iset_str(J) << "->" << iset_str(Kk)
                << ": gamma_IJK=" << GIJK.elem_name(gamma_ijk)
                << " gamma_IJ\\K=" << GIJ.elem_name(gamma_rest)
                << " alpha=" << GA.elem_name(alpha_found)
                << " v=" << K.chart(cu).space.name(v_found) << "\n";
    }
    return res;
}

std::optional<int> GkGroupoid::compose(int a, int b) const {
    if (model_.mors[a].dst != model_.mors[b].src) return std::nullopt;
    auto r = compose_detail(a, b);
    if (r.solutions != 1)
        throw std::runtime_error("composition lift not unique: " + std::to_string(r.solutions) +
                                 " solutions (atlas violates the fiber-product property)");
    return r.mor;
}

int GkGroupoid::invert(int m) const {
    const Atlas& K = *atlas_;
    const auto& mor = model_.mors[m];
    const IndexSet& I = K.chart(mor.iblk).index;
    const IndexSet& J = K.chart(mor.jblk).index;
    int cu = K.chart_id(iset_union(I, J));
    const ProductGroup& GM = K.group_of(iset_intersect(I, J));
    int gi = GM.inv(mor.label);
    int z = K.chart(cu).action.act[GM.embed(gi, K.chart(cu).group)][mor.carrier];
    int r = mor_id(mor.jblk, mor.iblk, z, gi);
    if (r < 0) throw std::logic_error("G_K inverse missing from morphism set");
    return r;
}

CatOps GkGroupoid::ops() const {
    CatOps o;
    o.model = &model_;
    o.compose = [this](int a, int b) { return compose(a, b); };
    o.invert = [this](int m) { return invert(m); };
    return o;
}

Report GkGroupoid::verify() const {
    Report rep;
    const Atlas& K = *atlas_;
    const GroupoidModel& M = model_;

    verify_category_laws(ops(), rep, "G_K");

    // Solver uniqueness over every composable pair.
    {
        auto out = M.out_adj();
        bool ok = true;
        std::string wit;
        long long pairs = 0;
        for (int a = 0; a < M.num_mors() && ok; ++a)
            for (int b : out[M.mors[a].dst]) {
                ++pairs;
                auto r = compose_detail(a, b);
                if (r.solutions != 1) {
                    ok = false;
                    wit = "pair (" + std::to_string(a) + "," + std::to_string(b) + ") has " +
                          std::to_string(r.solutions) + " lifts";
                    break;
                }
            }
        rep.require(ok, "G_K lift uniqueness (" + std::to_string(pairs) + " pairs)", wit);
    }

    // Condition (*) and the fiber count |Mor(x,y)| = |Gamma_I^x|.
    {
        std::vector<std::vector<int>> count(M.num_objects(),
                                            std::vector<int>(M.num_objects(), 0));
        for (auto& mor : M.mors) ++count[mor.src][mor.dst];
        std::vector<int> psi(M.num_objects()), stab_order(M.num_objects());
        for (int c = 0; c < K.num_charts(); ++c) {
            const Chart& ch = K.chart(c);
            for (int x = 0; x < ch.space.size(); ++x) {
                psi[M.object(c, x)] = ch.footprint_map(x);
                stab_order[M.object(c, x)] =
                    static_cast<int>(stabilizer_elems(ch.action, ch.group.grp, x).size());
            }
        }
        bool star_ok = true, fiber_ok = true;
        std::string star_wit, fiber_wit;
        for (int x = 0; x < M.num_objects(); ++x)
            for (int y = 0; y < M.num_objects(); ++y) {
                bool expect = psi[x] == psi[y];
                if ((count[x][y] > 0) != expect && star_ok) {
                    star_ok = false;
                    star_wit = M.obj_name(x) + " -> " + M.obj_name(y);
                }
                if (expect && count[x][y] != stab_order[x] && fiber_ok) {
                    fiber_ok = false;
                    fiber_wit = M.obj_name(x) + " -> " + M.obj_name(y) + " has " +
                                std::to_string(count[x][y]) + " morphisms, stabilizer order " +
                                std::to_string(stab_order[x]);
                }
            }
        rep.require(star_ok, "G_K condition (*)", star_wit);
        rep.require(fiber_ok, "G_K morphism fibers match stabilizers", fiber_wit);
    }

    // Stabilizer isomorphism: loops at (I,x) are exactly Gamma_I^x, composing
    // by reversed multiplication.
    {
        bool ok = true;
        std::string wit;
        for (int c = 0; c < K.num_charts() && ok; ++c) {
            const Chart& ch = K.chart(c);
            for (int x = 0; x < ch.space.size() && ok; ++x) {
                auto stab = stabilizer_elems(ch.action, ch.group.grp, x);
                for (int g : stab) {
                    int m = mor_id(c, c, x, g);
                    if (m < 0 || M.mors[m].src != M.object(c, x) ||
                        M.mors[m].dst != M.object(c, x)) {
                        ok = false;
                        wit = "stabilizer element not a loop at " + M.obj_name(M.object(c, x));
                        break;
                    }
                }
                for (int g : stab) {
                    if (!ok) break;
                    for (int h : stab) {
                        auto comp = compose(mor_id(c, c, x, g), mor_id(c, c, x, h));
                        if (!comp || *comp != mor_id(c, c, x, ch.group.mul(h, g))) {
                            ok = false;
                            wit = "loop composition is not reversed multiplication at " +
                                  M.obj_name(M.object(c, x));
                            break;
                        }
                    }
                }
            }
        }
        rep.require(ok, "G_K stabilizer isomorphism", wit);
    }

    // Orientation: morphisms connect equally-signed points when present.
    {
        bool any = false;
        for (auto& ch : K.charts) any = any || ch.orientation.has_value();
        if (any) {
            bool all = true;
            for (auto& ch : K.charts) all = all && ch.orientation.has_value();
            if (!all) {
                rep.fail("G_K orientation", "only some charts oriented");
            } else {
                bool ok = true;
                std::string wit;
                for (auto& mor : M.mors) {
                    auto [bi, xi] = M.tag_of(mor.src);
                    auto [bj, xj] = M.tag_of(mor.dst);
                    if ((*K.chart(bi).orientation)[xi] != (*K.chart(bj).orientation)[xj]) {
                        ok = false;
                        wit = M.obj_name(mor.src) + " -> " + M.obj_name(mor.dst);
                        break;
                    }
                }
                rep.require(ok, "G_K orientation preserved", wit);
            }
        }
    }

    check_realization_is_base(M, K, rep, "G_K");
    return rep;
}

// ---------------------------------------------------------------------------
// Point orbifolds (single-point base with stabilizer S).

namespace {

struct CosetTable {
    std::vector<int> rep;   // coset -> minimal code
    std::vector<int> coset; // code -> coset index
};

CosetTable cosets_of(const ProductGroup& g, const std::vector<int>& diag_codes) {
    CosetTable t;
    t.coset.assign(g.order(), -1);
    for (int x = 0; x < g.order(); ++x) {
        if (t.coset[x] >= 0) continue;
        int idx = static_cast<int>(t.rep.size());
        t.rep.push_back(x);
        for (int dc : diag_codes) t.coset[g.mul(x, dc)] = idx;
        if (t.coset[x] != idx) throw std::logic_error("coset enumeration broken");
    }
    return t;
}

Atlas build_point_atlas(const std::vector<FiniteGroup>& gammas, const FiniteGroup& s,
                        const std::vector<std::vector<int>>& s_embeddings,
                        std::vector<std::vector<int>>* coset_rep_out,
                        std::vector<std::vector<int>>* coset_of_code_out,
                        std::vector<std::vector<int>>* diag_out) {
    int n = static_cast<int>(gammas.size());
    if (static_cast<int>(s_embeddings.size()) != n)
        throw std::invalid_argument("point_orbifold: one S-embedding required per factor");
    for (int i = 0; i < n; ++i) {
        const auto& emb = s_embeddings[i];
        if (static_cast<int>(emb.size()) != s.order())
            throw std::invalid_argument("point_orbifold: embedding size mismatch");
        std::set<int> img(emb.begin(), emb.end());
        if (static_cast<int>(img.size()) != s.order())
            throw std::invalid_argument("point_orbifold: S embedding not injective");
        for (int a = 0; a < s.order(); ++a)
            for (int b = 0; b < s.order(); ++b)
                if (gammas[i].mul(emb[a], emb[b]) != emb[s.mul(a, b)])
                    throw std::invalid_argument("point_orbifold: S embedding not a homomorphism");
    }

    Atlas K;
    K.base = FiniteSpace::discrete({"pt"});
    for (int i = 0; i < n; ++i) {
        K.basic_ids.push_back(i + 1);
        K.basic_groups[i + 1] = gammas[i];
    }

    std::vector<IndexSet> subsets;
    for (int mask = 1; mask < (1 << n); ++mask) {
        IndexSet I;
        for (int k = 0; k < n; ++k)
            if (mask & (1 << k)) I.push_back(k + 1);
        subsets.push_back(I);
    }
    std::sort(subsets.begin(), subsets.end(), [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    for (auto& I : subsets) {
        Chart ch;
        ch.index = I;
        ch.group = product_group(K.basic_groups, I);
        std::vector<int> diag_codes(s.order());
        for (int sc = 0; sc < s.order(); ++sc) {
            std::vector<int> comps;
            for (int i : I) comps.push_back(s_embeddings[i - 1][sc]);
            diag_codes[sc] = ch.group.encode(comps);
        }
        auto tab = cosets_of(ch.group, diag_codes);
        std::vector<std::string> names;
        for (int r : tab.rep) names.push_back(ch.group.elem_name(r) + "S");
        ch.space = FiniteSpace::discrete(names);
        ch.action.act.assign(ch.group.order(), std::vector<int>(ch.space.size()));
        for (int g = 0; g < ch.group.order(); ++g)
            for (int c = 0; c < ch.space.size(); ++c)
                ch.action.act[g][c] = tab.coset[ch.group.mul(g, tab.rep[c])];
        ch.footprint_map.assign.assign(ch.space.size(), 0);
        if (coset_rep_out) coset_rep_out->push_back(tab.rep);
        if (coset_of_code_out) coset_of_code_out->push_back(tab.coset);
        if (diag_out) diag_out->push_back(diag_codes);
        K.charts.push_back(std::move(ch));
    }

    for (int ci = 0; ci < static_cast<int>(K.charts.size()); ++ci)
        for (int cj = 0; cj < static_cast<int>(K.charts.size()); ++cj) {
            if (ci == cj) continue;
            const Chart& CI = K.charts[ci];
            const Chart& CJ = K.charts[cj];
            if (!iset_subset(CI.index, CJ.index)) continue;
            Covering cov;
            cov.sub = ci;
            cov.sup = cj;
            cov.rho.assign.resize(CJ.space.size());
            for (int c = 0; c < CJ.space.size(); ++c) {
                int code = (*coset_rep_out)[cj][c];
                int proj = CJ.group.project(code, CI.group);
                cov.rho.assign[c] = (*coset_of_code_out)[ci][proj];
            }
            K.coverings[{ci, cj}] = std::move(cov);
        }

    K.finalize();
    return K;
}

} // namespace

CatOps PointOrbifold::g_id_ops() const {
    CatOps o;
    o.model = &g_id;
    o.compose = [this](int a, int b) -> std::optional<int> {
        const auto& m1 = g_id.mors[a];
        const auto& m2 = g_id.mors[b];
        if (m1.dst != m2.src) return std::nullopt;
        int off = id_pair_offset.at({m1.iblk, m2.jblk});
        int nk = atlas().chart(m2.jblk).group.order();
        return off + m1.label * nk + m2.carrier;
    };
    o.invert = [this](int m) {
        const auto& mor = g_id.mors[m];
        int off = id_pair_offset.at({mor.jblk, mor.iblk});
        int nk = atlas().chart(mor.iblk).group.order();
        return off + mor.carrier * nk + mor.label;
    };
    return o;
}

CatOps PointOrbifold::g_id_mod_s_ops() const {
    CatOps o;
    o.model = &g_id_mod_s;
    auto canon = [this](int bi, int bj, int x, int y) {
        const ProductGroup& GI = atlas().chart(bi).group;
        const ProductGroup& GJ = atlas().chart(bj).group;
        int bx = x, by = y;
        for (int sc = 0; sc < s_group.order(); ++sc) {
            int cx = GI.mul(x, diag[bi][sc]);
            int cy = GJ.mul(y, diag[bj][sc]);
            if (cx < bx || (cx == bx && cy < by)) { bx = cx; by = cy; }
        }
        return std::make_pair(bx, by);
    };
    o.compose = [this, canon](int a, int b) -> std::optional<int> {
        const auto& m1 = g_id_mod_s.mors[a];
        const auto& m2 = g_id_mod_s.mors[b];
        if (m1.dst != m2.src) return std::nullopt;
        // Shift m1's representative so its target matches m2's source element.
        const ProductGroup& GJ = atlas().chart(m1.jblk).group;
        const ProductGroup& GI = atlas().chart(m1.iblk).group;
        int sc_found = -1;
        for (int sc = 0; sc < s_group.order(); ++sc)
            if (GJ.mul(m1.carrier, diag[m1.jblk][sc]) == m2.label) { sc_found = sc; break; }
        if (sc_found < 0) throw std::logic_error("quotient compose: no shift matches");
        int x = GI.mul(m1.label, diag[m1.iblk][sc_found]);
        auto [cx, cz] = canon(m1.iblk, m2.jblk, x, m2.carrier);
        auto it = quot_lookup.find(mor_key(m1.iblk, m2.jblk, cx, cz));
        if (it == quot_lookup.end()) throw std::logic_error("quotient composite missing");
        return it->second;
    };
    o.invert = [this, canon](int m) {
        const auto& mor = g_id_mod_s.mors[m];
        auto [cy, cx] = canon(mor.jblk, mor.iblk, mor.carrier, mor.label);
        auto it = quot_lookup.find(mor_key(mor.jblk, mor.iblk, cy, cx));
        if (it == quot_lookup.end()) throw std::logic_error("quotient inverse missing");
        return it->second;
    };
    return o;
}

PointOrbifold point_orbifold(const std::vector<FiniteGroup>& gammas, const FiniteGroup& s,
                             const std::vector<std::vector<int>>& s_embeddings) {
    PointOrbifold po;
    po.s_group = s;
    po.atlas_ptr = std::make_unique<Atlas>(build_point_atlas(
        gammas, s, s_embeddings, &po.coset_rep, &po.coset_of_code, &po.diag));
    const Atlas& K = *po.atlas_ptr;
    po.b_s = std::make_unique<BkCategory>(BkCategory::build(K));
    po.g_s = std::make_unique<GkGroupoid>(GkGroupoid::build(K));

    int nch = K.num_charts();

    // G_id: objects Gamma_I, one morphism per source/target pair, keyed by
    // (label = source element, carrier = target element).
    {
        GroupoidModel& M = po.g_id;
        M.groupoid_flag = true;
        std::vector<FiniteSpace> spaces;
        for (int c = 0; c < nch; ++c) {
            std::vector<std::string> names;
            const ProductGroup& G = K.chart(c).group;
            for (int g = 0; g < G.order(); ++g) names.push_back(G.elem_name(g));
            spaces.push_back(FiniteSpace::discrete(names));
        }
        std::vector<const FiniteSpace*> ptrs;
        for (auto& sp : spaces) ptrs.push_back(&sp);
        auto [uspace, offsets] = FiniteSpace::disjoint_union(ptrs);
        M.obj_space = std::move(uspace);
        for (int c = 0; c < nch; ++c)
            M.blocks.push_back({K.chart(c).index, offsets[c], spaces[c].size()});
        for (int bi = 0; bi < nch; ++bi)
            for (int bj = 0; bj < nch; ++bj) {
                po.id_pair_offset[{bi, bj}] = M.num_mors();
                int ni = K.chart(bi).group.order();
                int nj = K.chart(bj).group.order();
                for (int x = 0; x < ni; ++x)
                    for (int y = 0; y < nj; ++y) {
                        GroupoidModel::Mor mor;
                        mor.iblk = bi;
                        mor.jblk = bj;
                        mor.label = x;
                        mor.carrier = y;
                        mor.src = M.object(bi, x);
                        mor.dst = M.object(bj, y);
                        M.mors.push_back(mor);
                    }
            }
        M.identity_of.assign(M.num_objects(), -1);
        for (int c = 0; c < nch; ++c) {
            int ni = K.chart(c).group.order();
            int off = po.id_pair_offset.at({c, c});
            for (int x = 0; x < ni; ++x) M.identity_of[M.object(c, x)] = off + x * ni + x;
        }
    }

    // G_id / S: diagonal classes of pairs, keyed by the lexicographically
    // minimal representative.
    {
        GroupoidModel& M = po.g_id_mod_s;
        M.groupoid_flag = true;
        std::vector<const FiniteSpace*> ptrs;
        for (int c = 0; c < nch; ++c) ptrs.push_back(&K.chart(c).space);
        auto [uspace, offsets] = FiniteSpace::disjoint_union(ptrs);
        M.obj_space = std::move(uspace);
        for (int c = 0; c < nch; ++c)
            M.blocks.push_back({K.chart(c).index, offsets[c], K.chart(c).space.size()});
        for (int bi = 0; bi < nch; ++bi) {
            const ProductGroup& GI = K.chart(bi).group;
            for (int bj = 0; bj < nch; ++bj) {
                const ProductGroup& GJ = K.chart(bj).group;
                for (int x = 0; x < GI.order(); ++x)
                    for (int y = 0; y < GJ.order(); ++y) {
                        bool canonical = true;
                        for (int sc = 0; sc < s.order() && canonical; ++sc) {
                            int cx = GI.mul(x, po.diag[bi][sc]);
                            int cy = GJ.mul(y, po.diag[bj][sc]);
                            if (cx < x || (cx == x && cy < y)) canonical = false;
                        }
                        if (!canonical) continue;
                        GroupoidModel::Mor mor;
                        mor.iblk = bi;
                        mor.jblk = bj;
                        mor.label = x;
                        mor.carrier = y;
                        mor.src = M.object(bi, po.coset_of_code[bi][x]);
                        mor.dst = M.object(bj, po.coset_of_code[bj][y]);
                        po.quot_lookup[mor_key(bi, bj, x, y)] = M.num_mors();
                        M.mors.push_back(mor);
                    }
            }
        }
        M.identity_of.assign(M.num_objects(), -1);
        for (int c = 0; c < nch; ++c) {
            const ProductGroup& GI = K.chart(c).group;
            for (int cs = 0; cs < K.chart(c).space.size(); ++cs) {
                int rep = po.coset_rep[c][cs];
                int bx = rep;
                for (int sc = 0; sc < s.order(); ++sc) bx = std::min(bx, GI.mul(rep, po.diag[c][sc]));
                M.identity_of[M.object(c, cs)] = po.quot_lookup.at(mor_key(c, c, bx, bx));
            }
        }
    }

    // Twin atlas with trivial S; its B_K is B_id and F_S quotients carriers.
    {
        FiniteGroup triv = FiniteGroup::trivial();
        std::vector<std::vector<int>> triv_emb(gammas.size());
        for (size_t i = 0; i < gammas.size(); ++i) triv_emb[i] = {gammas[i].identity};
        std::vector<std::vector<int>> rep2, code2, diag2;
        po.id_atlas = std::make_unique<Atlas>(
            build_point_atlas(gammas, triv, triv_emb, &rep2, &code2, &diag2));
        po.b_id = std::make_unique<BkCategory>(BkCategory::build(*po.id_atlas));

        const GroupoidModel& B = po.b_id->model();
        po.f_s.obj_map.resize(B.num_objects());
        for (int c = 0; c < nch; ++c) {
            int n = K.chart(c).group.order();
            for (int x = 0; x < n; ++x) {
                // Twin chart points are cosets of the trivial group: point == code.
                int code = rep2[c][x];
                po.f_s.obj_map[B.object(c, x)] =
                    po.b_s->model().object(c, po.coset_of_code[c][code]);
            }
        }
        po.f_s.mor_map.resize(B.num_mors());
        for (int m = 0; m < B.num_mors(); ++m) {
            const auto& mor = B.mors[m];
            int code = rep2[mor.jblk][mor.carrier];
            po.f_s.mor_map[m] = po.b_s->mor_id(mor.iblk, mor.jblk,
                                               po.coset_of_code[mor.jblk][code], mor.label);
        }
    }

    // Phi : G_id/S -> G_S, [(x, y)] -> (gamma' S, delta') with gamma' built
    // from x on I\J and y on J, and delta' = y|_M x|_M^{-1} on M = I n J.
    {
        const GroupoidModel& Q = po.g_id_mod_s;
        po.phi.obj_map.resize(Q.num_objects());
        for (int x = 0; x < Q.num_objects(); ++x) po.phi.obj_map[x] = x; // same layout
        po.phi.mor_map.resize(Q.num_mors());
        for (int m = 0; m < Q.num_mors(); ++m) {
            const auto& mor = Q.mors[m];
            const IndexSet& I = K.chart(mor.iblk).index;
            const IndexSet& J = K.chart(mor.jblk).index;
            IndexSet U = iset_union(I, J);
            IndexSet Mset = iset_intersect(I, J);
            int cu = K.chart_id(U);
            const ProductGroup& GI = K.chart(mor.iblk).group;
            const ProductGroup& GJ = K.chart(mor.jblk).group;
            const ProductGroup& GU = K.chart(cu).group;
            const ProductGroup& GM = K.group_of(Mset);
            std::vector<int> comps_u(U.size());
            auto comps_x = GI.decode(mor.label);
            auto comps_y = GJ.decode(mor.carrier);
            for (size_t k = 0; k < U.size(); ++k) {
                int id = U[k];
                auto itJ = std::find(J.begin(), J.end(), id);
                if (itJ != J.end()) comps_u[k] = comps_y[itJ - J.begin()];
                else {
                    auto itI = std::find(I.begin(), I.end(), id);
                    comps_u[k] = comps_x[itI - I.begin()];
                }
            }
            int gamma_prime = GU.encode(comps_u);
            int delta = GM.mul(GJ.project(mor.carrier, GM), GM.inv(GI.project(mor.label, GM)));
            po.phi.mor_map[m] = po.g_s->mor_id(mor.iblk, mor.jblk,
                                               po.coset_of_code[cu][gamma_prime], delta);
        }
    }

    return po;
}

Report verify_point_orbifold(const PointOrbifold& po, bool full_laws) {
    Report rep;
    if (full_laws) {
        verify_category_laws(po.g_id_ops(), rep, "G_id");
        verify_category_laws(po.g_id_mod_s_ops(), rep, "G_id/S");
    }

    {
        auto real = realize(po.g_id);
        rep.require(real.space.size() == 1, "G_id realization is a point",
                    std::to_string(real.space.size()) + " classes");
    }

    verify_functor(po.b_id->ops(), po.b_s->ops(), po.f_s, rep, "F_S");

    // F_S . F_s = F_S for every s in S.
    {
        const GroupoidModel& B = po.b_id->model();
        bool ok = true;
        std::string wit;
        for (int sc = 0; sc < po.s_group.order() && ok; ++sc) {
            for (int m = 0; m < B.num_mors(); ++m) {
                const auto& mor = B.mors[m];
                const ProductGroup& GJ = po.atlas().chart(mor.jblk).group;
                int shifted = GJ.mul(mor.carrier, po.diag[mor.jblk][sc]);
                int fsm = po.b_id->mor_id(mor.iblk, mor.jblk, shifted, mor.label);
                if (fsm < 0 || po.f_s.mor_map[fsm] != po.f_s.mor_map[m]) {
                    ok = false;
                    wit = "s index " + std::to_string(sc) + ", morphism " + std::to_string(m);
                    break;
                }
            }
        }
        rep.require(ok, "F_S . F_s = F_S", wit);
    }

    // Phi is a bijective functor, exhibiting G_id/S as the completion G_S.
    {
        const GroupoidModel& Q = po.g_id_mod_s;
        const GroupoidModel& G = po.g_s->model();
        bool ok = Q.num_objects() == G.num_objects() && Q.num_mors() == G.num_mors();
        std::string wit = ok ? "" : "object/morphism counts differ";
        std::vector<bool> hit(G.num_mors(), false);
        for (int m = 0; m < Q.num_mors() && ok; ++m) {
            int t = po.phi.mor_map[m];
            if (t < 0 || hit[t]) {
                ok = false;
                wit = "phi not injective at morphism " + std::to_string(m);
            } else {
                hit[t] = true;
            }
        }
        rep.require(ok, "phi bijective", wit);
        if (ok) verify_functor(po.g_id_mod_s_ops(), po.g_s->ops(), po.phi, rep, "phi");
    }

    return rep;
}

} // namespace orb
