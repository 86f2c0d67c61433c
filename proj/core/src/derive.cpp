#include "orbatlas/derive.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace orb {

std::vector<BasicChartEmbedding> canonical_embeddings(const GkGroupoid& gk) {
    std::vector<BasicChartEmbedding> out;
    const Atlas& K = gk.atlas();
    for (int c = 0; c < K.num_charts(); ++c) {
        const Chart& ch = K.chart(c);
        if (ch.index.size() != 1) continue;
        BasicChartEmbedding e;
        e.basic_id = ch.index[0];
        e.domain = ch.space;
        e.group = ch.group.grp;
        e.action = ch.action;
        for (int x = 0; x < ch.space.size(); ++x) e.obj_of.push_back(gk.model().object(c, x));
        e.mor_of.assign(ch.space.size(), std::vector<int>(ch.group.order()));
        for (int x = 0; x < ch.space.size(); ++x)
            for (int g = 0; g < ch.group.order(); ++g) e.mor_of[x][g] = gk.mor_id(c, c, x, g);
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

struct TupleChart {
    std::vector<int> enumeration;            // the ids of I in order
    std::vector<std::vector<int>> tuples;    // each of length |I|-1 (empty for basics)
    std::map<std::vector<int>, int> index_of;
};

int src_obj(const GroupoidModel& M, int mor) { return M.mors[mor].src; }
int dst_obj(const GroupoidModel& M, int mor) { return M.mors[mor].dst; }

} // namespace

DerivedAtlas derive_atlas(const CatOps& g, const std::vector<BasicChartEmbedding>& embeddings,
                          std::vector<int> order) {
    const GroupoidModel& G = *g.model;
    if (!G.mor_space)
        throw std::invalid_argument("derive_atlas: source groupoid lacks a morphism-space order");
    if (!g.invert) throw std::invalid_argument("derive_atlas: source must be a groupoid");

    std::map<int, const BasicChartEmbedding*> emb_of;
    for (auto& e : embeddings) {
        if (!emb_of.emplace(e.basic_id, &e).second)
            throw std::invalid_argument("derive_atlas: duplicate basic id");
    }
    if (order.empty())
        for (auto& [id, e] : emb_of) order.push_back(id);
    if (order.size() != embeddings.size())
        throw std::invalid_argument("derive_atlas: order must list every basic id once");

    // Embedding axioms: sigma injective, the two squares commute, and the
    // full subcategory on sigma(W_i) is the action category.
    for (auto& e : embeddings) {
        std::set<int> objs(e.obj_of.begin(), e.obj_of.end());
        if (objs.size() != e.obj_of.size())
            throw std::invalid_argument("derive_atlas: sigma not injective");
        if (auto err = verify_action(e.group, e.domain, e.action))
            throw std::invalid_argument("derive_atlas: bad chart action: " + *err);
        for (int x = 0; x < e.domain.size(); ++x)
            for (int gg = 0; gg < e.group.order(); ++gg) {
                int m = e.mor_of[x][gg];
                if (dst_obj(G, m) != e.obj_of[x] ||
                    src_obj(G, m) != e.obj_of[e.action.act[e.group.inv(gg)][x]])
                    throw std::invalid_argument("derive_atlas: sigma-tilde squares fail");
            }
        // Full subcategory check: morphisms between sigma-points are exactly
        // the sigma-tilde images.
        std::set<int> expect;
        for (auto& row : e.mor_of) expect.insert(row.begin(), row.end());
        for (int m = 0; m < G.num_mors(); ++m)
            if (objs.count(src_obj(G, m)) && objs.count(dst_obj(G, m)) && !expect.count(m))
                throw std::invalid_argument(
                    "derive_atlas: extra morphisms inside an embedded chart");
    }

    auto real = realize(G);

    // Footprints must be open and cover |G|.
    std::map<int, std::vector<int>> fp;
    {
        std::vector<bool> covered(real.space.size(), false);
        for (auto& e : embeddings) {
            std::set<int> img;
            for (int o : e.obj_of) img.insert(real.cls_of[o]);
            fp[e.basic_id] = std::vector<int>(img.begin(), img.end());
            if (!real.space.is_open(fp[e.basic_id]))
                throw std::invalid_argument("derive_atlas: footprint not open for id " +
                                            std::to_string(e.basic_id));
            for (int p : fp[e.basic_id]) covered[p] = true;
        }
        for (int p = 0; p < real.space.size(); ++p)
            if (!covered[p])
                throw std::invalid_argument("derive_atlas: footprints do not cover |G|");
    }

    DerivedAtlas da;
    da.order = order;
    da.embeddings = embeddings;
    da.source = &G;
    da.atlas = std::make_unique<Atlas>();
    Atlas& K = *da.atlas;
    K.base = real.space;
    for (auto& e : embeddings) {
        K.basic_ids.push_back(e.basic_id);
        K.basic_groups[e.basic_id] = e.group;
    }
    std::sort(K.basic_ids.begin(), K.basic_ids.end());

    int n = static_cast<int>(order.size());
    auto pos_in_order = [&](int id) {
        return static_cast<int>(std::find(order.begin(), order.end(), id) - order.begin());
    };

    // All nonempty index sets with nonempty footprint intersection, in
    // (size, lex) chart order.
    std::vector<IndexSet> isets;
    for (int mask = 1; mask < (1 << n); ++mask) {
        IndexSet I;
        for (int k = 0; k < n; ++k)
            if (mask & (1 << k)) I.push_back(K.basic_ids[k]);
        std::set<int> inter(fp.at(I[0]).begin(), fp.at(I[0]).end());
        for (int i : I) {
            std::set<int> next;
            for (int p : fp.at(i))
                if (inter.count(p)) next.insert(p);
            inter = next;
        }
        if (!inter.empty()) isets.push_back(I);
    }
    std::sort(isets.begin(), isets.end(), [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::vector<TupleChart> tcharts;
    std::map<IndexSet, int> chart_of;

    // Charts, built bottom-up so each fiber product extends a smaller chart.
    for (auto& I : isets) {
        TupleChart tc;
        tc.enumeration = I;
        std::sort(tc.enumeration.begin(), tc.enumeration.end(),
                  [&](int a, int b) { return pos_in_order(a) < pos_in_order(b); });
        Chart ch;
        ch.index = I;
        ch.group = product_group(K.basic_groups, I);

        if (I.size() == 1) {
            const auto& e = *emb_of.at(I[0]);
            ch.space = e.domain;
            ch.action = e.action;
            ch.footprint_map.assign.resize(e.domain.size());
            for (int x = 0; x < e.domain.size(); ++x)
                ch.footprint_map.assign[x] = real.cls_of[e.obj_of[x]];
        } else {
            // Composable tuples along the enumeration, as an iterated fiber
            // product over the minimal index.
            int i0 = tc.enumeration[0], i1 = tc.enumeration[1];
            const auto& e0 = *emb_of.at(i0);
            const auto& e1 = *emb_of.at(i1);
            std::set<int> s0(e0.obj_of.begin(), e0.obj_of.end());
            std::set<int> s1(e1.obj_of.begin(), e1.obj_of.end());
            std::vector<std::vector<int>> base_tuples;
            for (int m = 0; m < G.num_mors(); ++m)
                if (s0.count(src_obj(G, m)) && s1.count(dst_obj(G, m)))
                    base_tuples.push_back({m});
            if (I.size() == 2) {
                tc.tuples = std::move(base_tuples);
            } else {
                IndexSet H = I;
                H.erase(std::find(H.begin(), H.end(), i0));
                const TupleChart& th = tcharts[chart_of.at(H)];
                for (auto& t : th.tuples)
                    for (auto& b : base_tuples)
                        if (src_obj(G, t[0]) == dst_obj(G, b[0])) {
                            std::vector<int> nt = b;
                            nt.insert(nt.end(), t.begin(), t.end());
                            tc.tuples.push_back(std::move(nt));
                        }
            }
            for (size_t k = 0; k < tc.tuples.size(); ++k) tc.index_of[tc.tuples[k]] = static_cast<int>(k);

            std::vector<std::string> names;
            for (auto& t : tc.tuples) {
                std::string nm = "<";
                for (size_t k = 0; k < t.size(); ++k) {
                    if (k) nm += ",";
                    nm += std::to_string(t[k]);
                }
                names.push_back(nm + ">");
            }
            // Componentwise morphism-space order.
            std::vector<std::pair<int, int>> covers;
            for (size_t a = 0; a < tc.tuples.size(); ++a)
                for (size_t b = 0; b < tc.tuples.size(); ++b) {
                    if (a == b) continue;
                    bool le = true;
                    for (size_t k = 0; k < tc.tuples[a].size() && le; ++k)
                        le = G.mor_space->le(tc.tuples[a][k], tc.tuples[b][k]);
                    if (le) covers.emplace_back(static_cast<int>(a), static_cast<int>(b));
                }
            ch.space = FiniteSpace::from_covers(std::move(names), covers);

            // Insertion action: the Gamma_{i_l} component conjugates the
            // entries on both sides of level l.
            ch.action.act.assign(ch.group.order(),
                                 std::vector<int>(static_cast<int>(tc.tuples.size())));
            int klen = static_cast<int>(I.size()) - 1;
            for (int gc = 0; gc < ch.group.order(); ++gc) {
                auto comps = ch.group.decode(gc); // aligned with sorted I
                for (size_t tIdx = 0; tIdx < tc.tuples.size(); ++tIdx) {
                    std::vector<int> t = tc.tuples[tIdx];
                    for (int lev = 0; lev <= klen; ++lev) {
                        int id = tc.enumeration[lev];
                        auto itI = std::find(I.begin(), I.end(), id);
                        int comp = comps[itI - I.begin()];
                        const auto& e = *emb_of.at(id);
                        if (comp == e.group.identity) continue;
                        // chart point at this level
                        int obj = lev == 0 ? src_obj(G, t[0]) : dst_obj(G, t[lev - 1]);
                        int x = static_cast<int>(
                            std::find(e.obj_of.begin(), e.obj_of.end(), obj) - e.obj_of.begin());
                        int gx = e.action.act[comp][x];
                        int corr = e.mor_of[gx][comp]; // sigma(x) -> sigma(comp x)
                        if (lev >= 1) {
                            auto c1 = g.compose(t[lev - 1], corr);
                            if (!c1) throw std::logic_error("insertion action compose failed");
                            t[lev - 1] = *c1;
                        }
                        if (lev <= klen - 1) {
                            auto c2 = g.compose(g.invert(corr), t[lev]);
                            if (!c2) throw std::logic_error("insertion action compose failed");
                            t[lev] = *c2;
                        }
                    }
                    auto it = tc.index_of.find(t);
                    if (it == tc.index_of.end())
                        throw std::logic_error("insertion action leaves the tuple set");
                    ch.action.act[gc][tIdx] = it->second;
                }
            }

            ch.footprint_map.assign.resize(tc.tuples.size());
            for (size_t tIdx = 0; tIdx < tc.tuples.size(); ++tIdx)
                ch.footprint_map.assign[tIdx] = real.cls_of[src_obj(G, tc.tuples[tIdx][0])];
        }
        chart_of[I] = static_cast<int>(K.charts.size());
        K.charts.push_back(std::move(ch));
        tcharts.push_back(std::move(tc));
    }

    // Coverings by partial composition and endpoint forgetting.
    for (auto& [H, ch_id] : chart_of)
        for (auto& [I, cI_id] : chart_of) {
            if (H == I || !iset_subset(H, I)) continue;
            const TupleChart& tH = tcharts[ch_id];
            const TupleChart& tI = tcharts[cI_id];
            Covering cov;
            cov.sub = ch_id;
            cov.sup = cI_id;
            cov.rho.assign.resize(K.charts[cI_id].space.size());
            // positions of H's enumeration inside I's enumeration
            std::vector<int> pos;
            for (int id : tH.enumeration)
                pos.push_back(static_cast<int>(
                    std::find(tI.enumeration.begin(), tI.enumeration.end(), id) -
                    tI.enumeration.begin()));
            for (size_t tIdx = 0; tIdx < tI.tuples.size(); ++tIdx) {
                const auto& t = tI.tuples[tIdx];
                if (H.size() == 1) {
                    int p = pos[0];
                    int obj = p == 0 ? src_obj(G, t[0]) : dst_obj(G, t[p - 1]);
                    const auto& e = *emb_of.at(H[0]);
                    cov.rho.assign[tIdx] = static_cast<int>(
                        std::find(e.obj_of.begin(), e.obj_of.end(), obj) - e.obj_of.begin());
                } else {
                    std::vector<int> nt;
                    for (size_t m = 1; m < pos.size(); ++m) {
                        int lo = pos[m - 1], hi = pos[m]; // entries lo..hi-1 compose
                        int acc = t[lo];
                        for (int kk = lo + 1; kk < hi; ++kk) {
                            auto c = g.compose(acc, t[kk]);
                            if (!c) throw std::logic_error("partial composition failed");
                            acc = *c;
                        }
                        nt.push_back(acc);
                    }
                    auto it = tH.index_of.find(nt);
                    if (it == tH.index_of.end())
                        throw std::logic_error("partial composition leaves the tuple set");
                    cov.rho.assign[tIdx] = it->second;
                }
            }
            K.coverings[{ch_id, cI_id}] = std::move(cov);
        }

    K.finalize();
    da.tuples.resize(K.num_charts());
    da.enumeration.resize(K.num_charts());
    for (auto& [I, cid] : chart_of) {
        da.tuples[cid] = tcharts[cid].tuples;
        da.enumeration[cid] = tcharts[cid].enumeration;
    }
    return da;
}

InducedFunctor induced_functor(const DerivedAtlas& da, const BkCategory& bk, const CatOps& g) {
    InducedFunctor out;
    const Atlas& K = *da.atlas;
    const GroupoidModel& B = bk.model();
    const GroupoidModel& G = *g.model;

    std::map<int, const BasicChartEmbedding*> emb_of;
    for (auto& e : da.embeddings) emb_of[e.basic_id] = &e;

    // Objects.
    out.f.obj_map.assign(B.num_objects(), -1);
    for (int c = 0; c < K.num_charts(); ++c) {
        const IndexSet& I = K.chart(c).index;
        for (int x = 0; x < K.chart(c).space.size(); ++x) {
            int obj;
            if (I.size() == 1) obj = emb_of.at(I[0])->obj_of[x];
            else obj = dst_obj(G, da.tuples[c][x].back());
            out.f.obj_map[B.object(c, x)] = obj;
        }
    }

    // Morphisms: correction at the top level of I inside J, then the partial
    // composite up to J's top.
    out.f.mor_map.assign(B.num_mors(), -1);
    bool built = true;
    std::string build_wit;
    for (int m = 0; m < B.num_mors() && built; ++m) {
        const auto& mor = B.mors[m];
        const IndexSet& I = K.chart(mor.iblk).index;
        const auto& enumJ = da.enumeration[mor.jblk];
        int top_i = da.enumeration[mor.iblk].back();
        int p = static_cast<int>(std::find(enumJ.begin(), enumJ.end(), top_i) - enumJ.begin());
        // chart point of the carrier tuple at level p, in basic chart coords
        const auto& e = *emb_of.at(top_i);
        int obj;
        if (enumJ.size() == 1) obj = e.obj_of[mor.carrier];
        else {
            const auto& t = da.tuples[mor.jblk][mor.carrier];
            obj = p == 0 ? src_obj(G, t[0]) : dst_obj(G, t[p - 1]);
        }
        int x = static_cast<int>(std::find(e.obj_of.begin(), e.obj_of.end(), obj) -
                                 e.obj_of.begin());
        const ProductGroup& GI = K.chart(mor.iblk).group;
        auto comps = GI.decode(mor.label);
        int gc = comps[std::find(I.begin(), I.end(), top_i) - I.begin()];
        int acc = e.mor_of[x][gc]; // sigma(gc^{-1} x) -> sigma(x)
        if (enumJ.size() > 1) {
            const auto& t = da.tuples[mor.jblk][mor.carrier];
            for (size_t kk = p; kk < t.size(); ++kk) {
                auto cmp = g.compose(acc, t[kk]);
                if (!cmp) {
                    built = false;
                    build_wit = "morphism " + std::to_string(m);
                    break;
                }
                acc = *cmp;
            }
        }
        out.f.mor_map[m] = acc;
    }
    out.report.require(built, "F_K image construction", build_wit);
    if (!built) return out;

    verify_functor(bk.ops(), g, out.f, out.report, "F_K");

    // |F_K| is a bijection |B_K| -> |G|.
    {
        auto rb = realize(B);
        auto rg = realize(G);
        std::vector<int> img(rb.space.size(), -1);
        bool ok = rb.space.size() == rg.space.size();
        std::string wit = ok ? "" : "realization sizes differ";
        for (int o = 0; o < B.num_objects() && ok; ++o) {
            int cb = rb.cls_of[o];
            int cg = rg.cls_of[out.f.obj_map[o]];
            if (img[cb] < 0) img[cb] = cg;
            else if (img[cb] != cg) {
                ok = false;
                wit = "not well defined on classes";
            }
        }
        if (ok) {
            std::set<int> distinct(img.begin(), img.end());
            ok = static_cast<int>(distinct.size()) == rg.space.size();
            if (!ok) wit = "not surjective/injective on classes";
        }
        out.report.require(ok, "|F_K| bijective on realizations", wit);
    }

    // Stabilizer isomorphisms: loops map bijectively onto loops.
    {
        bool ok = true;
        std::string wit;
        auto out_adj = B.out_adj();
        std::vector<std::set<int>> loops_at(G.num_objects());
        for (int m = 0; m < G.num_mors(); ++m)
            if (G.mors[m].src == G.mors[m].dst) loops_at[G.mors[m].src].insert(m);
        for (int o = 0; o < B.num_objects() && ok; ++o) {
            std::set<int> img;
            for (int m : out_adj[o])
                if (B.mors[m].dst == o) img.insert(out.f.mor_map[m]);
            if (img != loops_at[out.f.obj_map[o]]) {
                ok = false;
                wit = "at " + B.obj_name(o);
            }
        }
        out.report.require(ok, "F_K stabilizer isomorphisms", wit);
    }
    return out;
}

ReorderResult reorder_atlas(const DerivedAtlas& da, const CatOps& g, int id_a, int id_b) {
    ReorderResult out;
    const GroupoidModel& G = *g.model;

    auto pa = std::find(da.order.begin(), da.order.end(), id_a);
    auto pb = std::find(da.order.begin(), da.order.end(), id_b);
    if (pa == da.order.end() || pb == da.order.end() || pb != pa + 1)
        throw std::invalid_argument("reorder_atlas: ids must be adjacent in the order");

    std::vector<int> new_order = da.order;
    std::swap(new_order[pa - da.order.begin()], new_order[pb - da.order.begin()]);
    out.derived = derive_atlas(g, da.embeddings, new_order);

    const Atlas& K = *da.atlas;
    const Atlas& K2 = *out.derived.atlas;
    out.s_map.resize(K.num_charts());
    bool ok = true;
    std::string wit;
    for (int c = 0; c < K.num_charts() && ok; ++c) {
        const IndexSet& I = K.chart(c).index;
        int c2 = K2.chart_id(I);
        bool both = std::find(I.begin(), I.end(), id_a) != I.end() &&
                    std::find(I.begin(), I.end(), id_b) != I.end();
        out.s_map[c].resize(K.chart(c).space.size());
        if (I.size() == 1 || !both) {
            // S_I = id (the tuples coincide verbatim).
            for (int x = 0; x < K.chart(c).space.size(); ++x) {
                if (I.size() == 1) out.s_map[c][x] = x;
                else {
                    auto& t = da.tuples[c][x];
                    int y = -1;
                    for (size_t k = 0; k < out.derived.tuples[c2].size(); ++k)
                        if (out.derived.tuples[c2][k] == t) { y = static_cast<int>(k); break; }
                    if (y < 0) { ok = false; wit = "identity tuple missing"; break; }
                    out.s_map[c][x] = y;
                }
            }
        } else {
            const auto& enums = da.enumeration[c];
            int m = static_cast<int>(std::find(enums.begin(), enums.end(), id_a) - enums.begin());
            for (int x = 0; x < K.chart(c).space.size() && ok; ++x) {
                std::vector<int> t = da.tuples[c][x];
                std::vector<int> nt = t;
                int k = static_cast<int>(t.size());
                // positions: entry m-1 (into a), entry m (a -> b), entry m+1 (out of b)
                if (m >= 1) {
                    auto cmp = g.compose(t[m - 1], t[m]);
                    if (!cmp) { ok = false; wit = "reorder compose failed"; break; }
                    nt[m - 1] = *cmp;
                }
                nt[m] = g.invert(t[m]);
                if (m + 1 <= k - 1) {
                    auto cmp = g.compose(t[m], t[m + 1]);
                    if (!cmp) { ok = false; wit = "reorder compose failed"; break; }
                    nt[m + 1] = *cmp;
                }
                // locate in the new chart
                int y = -1;
                for (size_t kk = 0; kk < out.derived.tuples[c2].size(); ++kk)
                    if (out.derived.tuples[c2][kk] == nt) { y = static_cast<int>(kk); break; }
                if (y < 0) { ok = false; wit = "reordered tuple missing at " + iset_str(I); break; }
                out.s_map[c][x] = y;
            }
        }
    }
    out.report.require(ok, "S map construction", wit);
    if (!ok) return out;

    // S is a bijection, Gamma_I-equivariant, compatible with rho and psi.
    for (int c = 0; c < K.num_charts() && ok; ++c) {
        int c2 = K2.chart_id(K.chart(c).index);
        std::set<int> img(out.s_map[c].begin(), out.s_map[c].end());
        if (static_cast<int>(img.size()) != K.chart(c).space.size() ||
            K.chart(c).space.size() != K2.chart(c2).space.size()) {
            ok = false;
            wit = "S not bijective at " + iset_str(K.chart(c).index);
            break;
        }
        for (int gg = 0; gg < K.chart(c).group.order() && ok; ++gg)
            for (int x = 0; x < K.chart(c).space.size(); ++x)
                if (out.s_map[c][K.chart(c).action.act[gg][x]] !=
                    K2.chart(c2).action.act[gg][out.s_map[c][x]]) {
                    ok = false;
                    wit = "S not equivariant at " + iset_str(K.chart(c).index);
                    break;
                }
        for (int x = 0; x < K.chart(c).space.size() && ok; ++x)
            if (K.chart(c).footprint_map(x) != K2.chart(c2).footprint_map(out.s_map[c][x])) {
                ok = false;
                wit = "S not psi-compatible at " + iset_str(K.chart(c).index);
            }
    }
    out.report.require(ok, "S equivariant bijection", wit);

    // rho compatibility: S . rho = rho' . S.
    if (ok) {
        for (int ci = 0; ci < K.num_charts() && ok; ++ci)
            for (int cj = 0; cj < K.num_charts(); ++cj) {
                if (ci == cj || !iset_subset(K.chart(ci).index, K.chart(cj).index)) continue;
                int ci2 = K2.chart_id(K.chart(ci).index);
                int cj2 = K2.chart_id(K.chart(cj).index);
                for (int y = 0; y < K.chart(cj).space.size(); ++y)
                    if (out.s_map[ci][K.rho(ci, cj, y)] !=
                        K2.rho(ci2, cj2, out.s_map[cj][y])) {
                        ok = false;
                        wit = "S vs rho at " + iset_str(K.chart(cj).index);
                        break;
                    }
                if (!ok) break;
            }
        out.report.require(ok, "S compatible with coverings", wit);
    }

    // S extends to an isomorphism of the groupoid completions:
    // (z, gamma) -> (S z, gamma).
    if (ok) {
        GkGroupoid gk1 = GkGroupoid::build(K);
        GkGroupoid gk2 = GkGroupoid::build(K2);
        Functor F;
        F.obj_map.resize(gk1.model().num_objects());
        for (int c = 0; c < K.num_charts(); ++c) {
            int c2 = K2.chart_id(K.chart(c).index);
            for (int x = 0; x < K.chart(c).space.size(); ++x)
                F.obj_map[gk1.model().object(c, x)] =
                    gk2.model().object(c2, out.s_map[c][x]);
        }
        F.mor_map.resize(gk1.model().num_mors());
        bool fok = true;
        for (int m = 0; m < gk1.model().num_mors() && fok; ++m) {
            const auto& mor = gk1.model().mors[m];
            IndexSet U = iset_union(K.chart(mor.iblk).index, K.chart(mor.jblk).index);
            int cu = K.chart_id(U);
            int ci2 = K2.chart_id(K.chart(mor.iblk).index);
            int cj2 = K2.chart_id(K.chart(mor.jblk).index);
            int t = gk2.mor_id(ci2, cj2, out.s_map[cu][mor.carrier], mor.label);
            if (t < 0) fok = false;
            F.mor_map[m] = t;
        }
        out.report.require(fok, "completion functor image exists", "");
        if (fok) {
            std::vector<bool> hit(gk2.model().num_mors(), false);
            bool bij = gk1.model().num_mors() == gk2.model().num_mors();
            for (int m : F.mor_map) {
                if (m < 0 || hit[m]) { bij = false; break; }
                hit[m] = true;
            }
            out.report.require(bij, "completion functor bijective", "");
            verify_functor(gk1.ops(), gk2.ops(), F, out.report, "reorder completion iso");
        }
    }
    return out;
}

} // namespace orb
