#include "orbatlas/invariants.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace orb {

std::pair<std::vector<Rat>, Report> orbifold_weighting(const GkGroupoid& gk) {
    Report rep;
    const Atlas& K = gk.atlas();
    std::vector<Rat> lambda(K.base.size(), Rat(0));
    std::vector<bool> seen(K.base.size(), false);
    bool ok = true;
    std::string wit;
    for (int c = 0; c < K.num_charts(); ++c) {
        const Chart& ch = K.chart(c);
        for (int x = 0; x < ch.space.size(); ++x) {
            int y = ch.footprint_map(x);
            Rat v(1, static_cast<std::int64_t>(
                         stabilizer_elems(ch.action, ch.group.grp, x).size()));
            if (!seen[y]) {
                seen[y] = true;
                lambda[y] = v;
            } else if (lambda[y] != v && ok) {
                ok = false;
                wit = "stabilizer order differs over " + K.base.name(y);
            }
        }
    }
    for (int y = 0; y < K.base.size(); ++y)
        if (!seen[y] && ok) {
            ok = false;
            wit = "no chart covers " + K.base.name(y);
        }
    rep.require(ok, "Lambda_G well defined", wit);
    return {std::move(lambda), std::move(rep)};
}

Report pushforward_check(const Weighting& w, const std::vector<Rat>& lambda_g,
                         const FiniteSpace& base) {
    Report rep;
    std::vector<Rat> sum(base.size(), Rat(0));
    for (int p = 0; p < w.real.space.size(); ++p) sum[w.base_point[p]] += w.value[p];
    bool ok = true;
    std::string wit;
    for (int y = 0; y < base.size(); ++y)
        if (sum[y] != lambda_g[y]) {
            ok = false;
            wit = "at " + base.name(y) + ": pushforward " + sum[y].str() + " vs Lambda_G " +
                  lambda_g[y].str();
            break;
        }
    rep.require(ok, "pushforward of Lambda_V equals Lambda_G", wit);
    return rep;
}

Rat total_weight(const std::vector<std::pair<Rat, int>>& pts) {
    Rat total(0);
    for (auto& [m, sign] : pts) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("total_weight: missing sign");
        total += (sign > 0 ? m : -m);
    }
    return total;
}

Report check_section(const Atlas& K, const Reduction& red, const SectionData& nu) {
    Report rep;
    if (static_cast<int>(nu.values.size()) != K.num_charts()) {
        rep.fail("section well-formed", "value table count mismatch");
        return rep;
    }
    for (int c = 0; c < K.num_charts(); ++c)
        if (nu.values[c].size() != red.V[c].size()) {
            rep.fail("section well-formed",
                     "value table size mismatch at chart " + iset_str(K.chart(c).index));
            return rep;
        }
    rep.pass("section well-formed");

    auto local_of = [&](int c, int wpt) -> int {
        auto& v = red.V[c];
        auto it = std::lower_bound(v.begin(), v.end(), wpt);
        return (it != v.end() && *it == wpt) ? static_cast<int>(it - v.begin()) : -1;
    };

    // Gamma_I-invariance on V_I.
    bool inv_ok = true;
    std::string inv_wit;
    for (int c = 0; c < K.num_charts() && inv_ok; ++c) {
        const Chart& ch = K.chart(c);
        for (size_t l = 0; l < red.V[c].size() && inv_ok; ++l) {
            int x = red.V[c][l];
            for (int g = 0; g < ch.group.order(); ++g) {
                int gx = ch.action.act[g][x];
                int gl = local_of(c, gx);
                if (gl < 0 || nu.values[c][gl] != nu.values[c][l]) {
                    inv_ok = false;
                    inv_wit = "chart " + iset_str(ch.index) + " at " + ch.space.name(x);
                    break;
                }
            }
        }
    }
    rep.require(inv_ok, "section Gamma-invariant", inv_wit);

    // Compatibility nu_J|_{Vt_IJ} = nu_I . rho_IJ.
    bool comp_ok = true;
    std::string comp_wit;
    for (int ci = 0; ci < K.num_charts() && comp_ok; ++ci)
        for (int cj = 0; cj < K.num_charts() && comp_ok; ++cj) {
            if (ci == cj || !iset_subset(K.chart(ci).index, K.chart(cj).index)) continue;
            for (int y : red.vtilde(K, ci, cj)) {
                int lj = local_of(cj, y);
                int li = local_of(ci, K.rho(ci, cj, y));
                if (li < 0 || lj < 0 || nu.values[cj][lj] != nu.values[ci][li]) {
                    comp_ok = false;
                    comp_wit = "(" + iset_str(K.chart(ci).index) + "," +
                               iset_str(K.chart(cj).index) + ") at " +
                               K.chart(cj).space.name(y);
                    break;
                }
            }
        }
    rep.require(comp_ok, "section compatible with coverings", comp_wit);
    return rep;
}

EulerResult euler_number(const ResolutionGroupoid& vh, const Weighting& w,
                         const SectionData& nu) {
    EulerResult res;
    const Atlas& K = vh.atlas();
    res.report.merge(check_section(K, vh.reduction(), nu));
    if (!res.report.ok()) return res;

    // Zero objects of V^H.
    std::vector<int> zero_of_obj(vh.model().num_objects(), 0);
    for (int o = 0; o < vh.model().num_objects(); ++o) {
        auto [c, l] = vh.model().tag_of(o);
        if (nu.values[c][l] == 0) {
            res.zero_objects.push_back(o);
            zero_of_obj[o] = 1;
        }
    }

    // Full subcategory on the zeros.
    GroupoidModel& Z = res.zero_model;
    Z.groupoid_flag = true;
    std::vector<int> zidx(vh.model().num_objects(), -1);
    {
        std::vector<int> pts = res.zero_objects;
        auto [sp, keep] = vh.model().obj_space.subspace(pts);
        Z.obj_space = std::move(sp);
        for (size_t k = 0; k < keep.size(); ++k) zidx[keep[k]] = static_cast<int>(k);
        Z.blocks.push_back({{}, 0, static_cast<int>(keep.size())});
    }
    std::vector<int> zmor_of;
    for (int m = 0; m < vh.model().num_mors(); ++m) {
        const auto& mor = vh.model().mors[m];
        if (!zero_of_obj[mor.src] || !zero_of_obj[mor.dst]) continue;
        GroupoidModel::Mor zm = mor;
        zm.src = zidx[mor.src];
        zm.dst = zidx[mor.dst];
        zmor_of.push_back(m);
        Z.mors.push_back(zm);
    }
    Z.identity_of.assign(Z.obj_space.size(), -1);
    for (int o : res.zero_objects) {
        int id = vh.model().identity_of[o];
        auto it = std::find(zmor_of.begin(), zmor_of.end(), id);
        res.report.require(it != zmor_of.end(), "zero subcategory has identities", "");
        if (it != zmor_of.end()) Z.identity_of[zidx[o]] = static_cast<int>(it - zmor_of.begin());
    }

    // Nonsingularity is inherited; assert it anyway.
    {
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (auto& mor : Z.mors) ok = ok && seen.insert({mor.src, mor.dst}).second;
        res.report.require(ok, "Z^nu nonsingular", "");
    }

    // Weighting restriction and signs per realization class.
    std::map<int, std::vector<int>> classes; // V^H realization point -> zero objects
    for (int o : res.zero_objects) classes[w.real.cls_of[o]].push_back(o);
    bool sign_ok = true;
    std::string sign_wit;
    std::vector<std::pair<Rat, int>> pts;
    for (auto& [p, objs] : classes) {
        int sign = 0;
        for (int o : objs) {
            auto [c, l] = vh.model().tag_of(o);
            auto it = nu.signs.find({c, l});
            if (it == nu.signs.end()) {
                sign_ok = false;
                sign_wit = "missing sign at " + vh.model().obj_name(o);
                break;
            }
            if (sign == 0) sign = it->second;
            else if (sign != it->second) {
                sign_ok = false;
                sign_wit = "sign not constant on class " + w.real.space.name(p);
                break;
            }
        }
        if (!sign_ok) break;
        res.class_weight.push_back(w.value[p]);
        res.class_sign.push_back(sign);
        pts.push_back({w.value[p], sign});
    }
    res.report.require(sign_ok, "signs well defined on zero classes", sign_wit);
    res.total = sign_ok ? total_weight(pts) : Rat(0);
    return res;
}

// ---------------------------------------------------------------------------
// Gerbe classification.

namespace {

struct SheetData {
    // per chart: sheets as sorted point sets, each psi-bijective onto F_I
    std::vector<std::vector<std::vector<int>>> sheets;
};

// Enumerate the sheets of one chart: unions of order-components whose
// psi-images partition the footprint. Components that fail to inject can
// never participate (the connected double band of a nontrivial gerbe).
std::vector<std::vector<int>> enumerate_sheets(const Chart& ch) {
    std::vector<int> all(ch.space.size());
    for (int i = 0; i < ch.space.size(); ++i) all[i] = i;
    auto comps = ch.space.components(all);
    std::sort(comps.begin(), comps.end());

    std::vector<std::set<int>> images;
    std::vector<int> usable;
    for (size_t k = 0; k < comps.size(); ++k) {
        std::set<int> img;
        for (int p : comps[k]) img.insert(ch.footprint_map(p));
        if (img.size() == comps[k].size()) {
            usable.push_back(static_cast<int>(k));
            images.push_back(std::move(img));
        }
    }
    std::set<int> footprint(ch.footprint.begin(), ch.footprint.end());

    std::vector<std::vector<int>> sheets;
    std::vector<int> picked;
    std::function<void(std::set<int>&)> dfs = [&](std::set<int>& covered) {
        if (sheets.size() >= 128) return;
        if (covered == footprint) {
            std::vector<int> sheet;
            for (int k : picked)
                for (int p : comps[usable[k]]) sheet.push_back(p);
            std::sort(sheet.begin(), sheet.end());
            sheets.push_back(std::move(sheet));
            return;
        }
        // next uncovered footprint point drives the branching
        int next = -1;
        for (int y : footprint)
            if (!covered.count(y)) { next = y; break; }
        for (size_t k = 0; k < usable.size(); ++k) {
            if (!images[k].count(next)) continue;
            bool disjoint = true;
            for (int y : images[k])
                if (covered.count(y)) { disjoint = false; break; }
            if (!disjoint) continue;
            for (int y : images[k]) covered.insert(y);
            picked.push_back(static_cast<int>(k));
            dfs(covered);
            picked.pop_back();
            for (int y : images[k]) covered.erase(y);
        }
    };
    std::set<int> covered;
    dfs(covered);
    std::sort(sheets.begin(), sheets.end());
    return sheets;
}

} // namespace

GerbeResult gerbe_class(const Atlas& K, const std::map<int, int>& base_choice) {
    GerbeResult res;
    Report& rep = res.report;

    // Preconditions: every basic group is Z2 and the diagonal acts
    // trivially (a noneffective structure).
    for (auto& [id, g] : K.basic_groups)
        if (g.order() != 2) {
            rep.fail("gerbe precondition", "basic group " + std::to_string(id) + " is not Z2");
            return res;
        }
    for (int c = 0; c < K.num_charts(); ++c) {
        const Chart& ch = K.chart(c);
        std::vector<int> diag_comps;
        for (auto& f : ch.group.factors) diag_comps.push_back(1 - f.identity);
        int diag = ch.group.encode(diag_comps);
        for (int p = 0; p < ch.space.size(); ++p)
            if (ch.action.act[diag][p] != p) {
                rep.fail("gerbe precondition",
                         "diagonal acts nontrivially on " + iset_str(ch.index));
                return res;
            }
    }
    rep.pass("gerbe precondition");
    res.precondition_ok = true;

    SheetData sd;
    sd.sheets.resize(K.num_charts());
    for (int c = 0; c < K.num_charts(); ++c) {
        sd.sheets[c] = enumerate_sheets(K.chart(c));
        res.sheet_count[K.chart(c).index] = static_cast<int>(sd.sheets[c].size());
    }

    // rho-compatibility of sheet choices, memoized pointwise.
    auto sheet_maps_into = [&](int cj, const std::vector<int>& sheet_j, int ci,
                               const std::vector<int>& sheet_i) {
        for (int p : sheet_j) {
            int q = K.rho(ci, cj, p);
            if (!std::binary_search(sheet_i.begin(), sheet_i.end(), q)) return false;
        }
        return true;
    };

    // Base sheets W0_I for the pair charts.
    std::map<int, int> base;
    {
        bool ok = true;
        std::string wit;
        for (int c = 0; c < K.num_charts(); ++c) {
            if (K.chart(c).index.size() != 2) continue;
            auto it = base_choice.find(c);
            int pick = it == base_choice.end() ? 0 : it->second;
            if (pick < 0 || pick >= static_cast<int>(sd.sheets[c].size())) {
                ok = false;
                wit = "no sheet " + std::to_string(pick) + " in " + iset_str(K.chart(c).index);
                break;
            }
            base[c] = pick;
        }
        rep.require(ok, "base sheets chosen", wit);
        if (!ok) return res;
    }

    // alpha_J = 0 iff some sheet of W_J maps into the base sheet of every
    // pair chart I c J.
    for (int c = 0; c < K.num_charts(); ++c) {
        if (K.chart(c).index.size() != 3) continue;
        bool zero = false;
        for (auto& sheet : sd.sheets[c]) {
            bool hits = true;
            for (auto& [b, bs] : base) {
                if (!iset_subset(K.chart(b).index, K.chart(c).index)) continue;
                if (!sheet_maps_into(c, sheet, b, sd.sheets[b][bs])) { hits = false; break; }
            }
            if (hits) { zero = true; break; }
        }
        res.alpha[K.chart(c).index] = zero ? 0 : 1;
    }

    // Parity identity at every 4-set that carries a chart.
    {
        bool ok = true;
        std::string wit;
        for (int c = 0; c < K.num_charts(); ++c) {
            const IndexSet& Kset = K.chart(c).index;
            if (Kset.size() != 4) continue;
            int nonzero = 0;
            for (int j : Kset) {
                IndexSet J = iset_minus(Kset, {j});
                auto it = res.alpha.find(J);
                if (it == res.alpha.end()) { nonzero = -1; break; }
                nonzero += it->second;
            }
            if (nonzero < 0 || nonzero % 2 != 0) {
                ok = false;
                wit = "4-set " + iset_str(Kset);
                break;
            }
        }
        rep.require(ok, "cocycle parity identity", wit);
    }

    // Exhaustive search for a globally compatible sheet family.
    {
        std::vector<int> order;
        for (int c = 0; c < K.num_charts(); ++c) order.push_back(c);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return K.chart(a).index.size() < K.chart(b).index.size();
        });
        std::vector<int> choice(K.num_charts(), -1);
        std::function<bool(size_t)> dfs = [&](size_t k) -> bool {
            if (k == order.size()) return true;
            int c = order[k];
            for (size_t s = 0; s < sd.sheets[c].size(); ++s) {
                bool ok = true;
                for (int d = 0; d < K.num_charts() && ok; ++d) {
                    if (choice[d] < 0 || d == c) continue;
                    if (iset_subset(K.chart(d).index, K.chart(c).index))
                        ok = sheet_maps_into(c, sd.sheets[c][s], d, sd.sheets[d][choice[d]]);
                    else if (iset_subset(K.chart(c).index, K.chart(d).index))
                        ok = sheet_maps_into(d, sd.sheets[d][choice[d]], c, sd.sheets[c][s]);
                }
                if (!ok) continue;
                choice[c] = static_cast<int>(s);
                if (dfs(k + 1)) return true;
                choice[c] = -1;
            }
            return false;
        };
        res.trivial = dfs(0);
        res.class_bit = res.trivial ? 0 : 1;
        if (res.trivial) {
            for (int c = 0; c < K.num_charts(); ++c) res.family[K.chart(c).index] = choice[c];
            // The family glues to a nonsingular subgroupoid realizing Y.
            int total = 0;
            std::vector<std::pair<int, int>> objs;
            std::map<std::pair<int, int>, int> idx;
            for (int c = 0; c < K.num_charts(); ++c)
                for (int p : sd.sheets[c][choice[c]]) {
                    idx[{c, p}] = total++;
                    objs.push_back({c, p});
                }
            std::vector<int> parent(total);
            for (int i = 0; i < total; ++i) parent[i] = i;
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (auto& [key, cov] : K.coverings) {
                auto [ci, cj] = key;
                for (int p : sd.sheets[cj][choice[cj]]) {
                    auto a = idx.find({cj, p});
                    auto b = idx.find({ci, cov.rho(p)});
                    if (a != idx.end() && b != idx.end())
                        parent[find(a->second)] = find(b->second);
                }
            }
            std::set<int> classes;
            std::map<int, int> base_of_class;
            bool ok = true;
            for (int i = 0; i < total; ++i) {
                int r = find(i);
                classes.insert(r);
                int y = K.chart(objs[i].first).footprint_map(objs[i].second);
                auto it = base_of_class.find(r);
                if (it == base_of_class.end()) base_of_class[r] = y;
                else if (it->second != y) ok = false;
            }
            ok = ok && static_cast<int>(classes.size()) == K.base.size();
            rep.require(ok, "compatible family realizes Y", "");
        }
    }
    rep.pass("gerbe classification complete");
    return res;
}

Report subatlas_check(const Atlas& K, const Atlas& K2, const AtlasEmbedding& emb) {
    Report rep;

    // Same base space (the functor must commute with |psi|).
    {
        bool same = K.base.size() == K2.base.size();
        for (int p = 0; same && p < K.base.size(); ++p)
            same = K.base.name(p) == K2.base.name(p) &&
                   K.base.min_open_nbhd(p) == K2.base.min_open_nbhd(p);
        rep.require(same, "subatlas bases agree", "base spaces differ");
        if (!same) return rep;
    }

    // Chart index translation.
    auto translate = [&](const IndexSet& I) -> std::optional<IndexSet> {
        IndexSet out;
        for (int i : I) {
            auto it = emb.basic_map.find(i);
            if (it == emb.basic_map.end()) return std::nullopt;
            out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<int> chart_to(K.num_charts(), -1);
    for (int c = 0; c < K.num_charts(); ++c) {
        auto I2 = translate(K.chart(c).index);
        if (!I2 || !K2.has_index(*I2)) {
            rep.fail("subatlas chart translation", iset_str(K.chart(c).index));
            return rep;
        }
        chart_to[c] = K2.chart_id(*I2);
    }
    rep.pass("subatlas chart translation");

    // Per chart: injective continuous open embedding compatible with psi,
    // actions, and groups.
    bool ok = true;
    std::string wit;
    for (int c = 0; c < K.num_charts() && ok; ++c) {
        const Chart& A = K.chart(c);
        const Chart& B = K2.chart(chart_to[c]);
        auto it = emb.point_maps.find(A.index);
        if (it == emb.point_maps.end()) {
            ok = false;
            wit = "missing point map for " + iset_str(A.index);
            break;
        }
        const auto& f = it->second;
        if (static_cast<int>(f.size()) != A.space.size()) {
            ok = false;
            wit = "point map size mismatch for " + iset_str(A.index);
            break;
        }
        std::set<int> img(f.begin(), f.end());
        if (static_cast<int>(img.size()) != A.space.size()) {
            ok = false;
            wit = "point map not injective for " + iset_str(A.index);
            break;
        }
        // order-embedding with open image (etale surrogate)
        for (int x = 0; x < A.space.size() && ok; ++x)
            for (int y = 0; y < A.space.size(); ++y)
                if (A.space.le(x, y) != B.space.le(f[x], f[y])) {
                    ok = false;
                    wit = "not an order embedding at " + iset_str(A.index);
                    break;
                }
        if (ok && !B.space.is_open(std::vector<int>(img.begin(), img.end()))) {
            ok = false;
            wit = "image not open for " + iset_str(A.index);
        }
        // psi compatibility
        for (int x = 0; x < A.space.size() && ok; ++x)
            if (B.footprint_map(f[x]) != A.footprint_map(x)) {
                ok = false;
                wit = "psi mismatch at " + iset_str(A.index) + ":" + A.space.name(x);
            }
        // groups match elementwise, actions are intertwined
        if (ok && A.group.order() != B.group.order()) {
            ok = false;
            wit = "group order mismatch at " + iset_str(A.index);
        }
        for (int g = 0; g < A.group.order() && ok; ++g)
            for (int x = 0; x < A.space.size(); ++x)
                if (f[A.action.act[g][x]] != B.action.act[g][f[x]]) {
                    ok = false;
                    wit = "action not intertwined at " + iset_str(A.index);
                    break;
                }
    }
    rep.require(ok, "subatlas chart embeddings", wit);
    if (!ok) return rep;

    // The induced functor B_K -> B_K2 respects rho (hence morphisms).
    ok = true;
    for (int ci = 0; ci < K.num_charts() && ok; ++ci)
        for (int cj = 0; cj < K.num_charts(); ++cj) {
            if (!iset_subset(K.chart(ci).index, K.chart(cj).index)) continue;
            const auto& fi = emb.point_maps.at(K.chart(ci).index);
            const auto& fj = emb.point_maps.at(K.chart(cj).index);
            for (int y = 0; y < K.chart(cj).space.size(); ++y)
                if (fi[K.rho(ci, cj, y)] != K2.rho(chart_to[ci], chart_to[cj], fj[y])) {
                    ok = false;
                    wit = "rho mismatch " + iset_str(K.chart(ci).index) + "<=" +
                          iset_str(K.chart(cj).index) + " at " + K.chart(cj).space.name(y);
                    break;
                }
        }
    rep.require(ok, "subatlas functor respects coverings", wit);
    return rep;
}

} // namespace orb
