#include "orbatlas/fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace orb {
namespace fixtures {

FiniteSpace circle(int n, const std::string& prefix) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(prefix + "a" + std::to_string(i));
    for (int i = 0; i < n; ++i) names.push_back(prefix + "b" + std::to_string(i));
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i < n; ++i) {
        covers.push_back({n + i, i});
        covers.push_back({n + i, (i + 1) % n});
    }
    return FiniteSpace::from_covers(std::move(names), covers);
}

namespace {

// Band poset [u_lo .. u_hi]: maxima u_i, minima d_i with d_i < u_i, u_{i+1}.
struct Band {
    int lo, hi; // inclusive u-range
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> covers;
    std::map<std::string, int> idx;

    int u(int i) const { return idx.at("u" + std::to_string(i)); }
    int d(int i) const { return idx.at("d" + std::to_string(i)); }
};

Band make_band(int lo, int hi, const std::string& suffix, int offset = 0) {
    Band b;
    b.lo = lo;
    b.hi = hi;
    for (int i = lo; i <= hi; ++i) {
        b.idx["u" + std::to_string(i)] = offset + static_cast<int>(b.names.size());
        b.names.push_back("u" + std::to_string(i) + suffix);
    }
    for (int i = lo; i < hi; ++i) {
        b.idx["d" + std::to_string(i)] = offset + static_cast<int>(b.names.size());
        b.names.push_back("d" + std::to_string(i) + suffix);
    }
    for (int i = lo; i < hi; ++i) {
        b.covers.push_back({b.d(i), b.u(i)});
        b.covers.push_back({b.d(i), b.u(i + 1)});
    }
    return b;
}

} // namespace

Atlas football() {
    Atlas K;
    // Base: poles N, S and the band u1..u7 / d1..d6.
    {
        std::vector<std::string> names{"N", "S"};
        std::map<std::string, int> idx{{"N", 0}, {"S", 1}};
        for (int i = 1; i <= 7; ++i) {
            idx["u" + std::to_string(i)] = static_cast<int>(names.size());
            names.push_back("u" + std::to_string(i));
        }
        for (int i = 1; i <= 6; ++i) {
            idx["d" + std::to_string(i)] = static_cast<int>(names.size());
            names.push_back("d" + std::to_string(i));
        }
        std::vector<std::pair<int, int>> covers{{idx["N"], idx["u1"]}, {idx["S"], idx["u7"]}};
        for (int i = 1; i <= 6; ++i) {
            covers.push_back({idx["d" + std::to_string(i)], idx["u" + std::to_string(i)]});
            covers.push_back({idx["d" + std::to_string(i)], idx["u" + std::to_string(i + 1)]});
        }
        K.base = FiniteSpace::from_covers(std::move(names), covers);
    }
    K.basic_ids = {1, 2};
    K.basic_groups[1] = FiniteGroup::cyclic(2);
    K.basic_groups[2] = FiniteGroup::cyclic(3);

    auto base_idx = [&](const std::string& n) { return *K.base.index_of(n); };

    // W_1: apex below the u1 fibers, two copies of the band [u1..u6].
    Chart c1;
    c1.index = {1};
    {
        std::vector<std::string> names{"n^"};
        std::vector<std::pair<int, int>> covers;
        std::vector<Band> copies;
        const char* suf[2] = {"A", "B"};
        for (int s = 0; s < 2; ++s) {
            Band b = make_band(1, 6, suf[s], static_cast<int>(names.size()));
            covers.push_back({0, b.u(1)});
            for (auto& cv : b.covers) covers.push_back(cv);
            for (auto& nm : b.names) names.push_back(nm);
            copies.push_back(std::move(b));
        }
        c1.space = FiniteSpace::from_covers(std::move(names), covers);
        c1.group = product_group(K.basic_groups, {1});
        int n = c1.space.size();
        c1.action.act.assign(2, std::vector<int>(n));
        for (int p = 0; p < n; ++p) c1.action.act[0][p] = p;
        c1.action.act[1][0] = 0;
        int bandsz = 11;
        for (int p = 1; p <= bandsz; ++p) {
            c1.action.act[1][p] = p + bandsz;
            c1.action.act[1][p + bandsz] = p;
        }
        c1.footprint_map.assign.resize(n);
        c1.footprint_map.assign[0] = base_idx("N");
        for (int p = 1; p < n; ++p) {
            std::string nm = c1.space.name(p);
            c1.footprint_map.assign[p] = base_idx(nm.substr(0, nm.size() - 1));
        }
        c1.orientation = std::vector<int>(n, 1);
    }

    // W_2: apex below the u7 fibers, three copies of the band [u2..u7].
    Chart c2;
    c2.index = {2};
    {
        std::vector<std::string> names{"s^"};
        std::vector<std::pair<int, int>> covers;
        const char* suf[3] = {"A", "B", "C"};
        std::vector<Band> copies;
        for (int s = 0; s < 3; ++s) {
            Band b = make_band(2, 7, suf[s], static_cast<int>(names.size()));
            covers.push_back({0, b.u(7)});
            for (auto& cv : b.covers) covers.push_back(cv);
            for (auto& nm : b.names) names.push_back(nm);
            copies.push_back(std::move(b));
        }
        c2.space = FiniteSpace::from_covers(std::move(names), covers);
        c2.group = product_group(K.basic_groups, {2});
        int n = c2.space.size();
        int bandsz = 11;
        c2.action.act.assign(3, std::vector<int>(n));
        for (int g = 0; g < 3; ++g) {
            c2.action.act[g][0] = 0;
            for (int s = 0; s < 3; ++s)
                for (int p = 0; p < bandsz; ++p)
                    c2.action.act[g][1 + s * bandsz + p] = 1 + ((s + g) % 3) * bandsz + p;
        }
        c2.footprint_map.assign.resize(n);
        c2.footprint_map.assign[0] = base_idx("S");
        for (int p = 1; p < n; ++p) {
            std::string nm = c2.space.name(p);
            c2.footprint_map.assign[p] = base_idx(nm.substr(0, nm.size() - 1));
        }
        c2.orientation = std::vector<int>(n, 1);
    }

    // W_12: six copies of the band [u2..u6], indexed by (s, t) in Z2 x Z3.
    Chart c12;
    c12.index = {1, 2};
    int bandsz12 = 9; // u2..u6 and d2..d5
    {
        std::vector<std::string> names;
        std::vector<std::pair<int, int>> covers;
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 3; ++t) {
                std::string suf = std::string(s == 0 ? "A" : "B") + std::to_string(t);
                Band b = make_band(2, 6, suf, static_cast<int>(names.size()));
                for (auto& cv : b.covers) covers.push_back(cv);
                for (auto& nm : b.names) names.push_back(nm);
            }
        c12.space = FiniteSpace::from_covers(std::move(names), covers);
        c12.group = product_group(K.basic_groups, {1, 2});
        int n = c12.space.size();
        c12.action.act.assign(c12.group.order(), std::vector<int>(n));
        for (int g = 0; g < c12.group.order(); ++g) {
            auto comps = c12.group.decode(g); // (z2 part, z3 part)
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 3; ++t)
                    for (int p = 0; p < bandsz12; ++p) {
                        int from = (s * 3 + t) * bandsz12 + p;
                        int to = (((s + comps[0]) % 2) * 3 + (t + comps[1]) % 3) * bandsz12 + p;
                        c12.action.act[g][from] = to;
                    }
        }
        c12.footprint_map.assign.resize(n);
        for (int p = 0; p < n; ++p) {
            std::string nm = c12.space.name(p);
            c12.footprint_map.assign[p] = base_idx(nm.substr(0, 2));
        }
        c12.orientation = std::vector<int>(n, 1);
    }

    K.charts = {std::move(c1), std::move(c2), std::move(c12)};

    // rho_{1,12}: copy (s,t) of [u2..u6] lands in copy s of W_1's band.
    {
        Covering cov;
        cov.sub = 0;
        cov.sup = 2;
        const Chart& W12 = K.charts[2];
        const Chart& W1 = K.charts[0];
        cov.rho.assign.resize(W12.space.size());
        for (int p = 0; p < W12.space.size(); ++p) {
            int copy = p / bandsz12;
            int s = copy / 3;
            std::string nm = W12.space.name(p).substr(0, 2) + (s == 0 ? "A" : "B");
            cov.rho.assign[p] = *W1.space.index_of(nm);
        }
        K.coverings[{0, 2}] = std::move(cov);
    }
    // rho_{2,12}: copy (s,t) lands in copy t of W_2's band.
    {
        Covering cov;
        cov.sub = 1;
        cov.sup = 2;
        const Chart& W12 = K.charts[2];
        const Chart& W2 = K.charts[1];
        cov.rho.assign.resize(W12.space.size());
        const char* suf2[3] = {"A", "B", "C"};
        for (int p = 0; p < W12.space.size(); ++p) {
            int copy = p / bandsz12;
            int t = copy % 3;
            std::string nm = W12.space.name(p).substr(0, 2) + suf2[t];
            cov.rho.assign[p] = *W2.space.index_of(nm);
        }
        K.coverings[{1, 2}] = std::move(cov);
    }

    K.finalize();
    return K;
}

Atlas one_chart() {
    Atlas K;
    K.base = FiniteSpace::from_covers({"x0", "x1"}, {{0, 1}});
    K.basic_ids = {1};
    K.basic_groups[1] = FiniteGroup::trivial();
    Chart ch;
    ch.index = {1};
    ch.space = K.base;
    ch.group = product_group(K.basic_groups, {1});
    ch.action.act = {{0, 1}};
    ch.footprint_map.assign = {0, 1};
    K.charts.push_back(std::move(ch));
    K.finalize();
    return K;
}

namespace {

// Cyclic position space: positions 0..2n-1 around a circle, odd maxima.
FiniteSpace position_circle(int positions, std::vector<int>* max_flag = nullptr) {
    if (positions % 2) throw std::logic_error("position circle needs even size");
    std::vector<std::string> names;
    for (int p = 0; p < positions; ++p) {
        std::string n = "p" + std::string(p < 10 ? "0" : "") + std::to_string(p);
        names.push_back(n);
    }
    std::vector<std::pair<int, int>> covers;
    for (int p = 0; p < positions; p += 2) {
        covers.push_back({p, (p + 1) % positions});
        covers.push_back({p, (p + positions - 1) % positions});
    }
    if (max_flag) {
        max_flag->assign(positions, 0);
        for (int p = 1; p < positions; p += 2) (*max_flag)[p] = 1;
    }
    return FiniteSpace::from_covers(std::move(names), covers);
}

std::vector<int> cyclic_arc(int positions, int from, int to) {
    std::vector<int> out;
    int p = ((from % positions) + positions) % positions;
    int end = ((to % positions) + positions) % positions;
    while (true) {
        out.push_back(p);
        if (p == end) break;
        p = (p + 1) % positions;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Atlas manifold_cover() {
    const int P = 36; // 18 cells
    Atlas K;
    K.base = position_circle(P);
    K.basic_ids = {1, 2, 3};
    for (int i : K.basic_ids) K.basic_groups[i] = FiniteGroup::trivial();

    // omit_i = [12(i-1) .. 12(i-1)+10]; F_i is the complementary open arc.
    std::map<int, std::vector<int>> fp;
    for (int i = 1; i <= 3; ++i)
        fp[i] = cyclic_arc(P, 12 * (i - 1) + 11, 12 * (i - 1) + 35);

    std::vector<IndexSet> isets;
    for (int mask = 1; mask < 8; ++mask) {
        IndexSet I;
        for (int k = 0; k < 3; ++k)
            if (mask & (1 << k)) I.push_back(k + 1);
        std::set<int> inter(fp[I[0]].begin(), fp[I[0]].end());
        for (int i : I) {
            std::set<int> next;
            for (int p : fp[i])
                if (inter.count(p)) next.insert(p);
            inter = next;
        }
        if (!inter.empty()) isets.push_back(I);
    }
    std::sort(isets.begin(), isets.end(), [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::map<IndexSet, std::vector<int>> pts_of;
    for (auto& I : isets) {
        std::set<int> inter(fp[I[0]].begin(), fp[I[0]].end());
        for (int i : I) {
            std::set<int> next;
            for (int p : fp[i])
                if (inter.count(p)) next.insert(p);
            inter = next;
        }
        Chart ch;
        ch.index = I;
        std::vector<int> pts(inter.begin(), inter.end());
        auto [sp, keep] = K.base.subspace(pts);
        ch.space = std::move(sp);
        ch.group = product_group(K.basic_groups, I);
        ch.action.act.assign(1, std::vector<int>(pts.size()));
        for (size_t p = 0; p < pts.size(); ++p) ch.action.act[0][p] = static_cast<int>(p);
        ch.footprint_map.assign = keep;
        pts_of[I] = keep;
        K.charts.push_back(std::move(ch));
    }
    for (size_t a = 0; a < isets.size(); ++a)
        for (size_t b = 0; b < isets.size(); ++b) {
            if (a == b || !iset_subset(isets[a], isets[b])) continue;
            Covering cov;
            cov.sub = static_cast<int>(a);
            cov.sup = static_cast<int>(b);
            const auto& sub_pts = pts_of[isets[a]];
            for (int y : pts_of[isets[b]]) {
                int local = static_cast<int>(
                    std::lower_bound(sub_pts.begin(), sub_pts.end(), y) - sub_pts.begin());
                cov.rho.assign.push_back(local);
            }
            K.coverings[{static_cast<int>(a), static_cast<int>(b)}] = std::move(cov);
        }
    K.finalize();
    return K;
}

Atlas two_chart_full_overlap() {
    Atlas K;
    K.base = circle(2);
    K.basic_ids = {1, 2};
    K.basic_groups[1] = FiniteGroup::cyclic(2);
    K.basic_groups[2] = FiniteGroup::cyclic(2, "t");

    // Both basic charts are C_4 double covers of C_2 via rotation by 2.
    auto make_basic = [&](int id, const std::string& pre) {
        Chart ch;
        ch.index = {id};
        ch.space = circle(4, pre);
        ch.group = product_group(K.basic_groups, {id});
        int n = ch.space.size();
        ch.action.act.assign(2, std::vector<int>(n));
        for (int p = 0; p < n; ++p) ch.action.act[0][p] = p;
        for (int i = 0; i < 4; ++i) {
            ch.action.act[1][i] = (i + 2) % 4;         // a_i -> a_{i+2}
            ch.action.act[1][4 + i] = 4 + (i + 2) % 4; // b_i -> b_{i+2}
        }
        ch.footprint_map.assign.resize(n);
        for (int i = 0; i < 4; ++i) {
            ch.footprint_map.assign[i] = i % 2;           // a_i -> a_{i mod 2}
            ch.footprint_map.assign[4 + i] = 2 + (i % 2); // b_i -> b_{i mod 2}
        }
        return ch;
    };
    Chart c1 = make_basic(1, "x");
    Chart c2 = make_basic(2, "y");

    // W_12 is the pullback {(x, y) : psi_1 x = psi_2 y}.
    Chart c12;
    c12.index = {1, 2};
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < c1.space.size(); ++x)
        for (int y = 0; y < c2.space.size(); ++y)
            if (c1.footprint_map(x) == c2.footprint_map(y)) pairs.push_back({x, y});
    {
        std::vector<std::string> names;
        for (auto& [x, y] : pairs) names.push_back(c1.space.name(x) + "&" + c2.space.name(y));
        std::vector<std::pair<int, int>> covers;
        for (size_t a = 0; a < pairs.size(); ++a)
            for (size_t b = 0; b < pairs.size(); ++b)
                if (a != b && c1.space.le(pairs[a].first, pairs[b].first) &&
                    c2.space.le(pairs[a].second, pairs[b].second))
                    covers.push_back({static_cast<int>(a), static_cast<int>(b)});
        c12.space = FiniteSpace::from_covers(std::move(names), covers);
    }
    c12.group = product_group(K.basic_groups, {1, 2});
    auto pair_idx = [&](int x, int y) {
        for (size_t k = 0; k < pairs.size(); ++k)
            if (pairs[k].first == x && pairs[k].second == y) return static_cast<int>(k);
        throw std::logic_error("pullback pair missing");
    };
    c12.action.act.assign(c12.group.order(), std::vector<int>(pairs.size()));
    for (int g = 0; g < c12.group.order(); ++g) {
        auto comps = c12.group.decode(g);
        for (size_t k = 0; k < pairs.size(); ++k)
            c12.action.act[g][k] =
                pair_idx(c1.action.act[comps[0]][pairs[k].first],
                         c2.action.act[comps[1]][pairs[k].second]);
    }
    c12.footprint_map.assign.resize(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k)
        c12.footprint_map.assign[k] = c1.footprint_map(pairs[k].first);

    K.charts = {std::move(c1), std::move(c2), std::move(c12)};
    {
        Covering cov;
        cov.sub = 0;
        cov.sup = 2;
        for (auto& [x, y] : pairs) cov.rho.assign.push_back(x);
        K.coverings[{0, 2}] = std::move(cov);
    }
    {
        Covering cov;
        cov.sub = 1;
        cov.sup = 2;
        for (auto& [x, y] : pairs) cov.rho.assign.push_back(y);
        K.coverings[{1, 2}] = std::move(cov);
    }
    K.finalize();
    return K;
}

// ---------------------------------------------------------------------------
// Gerbe fixtures.

namespace {

// Label arithmetic in Z2^I / diagonal: normalized bit masks over the sorted
// index set, first coordinate forced to zero.
int normalize_label(int bits, int width) {
    if (bits & 1) bits ^= (1 << width) - 1;
    return bits;
}

int restrict_bits(int bits, const IndexSet& from, const IndexSet& to) {
    int out = 0;
    for (size_t k = 0; k < to.size(); ++k) {
        auto it = std::find(from.begin(), from.end(), to[k]);
        if ((bits >> (it - from.begin())) & 1) out |= 1 << k;
    }
    return out;
}

} // namespace

namespace {

// Two-chart noneffective Z2 structure on the football base; the transition
// domain is a double band over F_12, connected exactly in the nontrivial
// case (crossed rungs), disconnected in the trivial one.
Atlas gerbe_two_chart(bool trivial) {
    Atlas base_atlas = football();
    Atlas K;
    K.base = base_atlas.base;
    K.basic_ids = {1, 2};
    K.basic_groups[1] = FiniteGroup::cyclic(2);
    K.basic_groups[2] = FiniteGroup::cyclic(2, "t");

    auto identity_chart = [&](int id, const std::vector<int>& footprint) {
        Chart ch;
        ch.index = {id};
        auto [sp, keep] = K.base.subspace(footprint);
        ch.space = std::move(sp);
        ch.group = product_group(K.basic_groups, {id});
        int n = static_cast<int>(keep.size());
        ch.action.act.assign(2, std::vector<int>(n));
        for (int g = 0; g < 2; ++g)
            for (int p = 0; p < n; ++p) ch.action.act[g][p] = p; // trivial Z2
        ch.footprint_map.assign = keep;
        ch.orientation = std::vector<int>(n, 1);
        return std::make_pair(ch, keep);
    };
    auto [c1, keep1] = identity_chart(1, base_atlas.chart(0).footprint);
    auto [c2, keep2] = identity_chart(2, base_atlas.chart(1).footprint);

    // Double band over F_12 = the band region of the base.
    std::vector<int> f12 = base_atlas.chart(2).footprint;
    auto [band, band_pts] = K.base.subspace(f12);
    Chart c12;
    c12.index = {1, 2};
    int n = band.size();
    {
        std::vector<std::string> names;
        for (int p = 0; p < n; ++p) names.push_back(band.name(p) + "A");
        for (int p = 0; p < n; ++p) names.push_back(band.name(p) + "B");
        std::vector<std::pair<int, int>> covers;
        for (auto [lo, hi] : band.hasse_pairs()) {
            covers.push_back({lo, hi});
            covers.push_back({n + lo, n + hi});
            // The nontrivial variant doubles one rung: both lifts of d2 sit
            // below both lifts of u2, which makes the double band connected
            // while the swap quotient still collapses to the plain band.
            if (!trivial && band.name(lo) == "d2" && band.name(hi) == "u2") {
                covers.push_back({lo, n + hi});
                covers.push_back({n + lo, hi});
            }
        }
        c12.space = FiniteSpace::from_covers(std::move(names), covers);
    }
    c12.group = product_group(K.basic_groups, {1, 2});
    c12.action.act.assign(4, std::vector<int>(2 * n));
    for (int g = 0; g < 4; ++g) {
        auto comps = c12.group.decode(g);
        bool swap = (comps[0] + comps[1]) % 2 == 1; // effective Z2 = Z2xZ2 / diagonal
        for (int p = 0; p < 2 * n; ++p)
            c12.action.act[g][p] = swap ? (p + n) % (2 * n) : p;
    }
    c12.footprint_map.assign.resize(2 * n);
    for (int p = 0; p < n; ++p) {
        c12.footprint_map.assign[p] = band_pts[p];
        c12.footprint_map.assign[n + p] = band_pts[p];
    }
    c12.orientation = std::vector<int>(2 * n, 1);

    K.charts = {std::move(c1), std::move(c2), std::move(c12)};

    auto local_in = [](const std::vector<int>& keep, int wpt) {
        return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), wpt) - keep.begin());
    };
    Covering cov1;
    cov1.sub = 0;
    cov1.sup = 2;
    cov1.rho.assign.resize(2 * n);
    Covering cov2;
    cov2.sub = 1;
    cov2.sup = 2;
    cov2.rho.assign.resize(2 * n);
    for (int p = 0; p < 2 * n; ++p) {
        int y = band_pts[p % n];
        cov1.rho.assign[p] = local_in(keep1, y);
        cov2.rho.assign[p] = local_in(keep2, y);
    }
    K.coverings[{0, 2}] = std::move(cov1);
    K.coverings[{1, 2}] = std::move(cov2);
    K.finalize();
    return K;
}

} // namespace

Atlas gerbe(bool trivial, int charts) {
    if (charts == 2) return gerbe_two_chart(trivial);
    if (charts != 4 && charts != 5)
        throw std::invalid_argument("gerbe fixture supports 2, 4 or 5 charts");
    const int P = 40;
    Atlas K;
    K.base = position_circle(P);
    for (int i = 0; i < charts; ++i) {
        K.basic_ids.push_back(i);
        K.basic_groups[i] = FiniteGroup::cyclic(2);
    }

    std::map<int, std::vector<int>> fp;
    for (int i = 0; i < 4; ++i) fp[i] = cyclic_arc(P, 10 * i + 11, 10 * i + 39);
    if (charts == 5) fp[4] = cyclic_arc(P, 33, 37);

    // Twists on covering pairs: the nontrivial fixture twists {0,1} < {0,1,3}.
    std::map<std::pair<IndexSet, IndexSet>, int> twist; // bits over the sub index
    if (!trivial) twist[{IndexSet{0, 1}, IndexSet{0, 1, 3}}] = 0b01; // component of id 0

    std::vector<IndexSet> isets;
    std::map<IndexSet, std::vector<int>> region;
    for (int mask = 1; mask < (1 << charts); ++mask) {
        IndexSet I;
        for (int k = 0; k < charts; ++k)
            if (mask & (1 << k)) I.push_back(k);
        std::set<int> inter(fp[I[0]].begin(), fp[I[0]].end());
        for (int i : I) {
            std::set<int> next;
            for (int p : fp[i])
                if (inter.count(p)) next.insert(p);
            inter = next;
        }
        if (inter.empty()) continue;
        isets.push_back(I);
        region[I] = std::vector<int>(inter.begin(), inter.end());
    }
    std::sort(isets.begin(), isets.end(), [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::map<IndexSet, int> chart_of;
    for (auto& I : isets) {
        Chart ch;
        ch.index = I;
        auto& pts = region[I];
        auto [fsp, keep] = K.base.subspace(pts);
        int width = static_cast<int>(I.size());
        int labels = 1 << (width - 1);
        // Points: label-major copies of the footprint subspace.
        std::vector<std::string> names;
        std::vector<std::pair<int, int>> covers;
        for (int l = 0; l < labels; ++l) {
            int off = l * fsp.size();
            for (int p = 0; p < fsp.size(); ++p)
                names.push_back(fsp.name(p) + "#" + std::to_string(l));
            for (auto [lo, hi] : fsp.hasse_pairs()) covers.push_back({off + lo, off + hi});
        }
        ch.space = FiniteSpace::from_covers(std::move(names), covers);
        ch.group = product_group(K.basic_groups, I);
        int n = ch.space.size();
        ch.action.act.assign(ch.group.order(), std::vector<int>(n));
        for (int g = 0; g < ch.group.order(); ++g) {
            auto comps = ch.group.decode(g);
            int gbits = 0;
            for (size_t k = 0; k < comps.size(); ++k)
                if (comps[k]) gbits |= 1 << k;
            for (int l = 0; l < labels; ++l) {
                int nl = normalize_label((l << 1) ^ gbits, width) >> 1;
                for (int p = 0; p < fsp.size(); ++p)
                    ch.action.act[g][l * fsp.size() + p] = nl * fsp.size() + p;
            }
        }
        ch.footprint_map.assign.resize(n);
        for (int l = 0; l < labels; ++l)
            for (int p = 0; p < fsp.size(); ++p)
                ch.footprint_map.assign[l * fsp.size() + p] = keep[p];
        chart_of[I] = static_cast<int>(K.charts.size());
        K.charts.push_back(std::move(ch));
    }

    for (auto& I : isets)
        for (auto& J : isets) {
            if (I == J || !iset_subset(I, J)) continue;
            int ci = chart_of[I], cj = chart_of[J];
            const auto& ptsI = region[I];
            const auto& ptsJ = region[J];
            int szI = static_cast<int>(ptsI.size());
            int szJ = static_cast<int>(ptsJ.size());
            int wI = static_cast<int>(I.size());
            int wJ = static_cast<int>(J.size());
            int t = 0;
            if (auto it = twist.find({I, J}); it != twist.end()) t = it->second;
            Covering cov;
            cov.sub = ci;
            cov.sup = cj;
            cov.rho.assign.resize(K.charts[cj].space.size());
            for (int l = 0; l < (1 << (wJ - 1)); ++l) {
                int bitsJ = l << 1;
                int bitsI = normalize_label(restrict_bits(bitsJ, J, I) ^ t, wI) >> 1;
                for (int p = 0; p < szJ; ++p) {
                    int y = ptsJ[p];
                    int pI = static_cast<int>(
                        std::lower_bound(ptsI.begin(), ptsI.end(), y) - ptsI.begin());
                    cov.rho.assign[l * szJ + p] = bitsI * szI + pI;
                }
            }
            K.coverings[{ci, cj}] = std::move(cov);
        }
    K.finalize();
    return K;
}

Atlas football_extended() {
    Atlas K = football();
    K.basic_ids = {1, 2, 3};
    K.basic_groups[3] = FiniteGroup::trivial();
    int u4 = *K.base.index_of("u4");

    const Chart& W1 = K.chart(0);
    const Chart& W2 = K.chart(1);
    const Chart& W12 = K.chart(2);

    auto fiber_points = [&](const Chart& ch) {
        std::vector<int> pts;
        for (int p = 0; p < ch.space.size(); ++p)
            if (ch.footprint_map(p) == u4) pts.push_back(p);
        return pts;
    };
    auto sub_chart = [&](const Chart& parent, IndexSet idx) {
        Chart ch;
        ch.index = idx;
        auto pts = fiber_points(parent);
        auto [sp, keep] = parent.space.subspace(pts);
        ch.space = std::move(sp);
        ch.group = product_group(K.basic_groups, idx);
        // The new group is the parent group (times a trivial factor); actions
        // restrict to the fiber.
        ch.action.act.assign(ch.group.order(), std::vector<int>(keep.size()));
        for (int g = 0; g < ch.group.order(); ++g) {
            auto comps = ch.group.decode(g);
            // parent's factors are the non-3 components, in order
            std::vector<int> pcomps;
            for (size_t k = 0; k < idx.size(); ++k)
                if (idx[k] != 3) pcomps.push_back(comps[k]);
            int pg = parent.group.encode(pcomps);
            for (size_t p = 0; p < keep.size(); ++p) {
                int img = parent.action.act[pg][keep[p]];
                ch.action.act[g][p] = static_cast<int>(
                    std::lower_bound(keep.begin(), keep.end(), img) - keep.begin());
            }
        }
        ch.footprint_map.assign.assign(keep.size(), u4);
        ch.orientation = std::vector<int>(keep.size(), 1);
        return std::make_pair(ch, keep);
    };

    // W_3: the footprint itself with the trivial group.
    Chart c3;
    c3.index = {3};
    c3.space = FiniteSpace::discrete({"w3u4"});
    c3.group = product_group(K.basic_groups, {3});
    c3.action.act = {{0}};
    c3.footprint_map.assign = {u4};
    c3.orientation = std::vector<int>(1, 1);

    auto [c13, keep13] = sub_chart(W1, {1, 3});
    auto [c23, keep23] = sub_chart(W2, {2, 3});
    auto [c123, keep123] = sub_chart(W12, {1, 2, 3});

    int id3 = K.num_charts();
    K.charts.push_back(c3);
    int id13 = K.num_charts();
    K.charts.push_back(c13);
    int id23 = K.num_charts();
    K.charts.push_back(c23);
    int id123 = K.num_charts();
    K.charts.push_back(c123);

    auto local_in = [](const std::vector<int>& keep, int wpt) {
        return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), wpt) - keep.begin());
    };

    auto add_cov = [&](int sub, int sup, std::vector<int> rho) {
        Covering cov;
        cov.sub = sub;
        cov.sup = sup;
        cov.rho.assign = std::move(rho);
        K.coverings[{sub, sup}] = std::move(cov);
    };

    // Collapses to W_3.
    add_cov(id3, id13, std::vector<int>(keep13.size(), 0));
    add_cov(id3, id23, std::vector<int>(keep23.size(), 0));
    add_cov(id3, id123, std::vector<int>(keep123.size(), 0));
    // Inclusions into the football charts.
    add_cov(0, id13, keep13);
    add_cov(1, id23, keep23);
    {
        // rho_{1,123} = rho_{1,12} restricted; similarly for 2 and 12.
        std::vector<int> to1, to2, to12;
        for (int wpt : keep123) {
            to1.push_back(K.rho(0, 2, wpt));
            to2.push_back(K.rho(1, 2, wpt));
            to12.push_back(wpt);
        }
        add_cov(0, id123, to1);
        add_cov(1, id123, to2);
        add_cov(2, id123, to12);
    }
    // {1,3} <= {1,2,3} and {2,3} <= {1,2,3}.
    {
        std::vector<int> r13, r23;
        for (int wpt : keep123) {
            r13.push_back(local_in(keep13, K.rho(0, 2, wpt)));
            r23.push_back(local_in(keep23, K.rho(1, 2, wpt)));
        }
        add_cov(id13, id123, r13);
        add_cov(id23, id123, r23);
    }
    K.finalize();
    return K;
}

Atlas product_fixture() { return product_atlas(football(), one_chart()); }

PointOrbifold point_orbifold_z2(int n_charts) {
    std::vector<FiniteGroup> gs(n_charts, FiniteGroup::cyclic(2));
    FiniteGroup s = FiniteGroup::trivial();
    std::vector<std::vector<int>> emb(n_charts, std::vector<int>{0});
    return point_orbifold(gs, s, emb);
}

PointOrbifold point_orbifold_z2z2(int n_charts) {
    std::map<int, FiniteGroup> basics{{0, FiniteGroup::cyclic(2)}, {1, FiniteGroup::cyclic(2, "q")}};
    ProductGroup z2z2 = product_group(basics, {0, 1});
    std::vector<FiniteGroup> gs(n_charts, z2z2.grp);
    FiniteGroup s = FiniteGroup::cyclic(2);
    // S = Z2 embeds diagonally: generator -> (g, q).
    int diag = z2z2.encode({1, 1});
    std::vector<std::vector<int>> emb(n_charts, std::vector<int>{z2z2.id(), diag});
    return point_orbifold(gs, s, emb);
}

PointOrbifold point_orbifold_s3(int n_charts) {
    FiniteGroup s3 = FiniteGroup::symmetric3();
    std::vector<FiniteGroup> gs(n_charts, s3);
    FiniteGroup s = FiniteGroup::cyclic(3);
    // Z3 = A3 inside S3: generator -> the 3-cycle "c".
    std::vector<std::vector<int>> emb(n_charts, std::vector<int>{0, 1, 2});
    return point_orbifold(gs, s, emb);
}

} // namespace fixtures
} // namespace orb
