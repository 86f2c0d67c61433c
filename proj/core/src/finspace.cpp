#include "orbatlas/finspace.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace orb {

namespace {

std::vector<bool> to_mask(int n, const std::vector<int>& subset) {
    std::vector<bool> m(n, false);
    for (int p : subset) {
        if (p < 0 || p >= n) throw std::out_of_range("point index out of range");
        m[p] = true;
    }
    return m;
}

std::vector<int> from_mask(const std::vector<bool>& m) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
        if (m[i]) out.push_back(i);
    return out;
}

} // namespace

FiniteSpace FiniteSpace::from_covers(std::vector<std::string> names,
                                     const std::vector<std::pair<int, int>>& covers) {
    FiniteSpace s;
    int n = static_cast<int>(names.size());
    s.names_ = std::move(names);
    s.le_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) s.le_[i][i] = true;
    for (auto [lo, hi] : covers) {
        if (lo < 0 || lo >= n || hi < 0 || hi >= n)
            throw std::out_of_range("cover relation index out of range");
        s.le_[lo][hi] = true;
    }
    // Warshall closure; n stays small in every fixture.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (s.le_[i][k])
                for (int j = 0; j < n; ++j)
                    if (s.le_[k][j]) s.le_[i][j] = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (s.le_[i][j] && s.le_[j][i])
                throw std::invalid_argument("order relation has a cycle: " + s.names_[i] +
                                            " ~ " + s.names_[j]);
    return s;
}

FiniteSpace FiniteSpace::discrete(std::vector<std::string> names) {
    return from_covers(std::move(names), {});
}

std::optional<int> FiniteSpace::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::vector<int> FiniteSpace::closure(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    std::vector<bool> out(size(), false);
    for (int y = 0; y < size(); ++y)
        if (m[y])
            for (int x = 0; x < size(); ++x)
                if (le_[x][y]) out[x] = true;
    return from_mask(out);
}

std::vector<int> FiniteSpace::up_closure(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    std::vector<bool> out(size(), false);
    for (int x = 0; x < size(); ++x)
        if (m[x])
            for (int y = 0; y < size(); ++y)
                if (le_[x][y]) out[y] = true;
    return from_mask(out);
}

std::vector<int> FiniteSpace::frontier(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    std::vector<int> out;
    for (int p : closure(subset))
        if (!m[p]) out.push_back(p);
    return out;
}

std::vector<int> FiniteSpace::min_open_nbhd(int p) const {
    return up_closure({p});
}

bool FiniteSpace::is_open(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    for (int x : subset)
        for (int y = 0; y < size(); ++y)
            if (le_[x][y] && !m[y]) return false;
    return true;
}

bool FiniteSpace::is_closed(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    for (int y : subset)
        for (int x = 0; x < size(); ++x)
            if (le_[x][y] && !m[x]) return false;
    return true;
}

std::vector<std::vector<int>> FiniteSpace::components(const std::vector<int>& subset) const {
    std::vector<int> pts = subset;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    int m = static_cast<int>(pts.size());
    std::vector<int> comp(m, -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < m; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i}, group;
        comp[i] = static_cast<int>(out.size());
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            group.push_back(pts[a]);
            for (int b = 0; b < m; ++b)
                if (comp[b] < 0 && (le_[pts[a]][pts[b]] || le_[pts[b]][pts[a]])) {
                    comp[b] = comp[i];
                    stack.push_back(b);
                }
        }
        std::sort(group.begin(), group.end());
        out.push_back(std::move(group));
    }
    return out;
}

std::pair<FiniteSpace, std::vector<int>> FiniteSpace::subspace(const std::vector<int>& subset) const {
    std::vector<int> pts = subset;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    FiniteSpace s;
    for (int p : pts) s.names_.push_back(names_[p]);
    int m = static_cast<int>(pts.size());
    s.le_.assign(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s.le_[i][j] = le_[pts[i]][pts[j]];
    return {std::move(s), std::move(pts)};
}

FiniteSpace FiniteSpace::product(const FiniteSpace& a, const FiniteSpace& b) {
    FiniteSpace s;
    int n = a.size() * b.size();
    s.names_.reserve(n);
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y) s.names_.push_back(a.name(x) + "*" + b.name(y));
    s.le_.assign(n, std::vector<bool>(n, false));
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y)
            for (int u = 0; u < a.size(); ++u)
                for (int v = 0; v < b.size(); ++v)
                    s.le_[x * b.size() + y][u * b.size() + v] = a.le(x, u) && b.le(y, v);
    return s;
}

std::pair<FiniteSpace, std::vector<int>> FiniteSpace::disjoint_union(
    const std::vector<const FiniteSpace*>& parts) {
    FiniteSpace s;
    std::vector<int> offsets;
    int n = 0;
    for (auto* p : parts) {
        offsets.push_back(n);
        n += p->size();
    }
    s.le_.assign(n, std::vector<bool>(n, false));
    for (size_t k = 0; k < parts.size(); ++k) {
        const FiniteSpace& p = *parts[k];
        for (int i = 0; i < p.size(); ++i) {
            s.names_.push_back(p.name(i));
            for (int j = 0; j < p.size(); ++j)
                s.le_[offsets[k] + i][offsets[k] + j] = p.le(i, j);
        }
    }
    return {std::move(s), std::move(offsets)};
}

std::vector<std::pair<int, int>> FiniteSpace::hasse_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < size(); ++x)
        for (int y = 0; y < size(); ++y) {
            if (x == y || !le_[x][y]) continue;
            bool direct = true;
            for (int z = 0; z < size(); ++z)
                if (z != x && z != y && le_[x][z] && le_[z][y]) { direct = false; break; }
            if (direct) out.emplace_back(x, y);
        }
    return out;
}

std::vector<int> FiniteSpace::open_core(const std::vector<int>& subset) const {
    auto m = to_mask(size(), subset);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < size(); ++x) {
            if (!m[x]) continue;
            for (int y = 0; y < size(); ++y)
                if (le_[x][y] && !m[y]) { m[x] = false; changed = true; break; }
        }
    }
    return from_mask(m);
}

bool FiniteSpace::is_automorphism(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != size()) return false;
    std::vector<bool> seen(size(), false);
    for (int p : perm) {
        if (p < 0 || p >= size() || seen[p]) return false;
        seen[p] = true;
    }
    for (int x = 0; x < size(); ++x)
        for (int y = 0; y < size(); ++y)
            if (le_[x][y] != le_[perm[x]][perm[y]]) return false;
    return true;
}

bool is_order_preserving(const FiniteSpace& src, const FiniteSpace& dst, const SpaceMap& f) {
    if (static_cast<int>(f.assign.size()) != src.size()) return false;
    for (int v : f.assign)
        if (v < 0 || v >= dst.size()) return false;
    for (int x = 0; x < src.size(); ++x)
        for (int y = 0; y < src.size(); ++y)
            if (src.le(x, y) && !dst.le(f(x), f(y))) return false;
    return true;
}

bool is_space_iso_map(const FiniteSpace& a, const FiniteSpace& b, const std::vector<int>& bij) {
    if (a.size() != b.size() || static_cast<int>(bij.size()) != a.size()) return false;
    std::vector<bool> seen(b.size(), false);
    for (int v : bij) {
        if (v < 0 || v >= b.size() || seen[v]) return false;
        seen[v] = true;
    }
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < a.size(); ++y)
            if (a.le(x, y) != b.le(bij[x], bij[y])) return false;
    return true;
}

namespace {

// Degree profile used to prune the isomorphism search.
std::vector<std::pair<int, int>> iso_profile(const FiniteSpace& s) {
    std::vector<std::pair<int, int>> prof(s.size());
    for (int x = 0; x < s.size(); ++x) {
        int up = 0, down = 0;
        for (int y = 0; y < s.size(); ++y) {
            if (s.le(x, y)) ++up;
            if (s.le(y, x)) ++down;
        }
        prof[x] = {up, down};
    }
    return prof;
}

bool iso_search(const FiniteSpace& a, const FiniteSpace& b,
                const std::vector<std::pair<int, int>>& pa,
                const std::vector<std::pair<int, int>>& pb,
                std::vector<int>& map, std::vector<bool>& used, int x) {
    if (x == a.size()) return true;
    for (int y = 0; y < b.size(); ++y) {
        if (used[y] || pa[x] != pb[y]) continue;
        bool ok = true;
        for (int z = 0; z < x && ok; ++z)
            ok = (a.le(x, z) == b.le(y, map[z])) && (a.le(z, x) == b.le(map[z], y));
        if (!ok) continue;
        map[x] = y;
        used[y] = true;
        if (iso_search(a, b, pa, pb, map, used, x + 1)) return true;
        used[y] = false;
    }
    return false;
}

} // namespace

std::optional<std::vector<int>> find_space_iso(const FiniteSpace& a, const FiniteSpace& b) {
    if (a.size() != b.size()) return std::nullopt;
    auto pa = iso_profile(a), pb = iso_profile(b);
    {
        auto sa = pa, sb = pb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }
    std::vector<int> map(a.size(), -1);
    std::vector<bool> used(a.size(), false);
    if (iso_search(a, b, pa, pb, map, used, 0)) return map;
    return std::nullopt;
}

QuotientResult quotient_space(const FiniteSpace& s, const std::vector<int>& cls_of) {
    if (static_cast<int>(cls_of.size()) != s.size())
        throw std::invalid_argument("quotient_space: partition size mismatch");
    // Densify class labels.
    std::map<int, int> dense;
    for (int c : cls_of)
        if (!dense.count(c)) {
            int k = static_cast<int>(dense.size());
            dense[c] = k;
        }
    int m = static_cast<int>(dense.size());
    std::vector<int> cls(s.size());
    for (int p = 0; p < s.size(); ++p) cls[p] = dense.at(cls_of[p]);

    // Finest preorder making the projection order-preserving.
    std::vector<std::vector<bool>> le(m, std::vector<bool>(m, false));
    for (int c = 0; c < m; ++c) le[c][c] = true;
    for (int x = 0; x < s.size(); ++x)
        for (int y = 0; y < s.size(); ++y)
            if (s.le(x, y)) le[cls[x]][cls[y]] = true;
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            if (le[i][k])
                for (int j = 0; j < m; ++j)
                    if (le[k][j]) le[i][j] = true;

    // T0-ification: collapse order-cycles.
    std::vector<int> rep(m);
    std::iota(rep.begin(), rep.end(), 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j)
            if (le[i][j] && le[j][i]) rep[i] = rep[j];
    std::map<int, int> final_of;
    for (int c = 0; c < m; ++c)
        if (rep[c] == c) {
            int k = static_cast<int>(final_of.size());
            final_of[c] = k;
        }
    int fm = static_cast<int>(final_of.size());

    QuotientResult out;
    std::vector<std::vector<std::string>> members(fm);
    for (int p = 0; p < s.size(); ++p)
        members[final_of.at(rep[cls[p]])].push_back(s.name(p));
    FiniteSpace q;
    std::vector<std::string> names(fm);
    for (int c = 0; c < fm; ++c) {
        auto& mem = members[c];
        std::sort(mem.begin(), mem.end());
        std::string n = "[" + mem.front();
        if (mem.size() > 1) n += "|" + mem.back();
        n += "]";
        names[c] = n;
    }
    std::vector<std::pair<int, int>> rels;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (le[i][j]) rels.emplace_back(final_of.at(rep[i]), final_of.at(rep[j]));
    out.space = FiniteSpace::from_covers(std::move(names), rels);
    out.projection.assign.resize(s.size());
    for (int p = 0; p < s.size(); ++p) out.projection.assign[p] = final_of.at(rep[cls[p]]);
    return out;
}

} // namespace orb
