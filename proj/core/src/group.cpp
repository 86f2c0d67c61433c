#include "orbatlas/group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace orb {

std::optional<std::string> FiniteGroup::check_table_only() const {
    int n = order();
    if (static_cast<int>(table.size()) != n) return "table row count mismatch";
    for (auto& row : table) {
        if (static_cast<int>(row.size()) != n) return "table column count mismatch";
        for (int v : row)
            if (v < 0 || v >= n) return "table entry out of range";
    }
    if (identity < 0 || identity >= n) return "identity out of range";
    for (int a = 0; a < n; ++a)
        if (table[identity][a] != a || table[a][identity] != a)
            return "identity law fails at " + elems[a];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    return "associativity fails at (" + elems[a] + "," + elems[b] + "," + elems[c] + ")";
    return std::nullopt;
}

std::optional<std::string> FiniteGroup::check() const {
    int n = order();
    if (static_cast<int>(table.size()) != n) return "table row count mismatch";
    for (auto& row : table) {
        if (static_cast<int>(row.size()) != n) return "table column count mismatch";
        for (int v : row)
            if (v < 0 || v >= n) return "table entry out of range";
    }
    if (identity < 0 || identity >= n) return "identity out of range";
    for (int a = 0; a < n; ++a)
        if (table[identity][a] != a || table[a][identity] != a)
            return "identity law fails at " + elems[a];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    return "associativity fails at (" + elems[a] + "," + elems[b] + "," + elems[c] + ")";
    if (static_cast<int>(inverse.size()) != n) return "inverse table size mismatch";
    for (int a = 0; a < n; ++a)
        if (table[a][inverse[a]] != identity || table[inverse[a]][a] != identity)
            return "inverse law fails at " + elems[a];
    return std::nullopt;
}

void FiniteGroup::compute_inverses() {
    int n = order();
    inverse.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table[a][b] == identity) { inverse[a] = b; break; }
    for (int a = 0; a < n; ++a)
        if (inverse[a] < 0) throw std::invalid_argument("element without inverse: " + elems[a]);
}

FiniteGroup FiniteGroup::trivial() {
    FiniteGroup g;
    g.elems = {"e"};
    g.table = {{0}};
    g.identity = 0;
    g.inverse = {0};
    return g;
}

FiniteGroup FiniteGroup::cyclic(int n, const std::string& prefix) {
    FiniteGroup g;
    for (int i = 0; i < n; ++i) g.elems.push_back(i == 0 ? "e" : prefix + std::to_string(i));
    g.table.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
    g.identity = 0;
    g.compute_inverses();
    return g;
}

FiniteGroup FiniteGroup::symmetric3() {
    // Permutations of {0,1,2} listed as one-line notation.
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                    {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    static const char* names[6] = {"e", "c", "cc", "s01", "s12", "s02"};
    FiniteGroup g;
    for (auto* n : names) g.elems.push_back(n);
    g.table.assign(6, std::vector<int>(6, -1));
    auto compose = [&](int a, int b) { // apply b first, then a
        int p[3];
        for (int i = 0; i < 3; ++i) p[i] = perms[a][perms[b][i]];
        for (int k = 0; k < 6; ++k)
            if (p[0] == perms[k][0] && p[1] == perms[k][1] && p[2] == perms[k][2]) return k;
        return -1;
    };
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) g.table[a][b] = compose(a, b);
    g.identity = 0;
    g.compute_inverses();
    return g;
}

std::vector<int> FiniteGroup::subgroup_closure(std::vector<int> gens) const {
    std::set<int> have(gens.begin(), gens.end());
    have.insert(identity);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(have.begin(), have.end());
        for (int a : cur)
            for (int b : cur) {
                if (have.insert(mul(a, b)).second) grew = true;
                if (have.insert(inv(a)).second) grew = true;
            }
    }
    return {have.begin(), have.end()};
}

IndexSet iset_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IndexSet iset_intersect(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IndexSet iset_minus(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool iset_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string iset_str(const IndexSet& I) {
    std::string s = "{";
    for (size_t i = 0; i < I.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(I[i]);
    }
    return s + "}";
}

std::vector<int> ProductGroup::decode(int code) const {
    std::vector<int> comps(index.size());
    for (size_t k = 0; k < index.size(); ++k) {
        comps[k] = code / stride[k];
        code %= stride[k];
    }
    return comps;
}

int ProductGroup::encode(const std::vector<int>& comps) const {
    int code = 0;
    for (size_t k = 0; k < index.size(); ++k) code += comps[k] * stride[k];
    return code;
}

int ProductGroup::project(int code, const ProductGroup& sub) const {
    auto comps = decode(code);
    std::vector<int> out(sub.index.size());
    for (size_t k = 0; k < sub.index.size(); ++k) {
        auto it = std::lower_bound(index.begin(), index.end(), sub.index[k]);
        if (it == index.end() || *it != sub.index[k])
            throw std::invalid_argument("project: " + iset_str(sub.index) + " not a subset of " +
                                        iset_str(index));
        out[k] = comps[it - index.begin()];
    }
    return sub.encode(out);
}

int ProductGroup::embed(int code, const ProductGroup& super) const {
    auto comps = decode(code);
    std::vector<int> out(super.index.size());
    for (size_t k = 0; k < super.index.size(); ++k) out[k] = super.factors[k].identity;
    for (size_t k = 0; k < index.size(); ++k) {
        auto it = std::lower_bound(super.index.begin(), super.index.end(), index[k]);
        if (it == super.index.end() || *it != index[k])
            throw std::invalid_argument("embed: " + iset_str(index) + " not a subset of " +
                                        iset_str(super.index));
        out[it - super.index.begin()] = comps[k];
    }
    return super.encode(out);
}

std::pair<int, int> ProductGroup::split(int code, const IndexSet& K) const {
    auto comps = decode(code);
    std::vector<int> in_k(comps.size()), out_k(comps.size());
    for (size_t k = 0; k < index.size(); ++k) {
        bool mem = std::binary_search(K.begin(), K.end(), index[k]);
        in_k[k] = mem ? comps[k] : factors[k].identity;
        out_k[k] = mem ? factors[k].identity : comps[k];
    }
    int a = encode(in_k), b = encode(out_k);
    // b == code * a^{-1} holds because the supports are disjoint.
    return {a, b};
}

ProductGroup product_group(const std::map<int, FiniteGroup>& basic, const IndexSet& I) {
    ProductGroup pg;
    pg.index = I;
    for (int i : I) {
        auto it = basic.find(i);
        if (it == basic.end())
            throw std::invalid_argument("product_group: missing factor for index " + std::to_string(i));
        pg.factors.push_back(it->second);
    }
    int n = 1;
    pg.stride.assign(I.size(), 1);
    for (int k = static_cast<int>(I.size()) - 1; k >= 0; --k) {
        pg.stride[k] = n;
        n *= pg.factors[k].order();
    }
    // Materialize the Cayley table; fixture groups stay small.
    pg.grp.elems.resize(n);
    for (int c = 0; c < n; ++c) {
        auto comps = pg.decode(c);
        std::string nm = "(";
        for (size_t k = 0; k < comps.size(); ++k) {
            if (k) nm += ",";
            nm += pg.factors[k].elems[comps[k]];
        }
        nm += ")";
        pg.grp.elems[c] = comps.empty() ? "()" : nm;
    }
    pg.grp.table.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a) {
        auto ca = pg.decode(a);
        for (int b = 0; b < n; ++b) {
            auto cb = pg.decode(b);
            std::vector<int> cc(ca.size());
            for (size_t k = 0; k < ca.size(); ++k) cc[k] = pg.factors[k].mul(ca[k], cb[k]);
            pg.grp.table[a][b] = pg.encode(cc);
        }
    }
    std::vector<int> idc(I.size());
    for (size_t k = 0; k < I.size(); ++k) idc[k] = pg.factors[k].identity;
    pg.grp.identity = pg.encode(idc);
    pg.grp.compute_inverses();
    return pg;
}

std::optional<std::string> verify_action(const FiniteGroup& g, const FiniteSpace& s,
                                         const FiniteGroupAction& a) {
    if (static_cast<int>(a.act.size()) != g.order()) return "action row count mismatch";
    for (auto& row : a.act) {
        if (static_cast<int>(row.size()) != s.size()) return "action column count mismatch";
        for (int v : row)
            if (v < 0 || v >= s.size()) return "action entry out of range";
    }
    for (int x = 0; x < s.size(); ++x)
        if (a.act[g.identity][x] != x) return "identity does not act trivially at " + s.name(x);
    for (int h = 0; h < g.order(); ++h)
        for (int k = 0; k < g.order(); ++k)
            for (int x = 0; x < s.size(); ++x)
                if (a.act[h][a.act[k][x]] != a.act[g.mul(h, k)][x])
                    return "action law fails at (" + g.elems[h] + "," + g.elems[k] + "," + s.name(x) + ")";
    for (int h = 0; h < g.order(); ++h)
        if (!s.is_automorphism(a.act[h]))
            return "element " + g.elems[h] + " is not an order automorphism";
    return std::nullopt;
}

std::vector<int> orbit_of(const FiniteGroupAction& a, const FiniteGroup& g, int x) {
    std::set<int> pts;
    for (int h = 0; h < g.order(); ++h) pts.insert(a.act[h][x]);
    return {pts.begin(), pts.end()};
}

std::vector<int> stabilizer_elems(const FiniteGroupAction& a, const FiniteGroup& g, int x) {
    std::vector<int> out;
    for (int h = 0; h < g.order(); ++h)
        if (a.act[h][x] == x) out.push_back(h);
    return out;
}

std::pair<FiniteGroup, std::vector<int>> stabilizer_group(const FiniteGroupAction& a,
                                                          const FiniteGroup& g, int x) {
    auto elems = stabilizer_elems(a, g, x);
    FiniteGroup sub;
    std::vector<int> pos(g.order(), -1);
    for (size_t k = 0; k < elems.size(); ++k) {
        pos[elems[k]] = static_cast<int>(k);
        sub.elems.push_back(g.elems[elems[k]]);
    }
    int n = static_cast<int>(elems.size());
    sub.table.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int prod = g.mul(elems[i], elems[j]);
            if (pos[prod] < 0) throw std::logic_error("stabilizer not closed under product");
            sub.table[i][j] = pos[prod];
        }
    sub.identity = pos[g.identity];
    sub.compute_inverses();
    return {std::move(sub), std::move(elems)};
}

std::vector<std::pair<int, int>> fixed_point_witnesses(const FiniteGroupAction& a,
                                                       const FiniteGroup& g,
                                                       const std::vector<int>& subgroup) {
    std::vector<std::pair<int, int>> out;
    for (int h : subgroup) {
        if (h == g.identity) continue;
        for (int x = 0; x < static_cast<int>(a.act[h].size()); ++x)
            if (a.act[h][x] == x) out.emplace_back(h, x);
    }
    return out;
}

} // namespace orb
