#include "orbatlas/groupoid.hpp"

#include <numeric>
#include <ostream>

namespace orb {

uint64_t pair_key(int a, int b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
}

std::pair<int, int> GroupoidModel::tag_of(int obj) const {
    for (int b = static_cast<int>(blocks.size()) - 1; b >= 0; --b)
        if (obj >= blocks[b].offset) return {b, obj - blocks[b].offset};
    return {-1, -1};
}

std::string GroupoidModel::obj_name(int obj) const {
    auto [b, local] = tag_of(obj);
    return iset_str(blocks[b].index) + ":" + obj_space.name(obj);
}

std::vector<std::vector<int>> GroupoidModel::out_adj() const {
    std::vector<std::vector<int>> adj(num_objects());
    for (int m = 0; m < num_mors(); ++m) adj[mors[m].src].push_back(m);
    return adj;
}

std::vector<std::vector<int>> GroupoidModel::in_adj() const {
    std::vector<std::vector<int>> adj(num_objects());
    for (int m = 0; m < num_mors(); ++m) adj[mors[m].dst].push_back(m);
    return adj;
}

Realization realize(const GroupoidModel& m) {
    // Union-find over objects joined by any morphism.
    std::vector<int> parent(m.num_objects());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& mor : m.mors) parent[find(mor.src)] = find(mor.dst);
    std::vector<int> cls(m.num_objects());
    for (int x = 0; x < m.num_objects(); ++x) cls[x] = find(x);
    auto quot = quotient_space(m.obj_space, cls);
    return {std::move(quot.space), std::move(quot.projection.assign)};
}

void verify_category_laws(const CatOps& ops, Report& rep, const std::string& tag) {
    const GroupoidModel& M = *ops.model;

    // Identities behave as units.
    bool unit_ok = true;
    std::string unit_wit;
    for (int x = 0; x < M.num_objects() && unit_ok; ++x) {
        int e = M.identity_of[x];
        if (e < 0 || e >= M.num_mors() || M.mors[e].src != x || M.mors[e].dst != x) {
            unit_ok = false;
            unit_wit = "bad identity at " + M.obj_name(x);
        }
    }
    for (int f = 0; f < M.num_mors() && unit_ok; ++f) {
        auto left = ops.compose(M.identity_of[M.mors[f].src], f);
        auto right = ops.compose(f, M.identity_of[M.mors[f].dst]);
        if (!left || *left != f || !right || *right != f) {
            unit_ok = false;
            unit_wit = "unit law fails for morphism " + std::to_string(f);
        }
    }
    rep.require(unit_ok, tag + " unit laws", unit_wit);

    auto out = M.out_adj();
    auto in = M.in_adj();

    // Composition defined exactly on matching pairs, with correct endpoints.
    bool comp_ok = true;
    std::string comp_wit;
    std::unordered_map<uint64_t, int> memo;
    memo.reserve(static_cast<size_t>(M.num_mors()) * 4);
    auto compose_memo = [&](int a, int b) -> std::optional<int> {
        auto key = pair_key(a, b);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second < 0 ? std::nullopt : std::optional<int>(it->second);
        auto r = ops.compose(a, b);
        memo[key] = r ? *r : -1;
        return r;
    };
    for (int a = 0; a < M.num_mors() && comp_ok; ++a) {
        for (int b : out[M.mors[a].dst]) {
            auto r = compose_memo(a, b);
            if (!r) {
                comp_ok = false;
                comp_wit = "undefined composite " + std::to_string(a) + ";" + std::to_string(b);
                break;
            }
            if (M.mors[*r].src != M.mors[a].src || M.mors[*r].dst != M.mors[b].dst) {
                comp_ok = false;
                comp_wit = "endpoint mismatch for " + std::to_string(a) + ";" + std::to_string(b);
                break;
            }
        }
    }
    rep.require(comp_ok, tag + " composition closure", comp_wit);
    if (!comp_ok) return;

    // Associativity over every composable triple.
    bool assoc_ok = true;
    std::string assoc_wit;
    long long triples = 0;
    for (int b = 0; b < M.num_mors() && assoc_ok; ++b) {
        for (int a : in[M.mors[b].src]) {
            auto ab = compose_memo(a, b);
            if (!ab) continue;
            for (int c : out[M.mors[b].dst]) {
                ++triples;
                auto bc = compose_memo(b, c);
                auto left = compose_memo(*ab, c);
                auto right = bc ? compose_memo(a, *bc) : std::nullopt;
                if (!bc || !left || !right || *left != *right) {
                    assoc_ok = false;
                    assoc_wit = "triple (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                std::to_string(c) + ")";
                    break;
                }
            }
            if (!assoc_ok) break;
        }
    }
    rep.require(assoc_ok, tag + " associativity (" + std::to_string(triples) + " triples)",
                assoc_wit);

    if (ops.invert) {
        bool inv_ok = true;
        std::string inv_wit;
        for (int f = 0; f < M.num_mors() && inv_ok; ++f) {
            int g = ops.invert(f);
            if (g < 0 || g >= M.num_mors() || M.mors[g].src != M.mors[f].dst ||
                M.mors[g].dst != M.mors[f].src) {
                inv_ok = false;
                inv_wit = "inverse malformed for " + std::to_string(f);
                break;
            }
            auto fg = compose_memo(f, g);
            auto gf = compose_memo(g, f);
            if (!fg || *fg != M.identity_of[M.mors[f].src] || !gf ||
                *gf != M.identity_of[M.mors[f].dst]) {
                inv_ok = false;
                inv_wit = "inverse law fails for " + std::to_string(f);
            }
        }
        rep.require(inv_ok, tag + " inverse laws", inv_wit);
    }
}

void verify_functor(const CatOps& src, const CatOps& dst, const Functor& f, Report& rep,
                    const std::string& tag) {
    const GroupoidModel& S = *src.model;
    const GroupoidModel& D = *dst.model;
    bool ok = true;
    std::string wit;
    for (int m = 0; m < S.num_mors() && ok; ++m) {
        int fm = f.mor_map[m];
        if (fm < 0 || fm >= D.num_mors() || D.mors[fm].src != f.obj_map[S.mors[m].src] ||
            D.mors[fm].dst != f.obj_map[S.mors[m].dst]) {
            ok = false;
            wit = "morphism " + std::to_string(m) + " endpoints not preserved";
        }
    }
    rep.require(ok, tag + " respects endpoints", wit);
    if (!ok) return;

    ok = true;
    for (int x = 0; x < S.num_objects() && ok; ++x)
        if (f.mor_map[S.identity_of[x]] != D.identity_of[f.obj_map[x]]) {
            ok = false;
            wit = "identity at " + S.obj_name(x);
        }
    rep.require(ok, tag + " preserves identities", wit);

    ok = true;
    auto out = S.out_adj();
    for (int a = 0; a < S.num_mors() && ok; ++a)
        for (int b : out[S.mors[a].dst]) {
            auto ab = src.compose(a, b);
            if (!ab) continue;
            auto fab = dst.compose(f.mor_map[a], f.mor_map[b]);
            if (!fab || *fab != f.mor_map[*ab]) {
                ok = false;
                wit = "composite (" + std::to_string(a) + "," + std::to_string(b) + ")";
                break;
            }
        }
    rep.require(ok, tag + " preserves composition", wit);
}

void dot_export(const GroupoidModel& m, std::ostream& os, int max_edges,
                const std::vector<int>& highlight_objects) {
    static const char* palette[] = {"lightblue", "lightgreen", "lightsalmon", "khaki",
                                    "plum",      "lightcyan",  "wheat",       "mistyrose"};
    std::vector<bool> hot(m.num_objects(), false);
    for (int o : highlight_objects) hot[o] = true;
    os << "digraph G {\n  rankdir=LR;\n  node [style=filled];\n";
    for (int b = 0; b < static_cast<int>(m.blocks.size()); ++b) {
        for (int k = 0; k < m.blocks[b].size; ++k) {
            int obj = m.blocks[b].offset + k;
            os << "  o" << obj << " [label=\"" << m.obj_space.name(obj) << "\", fillcolor=\""
               << palette[b % 8] << "\"";
            if (hot[obj]) os << ", color=red, penwidth=3";
            os << "];\n";
        }
    }
    int edges = 0;
    for (auto& mor : m.mors) {
        if (mor.src == mor.dst && &mor - m.mors.data() == m.identity_of[mor.src]) continue;
        if (edges >= max_edges) {
            os << "  note [shape=box, label=\"truncated at " << max_edges << " edges\"];\n";
            break;
        }
        os << "  o" << mor.src << " -> o" << mor.dst << ";\n";
        ++edges;
    }
    os << "}\n";
}

} // namespace orb
