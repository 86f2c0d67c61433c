#include <doctest.h>

#include <set>

#include "orbatlas/fixtures.hpp"
#include "orbatlas/invariants.hpp"

using namespace orb;

namespace {

struct Resolved {
    Atlas K;
    std::unique_ptr<GkGroupoid> gk;
    Reduction red;
    std::unique_ptr<ResolutionGroupoid> vk, vh;
    Weighting w;
};

Resolved resolve_fixture(Atlas atlas) {
    Resolved r;
    r.K = std::move(atlas);
    r.gk = std::make_unique<GkGroupoid>(GkGroupoid::build(r.K));
    r.red = cover_reduction(r.K);
    r.vk = std::make_unique<ResolutionGroupoid>(ResolutionGroupoid::build(*r.gk, r.red));
    r.vh = std::make_unique<ResolutionGroupoid>(r.vk->hausdorff_close());
    auto [w, rep] = compute_weighting(*r.vh, *r.vk);
    REQUIRE(rep.ok());
    r.w = std::move(w);
    return r;
}

SectionData pole_section(const Atlas& K, const Reduction& red) {
    SectionData nu;
    nu.values.resize(K.num_charts());
    int n = *K.base.index_of("N");
    int s = *K.base.index_of("S");
    for (int c = 0; c < K.num_charts(); ++c) {
        nu.values[c].assign(red.V[c].size(), 1);
        for (size_t l = 0; l < red.V[c].size(); ++l) {
            int y = K.chart(c).footprint_map(red.V[c][l]);
            if (y == n || y == s) {
                nu.values[c][l] = 0;
                nu.signs[{c, static_cast<int>(l)}] = 1;
            }
        }
    }
    return nu;
}

} // namespace

TEST_CASE("orbifold weighting values") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto [lg, rep] = orbifold_weighting(gk);
    REQUIRE(rep.ok());
    for (int y = 0; y < K.base.size(); ++y) {
        Rat expect = K.base.name(y) == "N" ? Rat(1, 2)
                     : K.base.name(y) == "S" ? Rat(1, 3)
                                             : Rat(1);
        CHECK(lg[y] == expect);
    }

    auto M = fixtures::manifold_cover();
    auto gm = GkGroupoid::build(M);
    auto [lgm, repm] = orbifold_weighting(gm);
    REQUIRE(repm.ok());
    for (auto& v : lgm) CHECK(v == Rat(1));

    auto po = fixtures::point_orbifold_s3(2);
    auto [lgp, repp] = orbifold_weighting(*po.g_s);
    REQUIRE(repp.ok());
    CHECK(lgp[0] == Rat(1, 3)); // 1/|S|
}

TEST_CASE("pushforward of the resolution weighting is Lambda_G") {
    auto r = resolve_fixture(fixtures::football());
    auto [lg, lgrep] = orbifold_weighting(*r.gk);
    REQUIRE(lgrep.ok());
    auto rep = pushforward_check(r.w, lg, r.K.base);
    INFO(rep.first_failure());
    CHECK(rep.ok());
}

TEST_CASE("total weight") {
    CHECK(total_weight({{Rat(1, 2), 1}, {Rat(1, 3), 1}}) == Rat(5, 6));
    CHECK(total_weight({{Rat(3, 7), 1}, {Rat(3, 7), -1}}) == Rat(0));
    CHECK(total_weight({}) == Rat(0));
    CHECK_THROWS_AS(total_weight({{Rat(1), 0}}), std::invalid_argument);
}

TEST_CASE("football Euler number is exactly 5/6") {
    auto r = resolve_fixture(fixtures::football());
    auto nu = pole_section(r.K, r.red);
    REQUIRE(check_section(r.K, r.red, nu).ok());
    auto res = euler_number(*r.vh, r.w, nu);
    INFO(res.report.first_failure());
    CHECK(res.report.ok());
    CHECK(res.total == Rat(5, 6));
    CHECK(res.zero_model.obj_space.size() == 2); // the two pole lifts
}

TEST_CASE("nowhere-zero section gives an empty zero set") {
    auto r = resolve_fixture(fixtures::football());
    SectionData nu;
    nu.values.resize(r.K.num_charts());
    for (int c = 0; c < r.K.num_charts(); ++c) nu.values[c].assign(r.red.V[c].size(), 5);
    auto res = euler_number(*r.vh, r.w, nu);
    CHECK(res.report.ok());
    CHECK(res.total == Rat(0));
    CHECK(res.zero_objects.empty());
}

TEST_CASE("two distinct admissible sections give the same total") {
    auto r = resolve_fixture(fixtures::football());
    auto nu1 = pole_section(r.K, r.red);

    // second section: poles plus a cancelling pair of free orbits in V_1
    auto nu2 = nu1;
    int c1 = r.K.chart_id({1});
    const Chart& ch = r.K.chart(c1);
    std::vector<int> free_locals;
    for (size_t l = 0; l < r.red.V[c1].size(); ++l) {
        int x = r.red.V[c1][l];
        int y = ch.footprint_map(x);
        // stay away from the pole and from the region shared with W_12
        if (r.K.base.name(y) == "u1" || r.K.base.name(y) == "u2")
            free_locals.push_back(static_cast<int>(l));
    }
    REQUIRE(free_locals.size() >= 4);
    // two full orbits with opposite signs
    auto orbit_of_local = [&](int l) {
        std::vector<int> orb;
        int x = r.red.V[c1][l];
        for (int g = 0; g < ch.group.order(); ++g) {
            int gx = ch.action.act[g][x];
            auto it = std::lower_bound(r.red.V[c1].begin(), r.red.V[c1].end(), gx);
            orb.push_back(static_cast<int>(it - r.red.V[c1].begin()));
        }
        std::sort(orb.begin(), orb.end());
        orb.erase(std::unique(orb.begin(), orb.end()), orb.end());
        return orb;
    };
    auto o1 = orbit_of_local(free_locals[0]);
    REQUIRE(o1.size() == 2);
    std::vector<int> rest;
    for (int l : free_locals)
        if (std::find(o1.begin(), o1.end(), l) == o1.end()) rest.push_back(l);
    REQUIRE(!rest.empty());
    auto o2 = orbit_of_local(rest[0]);
    REQUIRE(o2.size() == 2);
    for (int l : o1) {
        nu2.values[c1][l] = 0;
        nu2.signs[{c1, l}] = 1;
    }
    for (int l : o2) {
        nu2.values[c1][l] = 0;
        nu2.signs[{c1, l}] = -1;
    }
    REQUIRE(check_section(r.K, r.red, nu2).ok());
    auto e1 = euler_number(*r.vh, r.w, nu1);
    auto e2 = euler_number(*r.vh, r.w, nu2);
    REQUIRE(e1.report.ok());
    REQUIRE(e2.report.ok());
    CHECK(e1.total == e2.total);
    CHECK(e2.total == Rat(5, 6));
    CHECK(e2.zero_objects.size() > e1.zero_objects.size());
}

TEST_CASE("incompatible sections are rejected with a witness") {
    auto r = resolve_fixture(fixtures::football());
    auto nu = pole_section(r.K, r.red);
    int c12 = r.K.chart_id({1, 2});
    REQUIRE(!r.red.V[c12].empty());
    nu.values[c12][0] = 99; // break compatibility on a tilde set
    // find if that point is in some vtilde; if it projects, compat must fail
    auto rep = check_section(r.K, r.red, nu);
    CHECK(!rep.ok());
}

TEST_CASE("gerbe pair: verdict matches the fixture identity") {
    auto gt = gerbe_class(fixtures::gerbe(true, 2));
    REQUIRE(gt.precondition_ok);
    CHECK(gt.trivial);
    CHECK(gt.class_bit == 0);
    CHECK(gt.report.ok());

    auto gn = gerbe_class(fixtures::gerbe(false, 2));
    REQUIRE(gn.precondition_ok);
    CHECK(!gn.trivial);
    CHECK(gn.class_bit == 1);
}

TEST_CASE("circle covers: cocycle, parity, and rechoice behavior") {
    // 4 charts, twisted covering system: a nonzero cocycle against the
    // canonical bases; the verdict stays trivial (every S^1 gerbe is).
    auto g4 = gerbe_class(fixtures::gerbe(false, 4));
    REQUIRE(g4.precondition_ok);
    CHECK(g4.report.ok());
    CHECK(g4.trivial);
    int sum = 0;
    for (auto& [J, a] : g4.alpha) sum += a;
    CHECK(sum % 2 == 1); // the twist shows up in alpha

    auto g4t = gerbe_class(fixtures::gerbe(true, 4));
    for (auto& [J, a] : g4t.alpha) CHECK(a == 0);
    CHECK(g4t.trivial);

    // 5 charts: a genuine 4-set; the parity identity is checked inside
    for (bool tw : {true, false}) {
        auto g5 = gerbe_class(fixtures::gerbe(tw, 5));
        REQUIRE(g5.precondition_ok);
        INFO(g5.report.first_failure());
        CHECK(g5.report.ok());
        bool has4 = false;
        for (auto& [I, n] : g5.sheet_count)
            if (I.size() == 4) has4 = true;
        CHECK(has4);
    }
}

TEST_CASE("verdict is invariant under base sheet rechoices") {
    for (int charts : {2, 4}) {
        for (bool tw : {true, false}) {
            Atlas K = fixtures::gerbe(tw, charts);
            auto base_run = gerbe_class(K);
            REQUIRE(base_run.precondition_ok);
            // enumerate every base choice over the pair charts
            std::vector<std::pair<int, int>> pairs; // (chart id, #sheets)
            for (int c = 0; c < K.num_charts(); ++c)
                if (K.chart(c).index.size() == 2)
                    pairs.push_back({c, base_run.sheet_count.at(K.chart(c).index)});
            long long combos = 1;
            for (auto& [c, n] : pairs) combos *= n;
            REQUIRE(combos <= 4096);
            for (long long combo = 0; combo < combos; ++combo) {
                std::map<int, int> choice;
                long long rest = combo;
                for (auto& [c, n] : pairs) {
                    choice[c] = static_cast<int>(rest % n);
                    rest /= n;
                }
                auto run = gerbe_class(K, choice);
                CHECK(run.trivial == base_run.trivial);
                CHECK(run.report.ok());
            }
        }
    }
}

TEST_CASE("label-coherent base rechoices move alpha by a pair coboundary") {
    Atlas K = fixtures::gerbe(false, 4);
    auto base_run = gerbe_class(K);
    // flip the label of one connected pair chart: alpha changes exactly on
    // the triples containing it
    int flip_chart = -1;
    for (int c = 0; c < K.num_charts(); ++c)
        if (K.chart(c).index.size() == 2 && base_run.sheet_count.at(K.chart(c).index) == 2) {
            flip_chart = c;
            break;
        }
    REQUIRE(flip_chart >= 0);
    auto run = gerbe_class(K, {{flip_chart, 1}});
    const IndexSet& P = K.chart(flip_chart).index;
    for (auto& [J, a] : base_run.alpha) {
        int expect = (a + (iset_subset(P, J) ? 1 : 0)) % 2;
        CHECK(run.alpha.at(J) == expect);
    }
}

TEST_CASE("subatlas embedding of the football into its extension") {
    auto K = fixtures::football();
    auto K2 = fixtures::football_extended();
    AtlasEmbedding emb;
    emb.basic_map = {{1, 1}, {2, 2}};
    for (int c = 0; c < K.num_charts(); ++c) {
        std::vector<int> ident(K.chart(c).space.size());
        for (size_t i = 0; i < ident.size(); ++i) ident[i] = static_cast<int>(i);
        emb.point_maps[K.chart(c).index] = ident;
    }
    auto rep = subatlas_check(K, K2, emb);
    INFO(rep.first_failure());
    CHECK(rep.ok());

    // identity embedding K -> K
    auto ident_rep = subatlas_check(K, K, emb);
    CHECK(ident_rep.ok());

    // misroute one point of the transition chart: caught with a witness
    auto bad = emb;
    auto& pm = bad.point_maps[{1, 2}];
    std::swap(pm[0], pm[1]);
    auto bad_rep = subatlas_check(K, K2, bad);
    CHECK(!bad_rep.ok());
    CHECK(!bad_rep.first_failure().empty());
}
