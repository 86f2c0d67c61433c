#include <doctest.h>

#include <map>
#include <set>

#include "orbatlas/fixtures.hpp"
#include "orbatlas/resolve.hpp"

using namespace orb;


TEST_CASE("cover reduction: one chart takes the whole base") {
    auto K = fixtures::one_chart();
    auto red = cover_reduction(K);
    CHECK(red.Q[0].size() == static_cast<size_t>(K.base.size()));
    CHECK(validate_reduction(K, red).ok());
}

TEST_CASE("cover reduction on the football is valid and deterministic") {
    auto K = fixtures::football();
    auto r1 = cover_reduction(K);
    auto r2 = cover_reduction(K);
    CHECK(r1.Q == r2.Q);
    auto rep = validate_reduction(K, r1);
    INFO(rep.first_failure());
    CHECK(rep.ok());
    // poles must end in the basic charts' reduced sets
    auto n = *K.base.index_of("N");
    auto s = *K.base.index_of("S");
    auto in = [](const std::vector<int>& v, int p) {
        return std::find(v.begin(), v.end(), p) != v.end();
    };
    CHECK(in(r1.Q[K.chart_id({1})], n));
    CHECK(in(r1.Q[K.chart_id({2})], s));
}

TEST_CASE("full-overlap charts force the transition chart to carry Y") {
    auto K = fixtures::two_chart_full_overlap();
    auto red = cover_reduction(K);
    auto rep = validate_reduction(K, red);
    INFO(rep.first_failure());
    CHECK(rep.ok());
    // nesting kills any pair of nonempty basic Q's here
    bool q1 = !red.Q[K.chart_id({1})].empty();
    bool q2 = !red.Q[K.chart_id({2})].empty();
    CHECK(!(q1 && q2));
}

TEST_CASE("a cover too coarse reports NoReductionFound") {
    // two arcs on the minimal circle: no closure fits inside a footprint
    Atlas K;
    K.base = fixtures::circle(2);
    K.basic_ids = {1, 2};
    K.basic_groups[1] = FiniteGroup::trivial();
    K.basic_groups[2] = FiniteGroup::trivial();
    auto mk = [&](int id, std::vector<int> pts) {
        Chart ch;
        ch.index = {id};
        auto [sp, keep] = K.base.subspace(pts);
        ch.space = std::move(sp);
        ch.group = product_group(K.basic_groups, {id});
        ch.action.act.assign(1, std::vector<int>(keep.size()));
        for (size_t i = 0; i < keep.size(); ++i) ch.action.act[0][i] = static_cast<int>(i);
        ch.footprint_map.assign = keep;
        return ch;
    };
    K.charts.push_back(mk(1, {0, 1, 2}));
    K.charts.push_back(mk(2, {0, 1, 3}));
    Chart c12 = mk(1, {0, 1});
    c12.index = {1, 2};
    c12.group = product_group(K.basic_groups, {1, 2});
    K.charts.push_back(std::move(c12));
    Covering cv1{0, 2, {}};
    cv1.rho.assign = {0, 1};
    K.coverings[{0, 2}] = cv1;
    Covering cv2{1, 2, {}};
    cv2.rho.assign = {0, 1};
    K.coverings[{1, 2}] = cv2;
    K.finalize();
    REQUIRE(validate_atlas(K).ok());
    CHECK_THROWS_WITH_AS(cover_reduction(K), doctest::Contains("NoReductionFound"),
                         std::runtime_error);
}

TEST_CASE("football resolution structure") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto red = cover_reduction(K);
    auto vk = ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();

    auto r1 = vk.verify_structure();
    INFO(r1.first_failure());
    CHECK(r1.ok());
    auto r2 = vh.verify_structure();
    INFO(r2.first_failure());
    CHECK(r2.ok());
    auto r3 = vh.check_frontier_formula(vk);
    INFO(r3.first_failure());
    CHECK(r3.ok());

    // V morphisms from V_1 to V_12 are the rho graph over Vt_{1,12}
    int c1 = K.chart_id({1}), c2 = K.chart_id({2}), c12 = K.chart_id({1, 2});
    auto vt1 = red.vtilde(K, c1, c12);
    auto vt2 = red.vtilde(K, c2, c12);
    std::map<std::pair<int, int>, int> count;
    for (auto& m : vk.model().mors) ++count[{m.iblk, m.jblk}];
    CHECK(count[{c1, c12}] == static_cast<int>(vt1.size()));
    CHECK(count[{c2, c12}] == static_cast<int>(vt2.size()));
    // self-morphisms of V_12: identities plus the free subgroup orbits
    CHECK(count[{c12, c12}] ==
          static_cast<int>(red.V[c12].size() + vt1.size() * 2 + vt2.size() * 1));

    // distinct Q-components carry no morphisms between their objects
    CHECK(count[{c1, c2}] == 0);

    // the closure adds the frontier orbits: |Fr(Vt_1)| * 2 + |Fr(Vt_2)| * 1
    auto [v12space, v12pts] = K.chart(c12).space.subspace(red.V[c12]);
    auto local = [&](const std::vector<int>& wpts) {
        std::vector<int> out;
        for (int w : wpts)
            out.push_back(static_cast<int>(
                std::lower_bound(v12pts.begin(), v12pts.end(), w) - v12pts.begin()));
        return out;
    };
    int fr1 = static_cast<int>(v12space.frontier(local(vt1)).size());
    int fr2 = static_cast<int>(v12space.frontier(local(vt2)).size());
    CHECK(vh.model().num_mors() - vk.model().num_mors() == fr1 * 2 + fr2 * 1);
    CHECK(fr1 == 6);
    CHECK(fr2 == 6);
}

TEST_CASE("single nonempty Q gives V^H = V") {
    auto K = fixtures::one_chart();
    auto gk = GkGroupoid::build(K);
    auto red = cover_reduction(K);
    auto vk = ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();
    CHECK(vh.model().num_mors() == vk.model().num_mors());
}

TEST_CASE("football weighting profile is exactly {1/2, 1/3, 1/6}") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto red = cover_reduction(K);
    auto vk = ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();
    auto [w, wrep] = compute_weighting(vh, vk);
    INFO(wrep.first_failure());
    CHECK(wrep.ok());

    int c1 = K.chart_id({1}), c2 = K.chart_id({2}), c12 = K.chart_id({1, 2});
    auto cl1 = K.base.closure(red.Q[c1]);
    auto cl2 = K.base.closure(red.Q[c2]);
    std::set<int> s1(cl1.begin(), cl1.end()), s2(cl2.begin(), cl2.end());
    std::set<orb::Rat> seen;
    for (int p = 0; p < w.real.space.size(); ++p) {
        int y = w.base_point[p];
        orb::Rat expect = s1.count(y) ? orb::Rat(1, 2)
                         : s2.count(y) ? orb::Rat(1, 3)
                                       : orb::Rat(1, 6);
        CHECK(w.value[p] == expect);
    }
    (void)c12;

    // branch locus sits exactly over the internal frontiers, not over
    // Q_1 n bd(Q_12)
    std::set<int> branch_bases;
    for (int p : w.branch_locus) branch_bases.insert(w.base_point[p]);
    std::set<int> expect_bases = {*K.base.index_of("d3"), *K.base.index_of("d4")};
    CHECK(branch_bases == expect_bases);
    auto fr12 = K.base.frontier(red.Q[c12]);
    for (int y : fr12)
        if (s1.count(y)) CHECK(!branch_bases.count(y)); // no branching there
}

TEST_CASE("wnb axioms and pushforward on the fixtures") {
    for (auto* atlas :
         {new Atlas(fixtures::football()), new Atlas(fixtures::one_chart()),
          new Atlas(fixtures::manifold_cover()), new Atlas(fixtures::gerbe(true, 2)),
          new Atlas(fixtures::gerbe(false, 2)), new Atlas(fixtures::two_chart_full_overlap())}) {
        auto gk = GkGroupoid::build(*atlas);
        auto red = cover_reduction(*atlas);
        auto vk = ResolutionGroupoid::build(gk, red);
        auto vh = vk.hausdorff_close();
        auto [w, wrep] = compute_weighting(vh, vk);
        INFO(wrep.first_failure());
        CHECK(wrep.ok());
        auto wnb = wnb_check(vk, vh, w);
        INFO(wnb.first_failure());
        CHECK(wnb.ok());
        delete atlas;
    }
}

TEST_CASE("manifold cover weighs 1 everywhere") {
    auto K = fixtures::manifold_cover();
    auto gk = GkGroupoid::build(K);
    auto red = cover_reduction(K);
    auto vk = ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();
    auto [w, wrep] = compute_weighting(vh, vk);
    REQUIRE(wrep.ok());
    for (int p = 0; p < w.real.space.size(); ++p) CHECK(w.value[p] == orb::Rat(1));
}

TEST_CASE("|V^H| merges points exactly over the branch locus") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto red = cover_reduction(K);
    auto vk = ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();
    auto [w, wrep] = compute_weighting(vh, vk);
    REQUIRE(wrep.ok());
    auto vreal = realize(vk.model());
    std::map<int, std::set<int>> pre;
    for (int o = 0; o < vk.model().num_objects(); ++o)
        pre[w.real.cls_of[o]].insert(vreal.cls_of[o]);
    for (int p = 0; p < w.real.space.size(); ++p) {
        bool branched =
            std::find(w.branch_locus.begin(), w.branch_locus.end(), p) != w.branch_locus.end();
        CHECK(branched == (pre[p].size() > 1));
    }
}
