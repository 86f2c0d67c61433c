#include <doctest.h>

#include <map>
#include <sstream>

#include "orbatlas/completion.hpp"
#include "orbatlas/fixtures.hpp"

using namespace orb;

TEST_CASE("football completion counts") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    int c1 = K.chart_id({1}), c2 = K.chart_id({2}), c12 = K.chart_id({1, 2});
    std::map<std::pair<int, int>, int> count;
    for (auto& m : gk.model().mors) ++count[{m.iblk, m.jblk}];
    int w12 = K.chart(c12).space.size();
    CHECK(count[{c1, c2}] == w12);     // W_{1u2} x Gamma_{empty}: parametrized by W_12
    CHECK(count[{c2, c1}] == w12);
    CHECK(count[{c1, c1}] == K.chart(c1).space.size() * 2); // W_I x Gamma_I
    CHECK(count[{c12, c12}] == w12 * 6);
}

TEST_CASE("disjoint footprints give empty morphism sets") {
    auto K = fixtures::gerbe(true, 5); // charts 3 and 4 never meet
    auto gk = GkGroupoid::build(K);
    int a = K.chart_id({3}), b = K.chart_id({4});
    for (auto& m : gk.model().mors) CHECK(!(m.iblk == a && m.jblk == b));
}

TEST_CASE("football groupoid passes the full verification") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto rep = gk.verify();
    INFO(rep.first_failure());
    CHECK(rep.ok());
}

TEST_CASE("inverses behave as (z, g) -> (g^{-1} z, g^{-1})") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    const auto& M = gk.model();
    for (int m = 0; m < M.num_mors(); m += 17) {
        int inv = gk.invert(m);
        CHECK(M.mors[inv].src == M.mors[m].dst);
        CHECK(M.mors[inv].dst == M.mors[m].src);
        CHECK(gk.invert(inv) == m);
        auto unit = gk.compose(m, inv);
        REQUIRE(unit.has_value());
        CHECK(*unit == M.identity_of[M.mors[m].src]);
        // identity morphisms invert to themselves
        int e = M.identity_of[M.mors[m].src];
        CHECK(gk.invert(e) == e);
    }
}

TEST_CASE("completion restricts to B_K composition on nested indices") {
    auto K = fixtures::football();
    auto bk = BkCategory::build(K);
    auto gk = GkGroupoid::build(K);
    const auto& B = bk.model();
    auto out = B.out_adj();
    long long pairs = 0;
    for (int a = 0; a < B.num_mors(); ++a)
        for (int b : out[B.mors[a].dst]) {
            auto rb = bk.compose(a, b);
            REQUIRE(rb.has_value());
            // the same keys name morphisms of G_K
            const auto& m1 = B.mors[a];
            const auto& m2 = B.mors[b];
            int ga = gk.mor_id(m1.iblk, m1.jblk, m1.carrier, m1.label);
            int gb = gk.mor_id(m2.iblk, m2.jblk, m2.carrier, m2.label);
            REQUIRE(ga >= 0);
            REQUIRE(gb >= 0);
            auto rg = gk.compose(ga, gb);
            REQUIRE(rg.has_value());
            const auto& mr = B.mors[*rb];
            CHECK(gk.mor_id(mr.iblk, mr.jblk, mr.carrier, mr.label) == *rg);
            ++pairs;
        }
    CHECK(pairs > 1000);
}

TEST_CASE("cross-chart composite W_1 -> W_2 -> W_1 lands in W_1 x Gamma_1") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    const auto& M = gk.model();
    int c1 = K.chart_id({1}), c2 = K.chart_id({2});
    int done = 0;
    for (int a = 0; a < M.num_mors() && done < 25; ++a) {
        const auto& m1 = M.mors[a];
        if (m1.iblk != c1 || m1.jblk != c2 || m1.label != 0) continue;
        for (int b = 0; b < M.num_mors(); ++b) {
            const auto& m2 = M.mors[b];
            if (m2.iblk != c2 || m2.jblk != c1 || m2.dst != m1.src) continue;
            if (m2.src != m1.dst) continue;
            auto r = gk.compose(a, b);
            REQUIRE(r.has_value());
            CHECK(M.mors[*r].iblk == c1);
            CHECK(M.mors[*r].jblk == c1);
            CHECK(M.mors[*r].src == m1.src);
            CHECK(M.mors[*r].dst == m2.dst);
            ++done;
        }
    }
    CHECK(done > 0);
}

TEST_CASE("trace mode prints the lift data") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    std::ostringstream os;
    gk.set_trace(&os);
    const auto& M = gk.model();
    auto out = M.out_adj();
    for (int b : out[M.mors[0].dst]) {
        gk.compose(0, b);
        break;
    }
    CHECK(os.str().find("alpha=") != std::string::npos);
    CHECK(os.str().find("gamma_IJK=") != std::string::npos);
}

TEST_CASE("point orbifold bundles verify for the small parameter sets") {
    for (auto* po : {new PointOrbifold(fixtures::point_orbifold_z2(2)),
                     new PointOrbifold(fixtures::point_orbifold_z2z2(2)),
                     new PointOrbifold(fixtures::point_orbifold_s3(2))}) {
        auto rep = verify_point_orbifold(*po, /*full_laws=*/true);
        INFO(rep.first_failure());
        CHECK(rep.ok());
        auto grep = po->g_s->verify();
        INFO(grep.first_failure());
        CHECK(grep.ok());
        delete po;
    }
}

TEST_CASE("point orbifold chart sizes are |Gamma_I| / |S|") {
    auto po = fixtures::point_orbifold_z2z2(2); // S = Z2 diagonal in Z2xZ2
    const Atlas& K = po.atlas();
    for (int c = 0; c < K.num_charts(); ++c)
        CHECK(K.chart(c).space.size() * 2 == K.chart(c).group.order());
    // G_id has exactly one morphism between any pair of objects
    CHECK(po.g_id.num_mors() ==
          po.g_id.num_objects() * po.g_id.num_objects());
}

TEST_CASE("nontrivial S gives stabilizer S at every object") {
    auto po = fixtures::point_orbifold_s3(2);
    auto rep = po.g_s->verify();
    CHECK(rep.ok());
    const Atlas& K = po.atlas();
    for (int c = 0; c < K.num_charts(); ++c)
        for (int x = 0; x < K.chart(c).space.size(); ++x)
            CHECK(stabilizer_elems(K.chart(c).action, K.chart(c).group.grp, x).size() == 3);
}

TEST_CASE("a twisted composition table breaks associativity with a witness") {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    CatOps ops = gk.ops();
    const GroupoidModel& M = gk.model();
    // corrupt one composite: swap the result with another loop at the object
    auto base_compose = ops.compose;
    int victim_a = -1, victim_b = -1, forged = -1;
    auto out = M.out_adj();
    for (int a = 0; a < M.num_mors() && forged < 0; ++a)
        for (int b : out[M.mors[a].dst]) {
            auto r = base_compose(a, b);
            if (!r) continue;
            // replace by a different parallel morphism if one exists
            for (int alt = 0; alt < M.num_mors(); ++alt)
                if (alt != *r && M.mors[alt].src == M.mors[*r].src &&
                    M.mors[alt].dst == M.mors[*r].dst) {
                    victim_a = a;
                    victim_b = b;
                    forged = alt;
                    break;
                }
            if (forged >= 0) break;
        }
    REQUIRE(forged >= 0);
    ops.compose = [=](int a, int b) -> std::optional<int> {
        if (a == victim_a && b == victim_b) return forged;
        return base_compose(a, b);
    };
    Report rep;
    verify_category_laws(ops, rep, "mutated");
    CHECK(!rep.ok());
    CHECK(!rep.first_failure().empty());
}
