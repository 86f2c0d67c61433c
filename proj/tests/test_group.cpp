#include <doctest.h>

#include "orbatlas/fixtures.hpp"
#include "orbatlas/group.hpp"

using namespace orb;

TEST_CASE("group law verification") {
    CHECK(!FiniteGroup::trivial().check().has_value());
    CHECK(!FiniteGroup::cyclic(4).check().has_value());
    CHECK(!FiniteGroup::symmetric3().check().has_value());
    auto bad = FiniteGroup::cyclic(3);
    bad.table[1][1] = 1; // break associativity/inverses
    CHECK(bad.check().has_value());
}

TEST_CASE("product groups and tuple projections") {
    std::map<int, FiniteGroup> basics{{1, FiniteGroup::cyclic(2)}, {2, FiniteGroup::cyclic(3)}};

    auto empty = product_group(basics, {});
    CHECK(empty.order() == 1); // Gamma_emptyset = id

    auto g1 = product_group(basics, {1});
    CHECK(g1.order() == 2);
    auto g12 = product_group(basics, {1, 2});
    CHECK(g12.order() == 6);
    CHECK(!g12.grp.check().has_value());

    // projection is a group homomorphism Gamma_J -> Gamma_I, exhaustively
    for (int a = 0; a < g12.order(); ++a)
        for (int b = 0; b < g12.order(); ++b)
            CHECK(g12.project(g12.mul(a, b), g1) ==
                  g1.mul(g12.project(a, g1), g12.project(b, g1)));

    // restriction to the full set / empty set
    for (int a = 0; a < g12.order(); ++a) {
        CHECK(g12.project(a, g12) == a);
        CHECK(g12.project(a, empty) == 0);
    }

    // |Gamma_I| is the product of the factor orders
    std::map<int, FiniteGroup> three{{1, FiniteGroup::cyclic(2)},
                                     {2, FiniteGroup::cyclic(3)},
                                     {3, FiniteGroup::symmetric3()}};
    CHECK(product_group(three, {1, 2, 3}).order() == 36);
}

TEST_CASE("split_tuple recomposes and commutes") {
    std::map<int, FiniteGroup> basics{{1, FiniteGroup::cyclic(2)}, {2, FiniteGroup::cyclic(3)}};
    auto g12 = product_group(basics, {1, 2});

    for (int code = 0; code < g12.order(); ++code) {
        for (auto& K : std::vector<IndexSet>{{}, {1}, {2}, {1, 2}, {2, 3}}) {
            auto [in_k, out_k] = g12.split(code, K);
            CHECK(g12.mul(in_k, out_k) == code);
            CHECK(g12.mul(out_k, in_k) == code); // parts commute
        }
        // supported inside K: the complement part is the identity
        auto [a, b] = g12.split(code, {1, 2});
        CHECK(a == code);
        CHECK(b == g12.id());
        auto [c, d] = g12.split(code, {7});
        CHECK(c == g12.id());
        CHECK(d == code);
    }

    // gamma = (g1, g2) over {1,2}, K = {2,3}: K-part carries only the 2-slot
    int code = g12.encode({1, 2});
    auto [k_part, rest] = g12.split(code, {2, 3});
    CHECK(g12.decode(k_part) == std::vector<int>{0, 2});
    CHECK(g12.decode(rest) == std::vector<int>{1, 0});
}

TEST_CASE("stabilizers by exhaustion") {
    // free action: trivial stabilizer everywhere
    auto c12 = fixtures::circle(12);
    FiniteGroup z6 = FiniteGroup::cyclic(6);
    FiniteGroupAction rot;
    rot.act.assign(6, std::vector<int>(24));
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 12; ++i) {
            rot.act[k][i] = (i + 2 * k) % 12;
            rot.act[k][12 + i] = 12 + (i + 2 * k) % 12;
        }
    REQUIRE(!verify_action(z6, c12, rot).has_value());
    for (int p = 0; p < 24; ++p) CHECK(stabilizer_elems(rot, z6, p).size() == 1);

    // fixed apex: the full group
    auto cone = FiniteSpace::from_covers({"*", "t0", "t1"}, {{0, 1}, {0, 2}});
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroupAction ca;
    ca.act = {{0, 1, 2}, {0, 2, 1}};
    auto [stab, elems] = stabilizer_group(ca, z2, 0);
    CHECK(stab.order() == 2);
    CHECK(!stab.check().has_value());
    CHECK(stabilizer_elems(ca, z2, 1).size() == 1);
}

TEST_CASE("embed extends by identities") {
    std::map<int, FiniteGroup> basics{{1, FiniteGroup::cyclic(2)},
                                      {2, FiniteGroup::cyclic(3)},
                                      {3, FiniteGroup::cyclic(2, "s")}};
    auto g2 = product_group(basics, {2});
    auto g123 = product_group(basics, {1, 2, 3});
    for (int a = 0; a < g2.order(); ++a) {
        auto comps = g123.decode(g2.embed(a, g123));
        CHECK(comps[0] == 0);
        CHECK(comps[1] == a);
        CHECK(comps[2] == 0);
    }
}
