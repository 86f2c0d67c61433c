#include <doctest.h>

#include <random>
#include <set>

#include "orbatlas/finspace.hpp"
#include "orbatlas/fixtures.hpp"

using namespace orb;

namespace {

FiniteSpace sierpinski() { return FiniteSpace::from_covers({"a", "b"}, {{0, 1}}); }

std::vector<int> all_points(const FiniteSpace& s) {
    std::vector<int> out;
    for (int i = 0; i < s.size(); ++i) out.push_back(i);
    return out;
}

} // namespace

TEST_CASE("closure basics") {
    auto sp = sierpinski();
    CHECK(sp.closure(all_points(sp)) == all_points(sp)); // closure of everything
    CHECK(sp.closure({1}) == std::vector<int>{0, 1});    // generic point closes down

    auto c2 = fixtures::circle(2); // a0 a1 b0 b1
    // down-set of a0 in the C_2 order b_i < a_i, b_i < a_{i+1}
    CHECK(c2.closure({0}) == std::vector<int>{0, 2, 3});
}

TEST_CASE("minimal open neighbourhoods") {
    auto d = FiniteSpace::discrete({"p", "q"});
    CHECK(d.min_open_nbhd(0) == std::vector<int>{0});
    auto sp = sierpinski();
    CHECK(sp.min_open_nbhd(0) == std::vector<int>{0, 1});
    auto c2 = fixtures::circle(2);
    CHECK(c2.min_open_nbhd(2) == std::vector<int>{0, 1, 2}); // b0 below a0, a1
}

TEST_CASE("quotient of C_4 by rotation-by-two is C_2") {
    auto c4 = fixtures::circle(4);
    // orbits {a_i, a_{i+2}}, {b_i, b_{i+2}}
    std::vector<int> cls(8);
    for (int i = 0; i < 4; ++i) cls[i] = i % 2;
    for (int i = 0; i < 4; ++i) cls[4 + i] = 2 + i % 2;
    auto q = quotient_space(c4, cls);
    CHECK(q.space.size() == 4);
    CHECK(find_space_iso(q.space, fixtures::circle(2)).has_value());
}

TEST_CASE("identity and collapsing quotients") {
    auto c2 = fixtures::circle(2);
    std::vector<int> ident(c2.size());
    for (int i = 0; i < c2.size(); ++i) ident[i] = i;
    auto q = quotient_space(c2, ident);
    CHECK(find_space_iso(q.space, c2).has_value());

    auto sp = sierpinski();
    auto one = quotient_space(sp, {0, 0});
    CHECK(one.space.size() == 1);

    // order-cycles collapse (T0-ification): chain 0<1<2 with {0,2} glued
    auto chain = FiniteSpace::from_covers({"x", "y", "z"}, {{0, 1}, {1, 2}});
    auto t0 = quotient_space(chain, {0, 1, 0});
    CHECK(t0.space.size() == 1);
}

TEST_CASE("closure is idempotent, monotone, extensive on random posets") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> covers;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0) covers.push_back({i, j});
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
        auto s = FiniteSpace::from_covers(std::move(names), covers);
        std::vector<int> a, b;
        for (int i = 0; i < n; ++i) {
            if (rng() % 2) a.push_back(i);
            if (rng() % 2) b.push_back(i);
        }
        auto ca = s.closure(a);
        CHECK(s.closure(ca) == ca); // idempotent
        std::set<int> sa(a.begin(), a.end()), sca(ca.begin(), ca.end());
        for (int p : a) CHECK(sca.count(p)); // extensive
        std::vector<int> ab = a;
        for (int p : b) ab.push_back(p);
        auto cab = s.closure(ab);
        std::set<int> scab(cab.begin(), cab.end());
        for (int p : ca) CHECK(scab.count(p)); // monotone
        CHECK(s.is_closed(ca));
        CHECK(s.is_open(s.up_closure(a)));
    }
}

TEST_CASE("group actions respect the topology") {
    auto c4 = fixtures::circle(4);
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroupAction act;
    act.act.assign(2, std::vector<int>(8));
    for (int i = 0; i < 8; ++i) act.act[0][i] = i;
    for (int i = 0; i < 4; ++i) {
        act.act[1][i] = (i + 2) % 4;
        act.act[1][4 + i] = 4 + (i + 2) % 4;
    }
    CHECK(!verify_action(z2, c4, act).has_value());
    CHECK(fixed_point_witnesses(act, z2, {0, 1}).empty()); // rotation is free

    // open sets stay open under every group element
    auto open = c4.min_open_nbhd(4);
    std::vector<int> image;
    for (int p : open) image.push_back(act.act[1][p]);
    CHECK(c4.is_open(image));

    // a fixed apex is reported with a witness
    auto cone = FiniteSpace::from_covers({"*", "t0", "t1"}, {{0, 1}, {0, 2}});
    FiniteGroupAction ca;
    ca.act = {{0, 1, 2}, {0, 2, 1}};
    CHECK(!verify_action(z2, cone, ca).has_value());
    auto wit = fixed_point_witnesses(ca, z2, {0, 1});
    REQUIRE(!wit.empty());
    CHECK(wit.front() == std::pair<int, int>{1, 0});

    FiniteGroup triv = FiniteGroup::trivial();
    FiniteGroupAction ta;
    ta.act = {{0, 1, 2}};
    CHECK(fixed_point_witnesses(ta, triv, {0}).empty());
}

TEST_CASE("subspace, components, open core") {
    auto c2 = fixtures::circle(2);
    auto [sub, pts] = c2.subspace({0, 2});
    CHECK(sub.size() == 2);
    CHECK(sub.le(1, 0)); // b0 < a0 survives in the subspace
    auto comps = c2.components({0, 1});
    CHECK(comps.size() == 2); // two maxima are incomparable
    CHECK(c2.open_core({0, 1, 2}) == std::vector<int>{0, 1, 2});
    CHECK(c2.open_core({0, 2}) == std::vector<int>{0});
}
