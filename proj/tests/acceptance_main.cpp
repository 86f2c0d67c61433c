// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "orbatlas/atlas_io.hpp"
#include "orbatlas/cat_bk.hpp"
#include "orbatlas/completion.hpp"
#include "orbatlas/derive.hpp"
#include "orbatlas/fixtures.hpp"
#include "orbatlas/invariants.hpp"
#include "orbatlas/resolve.hpp"

using namespace orb;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double run_timed(const std::function<bool(std::string&)>& body, int number,
                 const std::string& title, double budget_seconds) {
    std::string detail;
    auto t0 = Clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
        ok = false;
        detail += " [over budget " + std::to_string(budget_seconds) + "s]";
    }
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                secs, detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
    return secs;
}

struct Resolved {
    Atlas K;
    std::unique_ptr<GkGroupoid> gk;
    Reduction red;
    std::unique_ptr<ResolutionGroupoid> vk, vh;
    Weighting w;
    Report wrep;
};

Resolved resolve_fixture(Atlas atlas) {
    Resolved r;
    r.K = std::move(atlas);
    r.gk = std::make_unique<GkGroupoid>(GkGroupoid::build(r.K));
    r.red = cover_reduction(r.K);
    r.vk = std::make_unique<ResolutionGroupoid>(ResolutionGroupoid::build(*r.gk, r.red));
    r.vh = std::make_unique<ResolutionGroupoid>(r.vk->hausdorff_close());
    auto [w, rep] = compute_weighting(*r.vh, *r.vk);
    r.w = std::move(w);
    r.wrep = std::move(rep);
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

struct NamedFixture {
    std::string name;
    std::function<Atlas()> make;
};

std::vector<NamedFixture> law_suite_fixtures() {
    return {
        {"football", [] { return fixtures::football(); }},
        {"point-orbifold(Z2,id,N=2)", [] { return *fixtures::point_orbifold_z2(2).atlas_ptr; }},
        {"point-orbifold(Z2xZ2,Z2,N=2)",
         [] { return *fixtures::point_orbifold_z2z2(2).atlas_ptr; }},
        {"point-orbifold(S3,Z3,N=2)", [] { return *fixtures::point_orbifold_s3(2).atlas_ptr; }},
        {"gerbe-trivial", [] { return fixtures::gerbe(true, 2); }},
        {"gerbe-nontrivial", [] { return fixtures::gerbe(false, 2); }},
        {"manifold-cover", [] { return fixtures::manifold_cover(); }},
        {"product", [] { return fixtures::product_fixture(); }},
    };
}

} // namespace

int main() {
    // 1. Football Euler number: exactly 5/6, end to end, < 10 s.
    run_timed(
        [](std::string& detail) {
            auto r = resolve_fixture(fixtures::football());
            if (!validate_atlas(r.K).ok() || !r.wrep.ok()) return false;
            auto nu = pole_section(r.K, r.red);
            auto res = euler_number(*r.vh, r.w, nu);
            detail = "total = " + res.total.str();
            return res.report.ok() && res.total == Rat(5, 6);
        },
        1, "football Euler number 5/6 (exact)", 10.0);

    // 2. Football weighting profile {1/2, 1/3, 1/6} and exact pushforward.
    run_timed(
        [](std::string& detail) {
            auto r = resolve_fixture(fixtures::football());
            if (!r.wrep.ok()) return false;
            int c1 = r.K.chart_id({1}), c2 = r.K.chart_id({2});
            auto cl1 = r.K.base.closure(r.red.Q[c1]);
            auto cl2 = r.K.base.closure(r.red.Q[c2]);
            std::set<int> s1(cl1.begin(), cl1.end()), s2(cl2.begin(), cl2.end());
            std::set<Rat> values;
            for (int p = 0; p < r.w.real.space.size(); ++p) {
                int y = r.w.base_point[p];
                Rat expect = s1.count(y) ? Rat(1, 2) : s2.count(y) ? Rat(1, 3) : Rat(1, 6);
                if (r.w.value[p] != expect) {
                    detail = "wrong value at " + r.w.real.space.name(p);
                    return false;
                }
            }
            auto [lg, lgrep] = orbifold_weighting(*r.gk);
            if (!lgrep.ok()) return false;
            for (int y = 0; y < r.K.base.size(); ++y) {
                Rat expect = r.K.base.name(y) == "N"   ? Rat(1, 2)
                             : r.K.base.name(y) == "S" ? Rat(1, 3)
                                                       : Rat(1);
                if (lg[y] != expect) return false;
            }
            return pushforward_check(r.w, lg, r.K.base).ok();
        },
        2, "football weighting profile and pushforward (exact)", 10.0);

    // 3. Groupoid-law suite over every fixture, exhaustively, < 120 s.
    run_timed(
        [](std::string& detail) {
            for (auto& f : law_suite_fixtures()) {
                Atlas K = f.make();
                auto vrep = validate_atlas(K);
                if (!vrep.ok()) {
                    detail = f.name + ": " + vrep.first_failure();
                    return false;
                }
                auto bk = BkCategory::build(K);
                auto brep = bk.verify();
                if (!brep.ok()) {
                    detail = f.name + " B_K: " + brep.first_failure();
                    return false;
                }
                auto gk = GkGroupoid::build(K);
                auto grep = gk.verify();
                if (!grep.ok()) {
                    detail = f.name + " G_K: " + grep.first_failure();
                    return false;
                }
            }
            return true;
        },
        3, "exhaustive category/groupoid law suite on all fixtures", 120.0);

    // 4. Point-orbifold completion isomorphisms, N = 2 and N = 3.
    run_timed(
        [](std::string& detail) {
            struct Case {
                std::string name;
                std::function<PointOrbifold(int)> make;
            };
            std::vector<Case> cases = {
                {"(Z2,id)", [](int n) { return fixtures::point_orbifold_z2(n); }},
                {"(Z2xZ2,Z2)", [](int n) { return fixtures::point_orbifold_z2z2(n); }},
                {"(S3,Z3)", [](int n) { return fixtures::point_orbifold_s3(n); }},
            };
            for (auto& c : cases)
                for (int n : {2, 3}) {
                    auto po = c.make(n);
                    bool full_laws = n == 2;
                    auto rep = verify_point_orbifold(po, full_laws);
                    if (!rep.ok()) {
                        detail = c.name + " N=" + std::to_string(n) + ": " +
                                 rep.first_failure();
                        return false;
                    }
                }
            return true;
        },
        4, "point-orbifold completions G_id/S = G_S and F_S . F_s = F_S", 0.0);

    // 5. Resolution structure on every fixture.
    run_timed(
        [](std::string& detail) {
            for (auto& f : law_suite_fixtures()) {
                auto r = resolve_fixture(f.make());
                auto redrep = validate_reduction(r.K, r.red);
                auto r1 = r.vk->verify_structure();
                auto r2 = r.vh->verify_structure();
                auto r3 = r.vh->check_frontier_formula(*r.vk);
                auto wnb = wnb_check(*r.vk, *r.vh, r.w);
                for (auto* rep : {&redrep, &r.wrep, &r1, &r2, &r3, &wnb})
                    if (!rep->ok()) {
                        detail = f.name + ": " + rep->first_failure();
                        return false;
                    }
            }
            return true;
        },
        5, "resolutions: nonsingular, closed, frontier formula, wnb axioms", 0.0);

    // 6. Gerbe classification.
    run_timed(
        [](std::string& detail) {
            auto gt = gerbe_class(fixtures::gerbe(true, 2));
            auto gn = gerbe_class(fixtures::gerbe(false, 2));
            if (!(gt.precondition_ok && gt.trivial && gt.class_bit == 0 && gt.report.ok())) {
                detail = "trivial fixture misclassified";
                return false;
            }
            if (!(gn.precondition_ok && !gn.trivial && gn.class_bit == 1)) {
                detail = "nontrivial fixture misclassified";
                return false;
            }
            // parity identity at genuine 4-sets (5-chart circle covers)
            for (bool tw : {true, false}) {
                auto g5 = gerbe_class(fixtures::gerbe(tw, 5));
                bool has4 = false;
                for (auto& [I, n] : g5.sheet_count)
                    if (I.size() == 4) has4 = true;
                if (!has4 || !g5.report.ok()) {
                    detail = "5-chart cover parity failed: " + g5.report.first_failure();
                    return false;
                }
            }
            // verdict invariant under every base-sheet rechoice (<= 5 basics)
            for (int charts : {2, 4, 5}) {
                for (bool tw : {true, false}) {
                    Atlas K = fixtures::gerbe(tw, charts);
                    auto base_run = gerbe_class(K);
                    std::vector<std::pair<int, int>> pairs;
                    for (int c = 0; c < K.num_charts(); ++c)
                        if (K.chart(c).index.size() == 2)
                            pairs.push_back({c, base_run.sheet_count.at(K.chart(c).index)});
                    long long combos = 1;
                    for (auto& [c, n] : pairs) combos *= n;
                    for (long long combo = 0; combo < combos; ++combo) {
                        std::map<int, int> choice;
                        long long rest = combo;
                        for (auto& [c, n] : pairs) {
                            choice[c] = static_cast<int>(rest % n);
                            rest /= n;
                        }
                        auto run = gerbe_class(K, choice);
                        if (run.trivial != base_run.trivial || !run.report.ok()) {
                            detail = "verdict changed under a base rechoice";
                            return false;
                        }
                    }
                }
            }
            return true;
        },
        6, "gerbe classes 0/1, parity at 4-sets, rechoice invariance", 0.0);

    // 7. Section-choice invariance of the Euler total.
    run_timed(
        [](std::string& detail) {
            auto r = resolve_fixture(fixtures::football());
            auto nu1 = pole_section(r.K, r.red);
            auto nu2 = nu1;
            int c1 = r.K.chart_id({1});
            const Chart& ch = r.K.chart(c1);
            // add two cancelling free orbits away from the transition band
            std::vector<std::vector<int>> orbits;
            std::set<int> used;
            for (size_t l = 0; l < r.red.V[c1].size(); ++l) {
                int x = r.red.V[c1][l];
                std::string base = r.K.base.name(ch.footprint_map(x));
                if (base != "u1" && base != "u2") continue;
                if (used.count(static_cast<int>(l))) continue;
                std::vector<int> orb;
                for (int g = 0; g < ch.group.order(); ++g) {
                    int gx = ch.action.act[g][x];
                    auto it = std::lower_bound(r.red.V[c1].begin(), r.red.V[c1].end(), gx);
                    orb.push_back(static_cast<int>(it - r.red.V[c1].begin()));
                }
                std::sort(orb.begin(), orb.end());
                orb.erase(std::unique(orb.begin(), orb.end()), orb.end());
                for (int o : orb) used.insert(o);
                orbits.push_back(orb);
                if (orbits.size() == 2) break;
            }
            if (orbits.size() < 2) {
                detail = "not enough free orbits";
                return false;
            }
            int sign = 1;
            for (auto& orb : orbits) {
                for (int l : orb) {
                    nu2.values[c1][l] = 0;
                    nu2.signs[{c1, l}] = sign;
                }
                sign = -sign;
            }
            if (!check_section(r.K, r.red, nu2).ok()) {
                detail = "second section not admissible";
                return false;
            }
            auto e1 = euler_number(*r.vh, r.w, nu1);
            auto e2 = euler_number(*r.vh, r.w, nu2);
            detail = e1.total.str() + " vs " + e2.total.str();
            return e1.report.ok() && e2.report.ok() && e1.total == e2.total &&
                   e2.zero_objects.size() != e1.zero_objects.size();
        },
        7, "two distinct admissible sections, identical Euler totals", 0.0);

    // 8. Round trip: derive from the completion, verify, reorder.
    run_timed(
        [](std::string& detail) {
            auto K = fixtures::football();
            auto gk = GkGroupoid::build(K, /*with_mor_space=*/true);
            auto embs = canonical_embeddings(gk);
            auto da = derive_atlas(gk.ops(), embs);
            auto vrep = validate_atlas(*da.atlas);
            if (!vrep.ok()) {
                detail = "derived atlas invalid: " + vrep.first_failure();
                return false;
            }
            auto bk2 = BkCategory::build(*da.atlas);
            auto ind = induced_functor(da, bk2, gk.ops());
            if (!ind.report.ok()) {
                detail = "induced functor: " + ind.report.first_failure();
                return false;
            }
            auto out = reorder_atlas(da, gk.ops(), 1, 2);
            if (!out.report.ok()) {
                detail = "reorder: " + out.report.first_failure();
                return false;
            }
            return validate_atlas(*out.derived.atlas).ok();
        },
        8, "derive/induced-functor round trip and reorder isomorphism", 0.0);

    // 9. Mutation sensitivity: ten documented single-field mutations of the
    // football document, each caught with a concrete witness.
    run_timed(
        [](std::string& detail) {
            json base = atlas_to_json(fixtures::football());
            struct Mutation {
                std::string what;
                std::function<void(json&)> apply;
                std::string expect; // substring of the failing check
            };
            auto find_cov = [](json& doc, std::vector<int> sub) -> json& {
                for (auto& c : doc["coverings"])
                    if (c["sub"].get<std::vector<int>>() == sub) return c;
                throw std::runtime_error("covering not found");
            };
            std::vector<Mutation> muts = {
                {"rho_{1,12} rerouted across sheets",
                 [&](json& d) {
                     auto& c = find_cov(d, {1});
                     std::string v = c["map"][0];
                     v.back() = v.back() == 'A' ? 'B' : 'A';
                     c["map"][0] = v;
                 },
                 "rho[{1}<={1,2}]"},
                {"rho_{1,12} moved within a sheet",
                 [&](json& d) {
                     auto& c = find_cov(d, {1});
                     c["map"][0] = "u4A";
                 },
                 "rho[{1}<={1,2}]"},
                {"covering {1}<={1,2} removed",
                 [&](json& d) {
                     json keep = json::array();
                     for (auto& c : d["coverings"])
                         if (c["sub"].get<std::vector<int>>() != std::vector<int>{1})
                             keep.push_back(c);
                     d["coverings"] = keep;
                 },
                 "rho[{1}<={1,2}] present"},
                {"transition chart removed",
                 [&](json& d) {
                     json keep = json::array();
                     for (auto& c : d["charts"])
                         if (c["index"].get<std::vector<int>>() != std::vector<int>{1, 2})
                             keep.push_back(c);
                     d["charts"] = keep;
                     d["coverings"] = json::array();
                 },
                 "index set axiom"},
                {"group action law broken in Gamma_12",
                 [&](json& d) {
                     for (auto& c : d["charts"])
                         if (c["index"].get<std::vector<int>>() == std::vector<int>{1, 2}) {
                             c["action"][1][0] = c["action"][1][1];
                         }
                 },
                 "action laws"},
                {"identity row of Gamma_1 acts nontrivially",
                 [&](json& d) {
                     for (auto& c : d["charts"])
                         if (c["index"].get<std::vector<int>>() == std::vector<int>{1}) {
                             auto tmp = c["action"][0][1];
                             c["action"][0][1] = c["action"][0][2];
                             c["action"][0][2] = tmp;
                         }
                 },
                 "action laws"},
                {"footprint map sends a band point to the wrong base cell",
                 [&](json& d) {
                     for (auto& c : d["charts"])
                         if (c["index"].get<std::vector<int>>() == std::vector<int>{1, 2})
                             c["footprint_map"][0] = "u4";
                 },
                 ""},
                {"orientation sign flipped on one point",
                 [&](json& d) {
                     for (auto& c : d["charts"])
                         if (c["index"].get<std::vector<int>>() == std::vector<int>{1})
                             c["orientation"][3] = -1;
                 },
                 "orientation"},
                {"Cayley table corrupted (Z3)",
                 [&](json& d) { d["groups"]["2"]["table"][1][1] = "e"; },
                 "group"},
                {"base order edge removed",
                 [&](json& d) {
                     json keep = json::array();
                     for (auto& c : d["base"]["covers"])
                         if (!(c[0] == "d3" && c[1] == "u4")) keep.push_back(c);
                     d["base"]["covers"] = keep;
                 },
                 ""},
            };
            int caught = 0;
            for (auto& m : muts) {
                json doc = base;
                m.apply(doc);
                bool this_caught = false;
                std::string where;
                try {
                    Atlas K = atlas_from_json(doc);
                    auto rep = validate_atlas(K);
                    if (!rep.ok()) {
                        this_caught = true;
                        where = rep.first_failure();
                        for (auto& it : rep.items)
                            if (!it.ok && it.check.find(m.expect) != std::string::npos) {
                                where = it.check + ": " + it.witness;
                                break;
                            }
                        if (!m.expect.empty() && where.find(m.expect) == std::string::npos)
                            this_caught = false;
                    }
                } catch (const SemanticError& e) {
                    this_caught = std::string(e.what()).find(m.expect) != std::string::npos ||
                                  m.expect.empty();
                    where = e.what();
                }
                if (!this_caught) {
                    detail = "not caught: " + m.what + " (" + where + ")";
                    return false;
                }
                ++caught;
            }
            detail = std::to_string(caught) + "/10 mutations caught with witnesses";
            return caught == 10;
        },
        9, "mutation sensitivity of the validator", 0.0);

    std::printf("%s\n", g_failures == 0 ? "ALL ACCEPTANCE CRITERIA PASSED"
                                        : "ACCEPTANCE FAILURES PRESENT");
    return g_failures;
}
