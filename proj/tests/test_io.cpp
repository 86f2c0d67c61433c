#include <doctest.h>

#include <nlohmann/json.hpp>

#include "orbatlas/atlas_io.hpp"
#include "orbatlas/fixtures.hpp"

using namespace orb;
using nlohmann::json;

TEST_CASE("atlas documents round trip bit-exactly") {
    for (auto* K :
         {new Atlas(fixtures::football()), new Atlas(fixtures::product_fixture()),
          new Atlas(fixtures::gerbe(false, 2)), new Atlas(fixtures::manifold_cover())}) {
        json doc = atlas_to_json(*K);
        Atlas K2 = atlas_from_json(doc);
        json doc2 = atlas_to_json(K2);
        CHECK(doc == doc2);
        CHECK(doc.dump(2) == doc2.dump(2));
        CHECK(validate_atlas(K2).ok());
        delete K;
    }
}

TEST_CASE("parse failures are ParseError, math failures are SemanticError") {
    json doc = atlas_to_json(fixtures::football());

    auto broken = doc;
    broken.erase("charts");
    CHECK_THROWS_AS(atlas_from_json(broken), ParseError);

    broken = doc;
    broken["charts"][0]["footprint_map"][0] = "nonexistent-point";
    CHECK_THROWS_AS(atlas_from_json(broken), ParseError);

    broken = doc;
    broken["schema"] = "something-else";
    CHECK_THROWS_AS(atlas_from_json(broken), ParseError);

    // corrupt a Cayley table: parses structurally, fails group laws
    broken = doc;
    broken["groups"]["2"]["table"][1][1] = "e";
    CHECK_THROWS_AS(atlas_from_json(broken), SemanticError);

    // base order with a cycle
    broken = doc;
    broken["base"]["covers"].push_back({"u1", "N"});
    CHECK_THROWS_AS(atlas_from_json(broken), SemanticError);
}

TEST_CASE("section files round trip through the reduction") {
    auto K = fixtures::football();
    auto red = cover_reduction(K);
    SectionData nu;
    nu.values.resize(K.num_charts());
    for (int c = 0; c < K.num_charts(); ++c) nu.values[c].assign(red.V[c].size(), 1);
    int c1 = K.chart_id({1});
    nu.values[c1][0] = 0;
    nu.signs[{c1, 0}] = -1;
    json doc = section_to_json(K, red, nu);
    auto nu2 = section_from_json(doc, K, red);
    CHECK(nu2.values == nu.values);
    CHECK(nu2.signs == nu.signs);
}

TEST_CASE("reports serialize with witnesses") {
    Report rep;
    rep.pass("fine");
    rep.fail("broken", "the-witness");
    json j = report_to_json(rep);
    CHECK(j["ok"] == false);
    CHECK(j["checks"][1]["witness"] == "the-witness");
    CHECK(report_to_text(rep).find("the-witness") != std::string::npos);
}
