#include "orbatlas/atlas_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

namespace orb {

using nlohmann::json;

namespace {

json space_to_json(const FiniteSpace& s) {
    json j;
    j["points"] = s.names();
    json covers = json::array();
    for (auto [lo, hi] : s.hasse_pairs()) covers.push_back({s.name(lo), s.name(hi)});
    j["covers"] = covers;
    return j;
}

FiniteSpace space_from_json(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("points") || !j.contains("covers"))
        throw ParseError(what + ": space needs points/covers");
    std::vector<std::string> names = j.at("points").get<std::vector<std::string>>();
    std::map<std::string, int> idx;
    for (size_t i = 0; i < names.size(); ++i) {
        if (idx.count(names[i])) throw ParseError(what + ": duplicate point " + names[i]);
        idx[names[i]] = static_cast<int>(i);
    }
    std::vector<std::pair<int, int>> covers;
    for (auto& c : j.at("covers")) {
        if (!c.is_array() || c.size() != 2) throw ParseError(what + ": malformed cover pair");
        auto lo = c[0].get<std::string>();
        auto hi = c[1].get<std::string>();
        if (!idx.count(lo) || !idx.count(hi))
            throw ParseError(what + ": unknown point in cover pair");
        covers.push_back({idx[lo], idx[hi]});
    }
    try {
        return FiniteSpace::from_covers(std::move(names), covers);
    } catch (const std::invalid_argument& e) {
        throw SemanticError(what + ": " + e.what());
    }
}

json group_to_json(const FiniteGroup& g) {
    json j;
    j["elements"] = g.elems;
    json table = json::array();
    for (auto& row : g.table) {
        json r = json::array();
        for (int v : row) r.push_back(g.elems[v]);
        table.push_back(r);
    }
    j["table"] = table;
    j["identity"] = g.elems[g.identity];
    return j;
}

FiniteGroup group_from_json(const json& j, const std::string& what) {
    FiniteGroup g;
    if (!j.contains("elements") || !j.contains("table") || !j.contains("identity"))
        throw ParseError(what + ": group needs elements/table/identity");
    g.elems = j.at("elements").get<std::vector<std::string>>();
    std::map<std::string, int> idx;
    for (size_t i = 0; i < g.elems.size(); ++i) idx[g.elems[i]] = static_cast<int>(i);
    for (auto& row : j.at("table")) {
        std::vector<int> r;
        for (auto& v : row) {
            auto name = v.get<std::string>();
            if (!idx.count(name)) throw ParseError(what + ": unknown element " + name);
            r.push_back(idx[name]);
        }
        g.table.push_back(std::move(r));
    }
    auto id_name = j.at("identity").get<std::string>();
    if (!idx.count(id_name)) throw ParseError(what + ": unknown identity");
    g.identity = idx[id_name];
    if (g.table.size() != g.elems.size())
        throw ParseError(what + ": table size mismatch");
    for (auto& row : g.table)
        if (row.size() != g.elems.size()) throw ParseError(what + ": table row size mismatch");
    if (auto err = g.check_table_only())
        throw SemanticError(what + ": " + *err);
    try {
        g.compute_inverses();
    } catch (const std::invalid_argument& e) {
        throw SemanticError(what + ": " + e.what());
    }
    return g;
}

} // namespace

json atlas_to_json(const Atlas& K) {
    json j;
    j["schema"] = "orbatlas/atlas-v1";
    j["mode"] = K.generalized ? "generalized" : "strict";
    j["base"] = space_to_json(K.base);
    json groups = json::object();
    for (auto& [id, g] : K.basic_groups) groups[std::to_string(id)] = group_to_json(g);
    j["groups"] = groups;
    if (K.generalized) {
        json fp = json::object();
        for (auto& [id, pts] : K.basic_footprints) {
            json arr = json::array();
            for (int p : pts) arr.push_back(K.base.name(p));
            fp[std::to_string(id)] = arr;
        }
        j["basic_footprints"] = fp;
    }
    json charts = json::array();
    for (auto& ch : K.charts) {
        json c;
        c["index"] = ch.index;
        c["space"] = space_to_json(ch.space);
        json action = json::array();
        for (auto& row : ch.action.act) {
            json r = json::array();
            for (int v : row) r.push_back(ch.space.name(v));
            action.push_back(r);
        }
        c["action"] = action;
        json fpm = json::array();
        for (int v : ch.footprint_map.assign) fpm.push_back(K.base.name(v));
        c["footprint_map"] = fpm;
        if (ch.orientation) c["orientation"] = *ch.orientation;
        charts.push_back(c);
    }
    j["charts"] = charts;
    json covs = json::array();
    for (auto& [key, cov] : K.coverings) {
        json c;
        c["sub"] = K.chart(cov.sub).index;
        c["sup"] = K.chart(cov.sup).index;
        json m = json::array();
        for (int v : cov.rho.assign) m.push_back(K.chart(cov.sub).space.name(v));
        c["map"] = m;
        covs.push_back(c);
    }
    j["coverings"] = covs;
    return j;
}

Atlas atlas_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("atlas document must be an object");
    if (doc.value("schema", "") != "orbatlas/atlas-v1")
        throw ParseError("unknown schema (expected orbatlas/atlas-v1)");
    Atlas K;
    std::string mode = doc.value("mode", "strict");
    if (mode != "strict" && mode != "generalized") throw ParseError("unknown mode " + mode);
    K.generalized = mode == "generalized";
    K.base = space_from_json(doc.at("base"), "base");
    if (!doc.contains("groups") || !doc.at("groups").is_object())
        throw ParseError("groups section missing");
    for (auto& [key, val] : doc.at("groups").items()) {
        int id = 0;
        try {
            id = std::stoi(key);
        } catch (...) {
            throw ParseError("basic group key must be an integer id: " + key);
        }
        K.basic_ids.push_back(id);
        K.basic_groups[id] = group_from_json(val, "group " + key);
    }
    std::sort(K.basic_ids.begin(), K.basic_ids.end());
    if (K.generalized) {
        if (!doc.contains("basic_footprints"))
            throw ParseError("generalized mode requires basic_footprints");
        for (auto& [key, val] : doc.at("basic_footprints").items()) {
            int id = std::stoi(key);
            std::vector<int> pts;
            for (auto& nm : val) {
                auto p = K.base.index_of(nm.get<std::string>());
                if (!p) throw ParseError("unknown base point in basic_footprints");
                pts.push_back(*p);
            }
            std::sort(pts.begin(), pts.end());
            K.basic_footprints[id] = pts;
        }
    }
    if (!doc.contains("charts")) throw ParseError("charts section missing");
    for (auto& c : doc.at("charts")) {
        Chart ch;
        ch.index = c.at("index").get<std::vector<int>>();
        std::sort(ch.index.begin(), ch.index.end());
        for (int i : ch.index)
            if (!K.basic_groups.count(i))
                throw ParseError("chart " + iset_str(ch.index) + " references unknown basic id");
        ch.space = space_from_json(c.at("space"), "chart " + iset_str(ch.index));
        try {
            ch.group = product_group(K.basic_groups, ch.index);
        } catch (const std::invalid_argument& e) {
            throw SemanticError(e.what());
        }
        const auto& action = c.at("action");
        if (static_cast<int>(action.size()) != ch.group.order())
            throw SemanticError("chart " + iset_str(ch.index) +
                                ": action table must have one row per product group element (" +
                                std::to_string(ch.group.order()) + ")");
        for (auto& row : action) {
            std::vector<int> r;
            for (auto& v : row) {
                auto p = ch.space.index_of(v.get<std::string>());
                if (!p) throw ParseError("chart " + iset_str(ch.index) + ": unknown point in action");
                r.push_back(*p);
            }
            if (static_cast<int>(r.size()) != ch.space.size())
                throw ParseError("chart " + iset_str(ch.index) + ": action row size mismatch");
            ch.action.act.push_back(std::move(r));
        }
        for (auto& v : c.at("footprint_map")) {
            auto p = K.base.index_of(v.get<std::string>());
            if (!p) throw ParseError("chart " + iset_str(ch.index) + ": unknown base point");
            ch.footprint_map.assign.push_back(*p);
        }
        if (static_cast<int>(ch.footprint_map.assign.size()) != ch.space.size())
            throw ParseError("chart " + iset_str(ch.index) + ": footprint map size mismatch");
        if (c.contains("orientation")) {
            auto ori = c.at("orientation").get<std::vector<int>>();
            if (static_cast<int>(ori.size()) != ch.space.size())
                throw ParseError("chart " + iset_str(ch.index) + ": orientation size mismatch");
            ch.orientation = ori;
        }
        K.charts.push_back(std::move(ch));
    }
    std::map<IndexSet, int> chart_of;
    for (int c = 0; c < K.num_charts(); ++c) {
        if (chart_of.count(K.chart(c).index))
            throw ParseError("duplicate chart index " + iset_str(K.chart(c).index));
        chart_of[K.chart(c).index] = c;
    }
    if (doc.contains("coverings"))
        for (auto& c : doc.at("coverings")) {
            IndexSet sub = c.at("sub").get<std::vector<int>>();
            IndexSet sup = c.at("sup").get<std::vector<int>>();
            std::sort(sub.begin(), sub.end());
            std::sort(sup.begin(), sup.end());
            if (!chart_of.count(sub) || !chart_of.count(sup))
                throw ParseError("covering references unknown chart");
            Covering cov;
            cov.sub = chart_of[sub];
            cov.sup = chart_of[sup];
            for (auto& v : c.at("map")) {
                auto p = K.chart(cov.sub).space.index_of(v.get<std::string>());
                if (!p) throw ParseError("covering map has unknown point");
                cov.rho.assign.push_back(*p);
            }
            if (static_cast<int>(cov.rho.assign.size()) != K.chart(cov.sup).space.size())
                throw ParseError("covering map size mismatch for " + iset_str(sub) + "<=" +
                                 iset_str(sup));
            K.coverings[{cov.sub, cov.sup}] = std::move(cov);
        }
    K.finalize();
    return K;
}

json report_to_json(const Report& rep) {
    json j;
    j["ok"] = rep.ok();
    json checks = json::array();
    for (auto& it : rep.items) {
        json c;
        c["check"] = it.check;
        c["ok"] = it.ok;
        if (!it.ok) c["witness"] = it.witness;
        checks.push_back(c);
    }
    j["checks"] = checks;
    return j;
}

std::string report_to_text(const Report& rep) {
    std::string out;
    for (auto& it : rep.items) {
        out += it.ok ? "  ok   " : "  FAIL ";
        out += it.check;
        if (!it.ok) out += "  [" + it.witness + "]";
        out += "\n";
    }
    out += rep.ok() ? "all checks passed\n"
                    : std::to_string(rep.failures()) + " check(s) failed\n";
    return out;
}

json weighting_to_json(const Weighting& w) {
    json arr = json::array();
    for (int p = 0; p < w.real.space.size(); ++p) {
        json e;
        e["point"] = w.real.space.name(p);
        e["value"] = {w.value[p].num, w.value[p].den};
        json br = json::array();
        for (auto& [chart, weight] : w.branches[p])
            br.push_back({{"chart", chart}, {"weight", {weight.num, weight.den}}});
        e["branches"] = br;
        e["branch_point"] =
            std::find(w.branch_locus.begin(), w.branch_locus.end(), p) != w.branch_locus.end();
        arr.push_back(e);
    }
    return arr;
}

SectionData section_from_json(const json& doc, const Atlas& K, const Reduction& red) {
    SectionData nu;
    nu.values.resize(K.num_charts());
    for (int c = 0; c < K.num_charts(); ++c) nu.values[c].assign(red.V[c].size(), 1);
    if (!doc.contains("sections")) throw ParseError("section file needs a sections array");
    for (auto& sec : doc.at("sections")) {
        IndexSet I = sec.at("index").get<std::vector<int>>();
        std::sort(I.begin(), I.end());
        if (!K.has_index(I)) throw ParseError("section references unknown chart " + iset_str(I));
        int c = K.chart_id(I);
        for (auto& [name, val] : sec.at("values").items()) {
            auto p = K.chart(c).space.index_of(name);
            if (!p) throw ParseError("section references unknown point " + name);
            auto it = std::lower_bound(red.V[c].begin(), red.V[c].end(), *p);
            if (it == red.V[c].end() || *it != *p) continue; // outside V_I: irrelevant
            nu.values[c][it - red.V[c].begin()] = val.get<int>();
        }
    }
    if (doc.contains("signs"))
        for (auto& s : doc.at("signs")) {
            IndexSet I = s.at("index").get<std::vector<int>>();
            std::sort(I.begin(), I.end());
            int c = K.chart_id(I);
            auto p = K.chart(c).space.index_of(s.at("point").get<std::string>());
            if (!p) throw ParseError("sign references unknown point");
            auto it = std::lower_bound(red.V[c].begin(), red.V[c].end(), *p);
            if (it == red.V[c].end() || *it != *p)
                throw ParseError("sign references a point outside V");
            nu.signs[{c, static_cast<int>(it - red.V[c].begin())}] = s.at("sign").get<int>();
        }
    return nu;
}

json section_to_json(const Atlas& K, const Reduction& red, const SectionData& nu) {
    json j;
    json secs = json::array();
    for (int c = 0; c < K.num_charts(); ++c) {
        json sec;
        sec["index"] = K.chart(c).index;
        json vals = json::object();
        for (size_t l = 0; l < red.V[c].size(); ++l)
            vals[K.chart(c).space.name(red.V[c][l])] = nu.values[c][l];
        sec["values"] = vals;
        secs.push_back(sec);
    }
    j["sections"] = secs;
    json signs = json::array();
    for (auto& [key, sign] : nu.signs) {
        json s;
        s["index"] = K.chart(key.first).index;
        s["point"] = K.chart(key.first).space.name(red.V[key.first][key.second]);
        s["sign"] = sign;
        signs.push_back(s);
    }
    j["signs"] = signs;
    return j;
}

} // namespace orb
