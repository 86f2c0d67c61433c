// orbatlas: strict orbifold atlases over finite models — validation,
// groupoid completion, resolutions, weightings, and invariants.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "orbatlas/atlas_io.hpp"
#include "orbatlas/cat_bk.hpp"
#include "orbatlas/completion.hpp"
#include "orbatlas/derive.hpp"
#include "orbatlas/fixtures.hpp"
#include "orbatlas/invariants.hpp"
#include "orbatlas/resolve.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitParse = 2;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw orb::ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw orb::ParseError(std::string("JSON parse failure: ") + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

orb::Atlas load_atlas(const std::string& path) { return orb::atlas_from_json(load_json(path)); }

void emit_report(const orb::Report& rep, bool as_json, const std::string& head) {
    if (as_json) {
        json j = orb::report_to_json(rep);
        j["stage"] = head;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << head << ":\n" << orb::report_to_text(rep);
    }
}

void maybe_dot(const orb::GroupoidModel& m, const std::string& dir, const std::string& name) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream out(dir + "/" + name + ".dot");
    orb::dot_export(m, out);
}

orb::SectionData pole_section(const orb::Atlas& K, const orb::Reduction& red) {
    // Vanishes exactly over the poles N and S (useful for the football).
    orb::SectionData nu;
    nu.values.resize(K.num_charts());
    auto n = K.base.index_of("N");
    auto s = K.base.index_of("S");
    for (int c = 0; c < K.num_charts(); ++c) {
        nu.values[c].assign(red.V[c].size(), 1);
        for (size_t l = 0; l < red.V[c].size(); ++l) {
            int y = K.chart(c).footprint_map(red.V[c][l]);
            if ((n && y == *n) || (s && y == *s)) {
                nu.values[c][l] = 0;
                nu.signs[{c, static_cast<int>(l)}] = 1;
            }
        }
    }
    return nu;
}

struct PipelineOut {
    int exit{kExitOk};
    json summary = json::object();
};

PipelineOut run_pipeline(const orb::Atlas& K, bool as_json, const std::string& dot_dir,
                         unsigned seed, const std::string& section_path, bool do_gerbe) {
    PipelineOut out;
    auto rep = orb::validate_atlas(K);
    emit_report(rep, as_json, "validate");
    out.summary["validate"] = rep.ok();
    if (!rep.ok()) {
        out.exit = kExitSemantic;
        return out;
    }

    orb::BkCategory bk = orb::BkCategory::build(K);
    orb::GkGroupoid gk = orb::GkGroupoid::build(K);
    maybe_dot(bk.model(), dot_dir, "bk");
    maybe_dot(gk.model(), dot_dir, "gk");
    auto bkrep = bk.verify();
    auto gkrep = gk.verify();
    emit_report(bkrep, as_json, "bk-laws");
    emit_report(gkrep, as_json, "gk-laws");
    if (!bkrep.ok() || !gkrep.ok()) {
        out.exit = kExitSemantic;
        return out;
    }

    orb::ReductionSearchOptions ropts;
    ropts.seed = seed;
    orb::Reduction red;
    try {
        red = orb::cover_reduction(K, ropts);
    } catch (const std::runtime_error& e) {
        std::cerr << "reduce: " << e.what() << "\n";
        out.exit = kExitSemantic;
        return out;
    }
    auto redrep = orb::validate_reduction(K, red);
    emit_report(redrep, as_json, "reduce");
    if (!redrep.ok()) {
        out.exit = kExitSemantic;
        return out;
    }

    auto vk = orb::ResolutionGroupoid::build(gk, red);
    auto vh = vk.hausdorff_close();
    maybe_dot(vh.model(), dot_dir, "vh");
    auto vkrep = vk.verify_structure();
    auto vhrep = vh.verify_structure();
    auto tworoute = vh.check_frontier_formula(vk);
    emit_report(vkrep, as_json, "resolution");
    emit_report(vhrep, as_json, "hausdorff-closure");
    emit_report(tworoute, as_json, "frontier-formula");

    auto [w, wrep] = orb::compute_weighting(vh, vk);
    emit_report(wrep, as_json, "weighting");
    if (as_json) std::cout << orb::weighting_to_json(w).dump(2) << "\n";
    auto wnb = orb::wnb_check(vk, vh, w);
    emit_report(wnb, as_json, "wnb-axioms");

    auto [lg, lgrep] = orb::orbifold_weighting(gk);
    auto push = orb::pushforward_check(w, lg, K.base);
    emit_report(lgrep, as_json, "lambda-g");
    emit_report(push, as_json, "pushforward");

    bool all =
        vkrep.ok() && vhrep.ok() && tworoute.ok() && wrep.ok() && wnb.ok() && lgrep.ok() && push.ok();

    if (do_gerbe) {
        auto gr = orb::gerbe_class(K);
        emit_report(gr.report, as_json, "gerbe");
        out.summary["gerbe_class"] = gr.class_bit;
        std::cout << "gerbe class: " << gr.class_bit
                  << (gr.trivial ? " (trivial)" : " (nontrivial)") << "\n";
        all = all && gr.report.ok();
    }

    if (!section_path.empty()) {
        auto nu = orb::section_from_json(load_json(section_path), K, red);
        auto euler = orb::euler_number(vh, w, nu);
        emit_report(euler.report, as_json, "euler");
        std::cout << "euler total: " << euler.total.str() << "\n";
        out.summary["euler_total"] = euler.total.str();
        all = all && euler.report.ok();
    }

    out.exit = all ? kExitOk : kExitSemantic;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbatlas: strict orbifold atlas kernel over finite models"};
    app.require_subcommand(1);

    std::string path, out_path, dot_dir, section_path, section_out;
    bool as_json = false, trace = false, do_verify = false;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_seed = false) {
        cmd->add_flag("--json", as_json, "emit machine-readable JSON reports");
        cmd->add_option("--dot", dot_dir, "directory for DOT exports");
        if (with_seed) cmd->add_option("--seed", seed, "search-ordering seed (0 = canonical)");
    };

    auto* validate = app.add_subcommand("validate", "check the atlas axioms");
    validate->add_option("file", path)->required();
    add_common(validate);

    auto* fixture = app.add_subcommand("fixture", "emit a built-in atlas document");
    std::string fixture_name;
    int fixture_charts = 0;
    std::string po_groups = "z2", po_sub = "id";
    fixture->add_option("name", fixture_name,
                        "football|one-chart|manifold-cover|two-chart|gerbe-trivial|"
                        "gerbe-nontrivial|point-orbifold|product|football-extended")
        ->required();
    fixture->add_option("--out", out_path, "output file (default stdout)");
    fixture->add_option("--charts", fixture_charts, "chart count parameter");
    fixture->add_option("--groups", po_groups, "point-orbifold factor groups: z2|z2z2|s3");
    fixture->add_option("--section-out", section_out,
                        "also write the canonical pole section file for the fixture");

    auto* complete = app.add_subcommand("complete", "build B_K and the completion G_K");
    complete->add_option("file", path)->required();
    complete->add_flag("--trace", trace, "print the lift data of every composition");
    complete->add_flag("--verify", do_verify, "run the exhaustive groupoid law suite");
    add_common(complete);

    auto* resolve = app.add_subcommand("resolve", "cover reduction and resolution V_K, V^H");
    resolve->add_option("file", path)->required();
    add_common(resolve, true);

    auto* weights = app.add_subcommand("weights", "weighting function and wnb axioms");
    weights->add_option("file", path)->required();
    add_common(weights, true);

    auto* gerbe = app.add_subcommand("gerbe", "Z/2 gerbe cocycle and triviality verdict");
    gerbe->add_option("file", path)->required();
    add_common(gerbe);

    auto* euler = app.add_subcommand("euler", "Euler number from a compatible section");
    euler->add_option("file", path)->required();
    euler->add_option("--section", section_path, "section file (default: pole section)");
    add_common(euler, true);

    auto* derive = app.add_subcommand("derive", "derive an atlas back from the completion");
    derive->add_option("file", path)->required();
    derive->add_option("--out", out_path, "write the derived atlas document");
    add_common(derive);

    auto* report = app.add_subcommand("report", "full pipeline report");
    report->add_option("file", path)->required();
    report->add_option("--section", section_path, "section file for the Euler stage");
    add_common(report, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixture->parsed()) {
            orb::Atlas K;
            if (fixture_name == "football") K = orb::fixtures::football();
            else if (fixture_name == "one-chart") K = orb::fixtures::one_chart();
            else if (fixture_name == "manifold-cover") K = orb::fixtures::manifold_cover();
            else if (fixture_name == "two-chart") K = orb::fixtures::two_chart_full_overlap();
            else if (fixture_name == "gerbe-trivial")
                K = orb::fixtures::gerbe(true, fixture_charts ? fixture_charts : 2);
            else if (fixture_name == "gerbe-nontrivial")
                K = orb::fixtures::gerbe(false, fixture_charts ? fixture_charts : 2);
            else if (fixture_name == "product") K = orb::fixtures::product_fixture();
            else if (fixture_name == "football-extended") K = orb::fixtures::football_extended();
            else if (fixture_name == "point-orbifold") {
                int n = fixture_charts ? fixture_charts : 2;
                if (po_groups == "z2") K = *orb::fixtures::point_orbifold_z2(n).atlas_ptr;
                else if (po_groups == "z2z2") K = *orb::fixtures::point_orbifold_z2z2(n).atlas_ptr;
                else if (po_groups == "s3") K = *orb::fixtures::point_orbifold_s3(n).atlas_ptr;
                else throw orb::ParseError("unknown point-orbifold groups " + po_groups);
            } else
                throw orb::ParseError("unknown fixture " + fixture_name);
            std::string text = orb::atlas_to_json(K).dump(2) + "\n";
            if (out_path.empty()) std::cout << text;
            else write_text(out_path, text);
            if (!section_out.empty()) {
                auto red = orb::cover_reduction(K);
                auto nu = pole_section(K, red);
                write_text(section_out, orb::section_to_json(K, red, nu).dump(2) + "\n");
            }
            return kExitOk;
        }

        orb::Atlas K = load_atlas(path);

        if (validate->parsed()) {
            auto rep = orb::validate_atlas(K);
            emit_report(rep, as_json, "validate");
            return rep.ok() ? kExitOk : kExitSemantic;
        }
        if (complete->parsed()) {
            auto rep = orb::validate_atlas(K);
            if (!rep.ok()) {
                emit_report(rep, as_json, "validate");
                return kExitSemantic;
            }
            orb::BkCategory bk = orb::BkCategory::build(K);
            orb::GkGroupoid gk = orb::GkGroupoid::build(K);
            if (trace) gk.set_trace(&std::cout);
            std::cout << "B_K: " << bk.model().num_objects() << " objects, "
                      << bk.model().num_mors() << " morphisms\n";
            std::cout << "G_K: " << gk.model().num_objects() << " objects, "
                      << gk.model().num_mors() << " morphisms\n";
            maybe_dot(bk.model(), dot_dir, "bk");
            maybe_dot(gk.model(), dot_dir, "gk");
            if (do_verify) {
                auto r1 = bk.verify();
                auto r2 = gk.verify();
                emit_report(r1, as_json, "bk-laws");
                emit_report(r2, as_json, "gk-laws");
                return r1.ok() && r2.ok() ? kExitOk : kExitSemantic;
            }
            return kExitOk;
        }
        if (resolve->parsed() || weights->parsed()) {
            auto rep = orb::validate_atlas(K);
            if (!rep.ok()) {
                emit_report(rep, as_json, "validate");
                return kExitSemantic;
            }
            orb::GkGroupoid gk = orb::GkGroupoid::build(K);
            orb::ReductionSearchOptions ropts;
            ropts.seed = seed;
            auto red = orb::cover_reduction(K, ropts);
            auto redrep = orb::validate_reduction(K, red);
            emit_report(redrep, as_json, "reduce");
            auto vk = orb::ResolutionGroupoid::build(gk, red);
            auto vh = vk.hausdorff_close();
            maybe_dot(vh.model(), dot_dir, "vh");
            auto r1 = vk.verify_structure();
            auto r2 = vh.verify_structure();
            auto r3 = vh.check_frontier_formula(vk);
            emit_report(r1, as_json, "resolution");
            emit_report(r2, as_json, "hausdorff-closure");
            emit_report(r3, as_json, "frontier-formula");
            bool ok = redrep.ok() && r1.ok() && r2.ok() && r3.ok();
            if (weights->parsed()) {
                auto [w, wrep] = orb::compute_weighting(vh, vk);
                emit_report(wrep, as_json, "weighting");
                std::cout << orb::weighting_to_json(w).dump(2) << "\n";
                auto wnb = orb::wnb_check(vk, vh, w);
                emit_report(wnb, as_json, "wnb-axioms");
                auto [lg, lgrep] = orb::orbifold_weighting(gk);
                auto push = orb::pushforward_check(w, lg, K.base);
                emit_report(push, as_json, "pushforward");
                ok = ok && wrep.ok() && wnb.ok() && lgrep.ok() && push.ok();
                if (!dot_dir.empty()) {
                    // overlay: objects over the branch locus get a red border
                    std::vector<int> hot;
                    for (int o = 0; o < vh.model().num_objects(); ++o)
                        for (int p : w.branch_locus)
                            if (w.real.cls_of[o] == p) hot.push_back(o);
                    fs::create_directories(dot_dir);
                    std::ofstream out(dot_dir + "/vh_branch_locus.dot");
                    orb::dot_export(vh.model(), out, 5000, hot);
                }
            }
            return ok ? kExitOk : kExitSemantic;
        }
        if (gerbe->parsed()) {
            auto rep = orb::validate_atlas(K);
            if (!rep.ok()) {
                emit_report(rep, as_json, "validate");
                return kExitSemantic;
            }
            auto gr = orb::gerbe_class(K);
            emit_report(gr.report, as_json, "gerbe");
            std::cout << "gerbe class: " << gr.class_bit
                      << (gr.trivial ? " (trivial)" : " (nontrivial)") << "\n";
            return gr.report.ok() ? kExitOk : kExitSemantic;
        }
        if (euler->parsed()) {
            auto rep = orb::validate_atlas(K);
            if (!rep.ok()) {
                emit_report(rep, as_json, "validate");
                return kExitSemantic;
            }
            orb::GkGroupoid gk = orb::GkGroupoid::build(K);
            orb::ReductionSearchOptions ropts;
            ropts.seed = seed;
            auto red = orb::cover_reduction(K, ropts);
            auto vk = orb::ResolutionGroupoid::build(gk, red);
            auto vh = vk.hausdorff_close();
            auto [w, wrep] = orb::compute_weighting(vh, vk);
            auto nu = section_path.empty() ? pole_section(K, red)
                                           : orb::section_from_json(load_json(section_path), K, red);
            auto res = orb::euler_number(vh, w, nu);
            emit_report(res.report, as_json, "euler");
            std::cout << "euler total: " << res.total.str() << "\n";
            if (!dot_dir.empty()) {
                fs::create_directories(dot_dir);
                std::ofstream out(dot_dir + "/zero_set.dot");
                orb::dot_export(res.zero_model, out);
            }
            return res.report.ok() && wrep.ok() ? kExitOk : kExitSemantic;
        }
        if (derive->parsed()) {
            auto rep = orb::validate_atlas(K);
            if (!rep.ok()) {
                emit_report(rep, as_json, "validate");
                return kExitSemantic;
            }
            orb::GkGroupoid gk = orb::GkGroupoid::build(K, /*with_mor_space=*/true);
            auto embs = orb::canonical_embeddings(gk);
            auto da = orb::derive_atlas(gk.ops(), embs);
            auto vrep = orb::validate_atlas(*da.atlas);
            emit_report(vrep, as_json, "derived-validate");
            orb::BkCategory bk2 = orb::BkCategory::build(*da.atlas);
            auto ind = orb::induced_functor(da, bk2, gk.ops());
            emit_report(ind.report, as_json, "induced-functor");
            if (!out_path.empty()) {
                json j = orb::atlas_to_json(*da.atlas);
                j["provenance"] = {{"derived_from", path},
                                   {"order", da.order}};
                write_text(out_path, j.dump(2) + "\n");
            }
            return vrep.ok() && ind.report.ok() ? kExitOk : kExitSemantic;
        }
        if (report->parsed()) {
            bool looks_gerbe = true;
            for (auto& [id, g] : K.basic_groups) looks_gerbe = looks_gerbe && g.order() == 2;
            looks_gerbe = looks_gerbe && K.num_charts() > 3;
            auto out = run_pipeline(K, as_json, dot_dir, seed, section_path, looks_gerbe);
            if (!out.summary.empty() && as_json) std::cout << out.summary.dump(2) << "\n";
            return out.exit;
        }
    } catch (const orb::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const orb::SemanticError& e) {
        std::cerr << "semantic error: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSemantic;
    }
    return kExitOk;
}
