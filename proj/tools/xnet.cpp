// xnet: command-line front end for the extreme-network library.
//
// Exit codes: 0 success, 1 malformed input, 2 refusal (enumeration guard,
// degenerate configuration, or a drawing the scene cannot support).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xnet/deformation.hpp"
#include "xnet/filling.hpp"
#include "xnet/functional.hpp"
#include "xnet/report.hpp"
#include "xnet/scene_io.hpp"
#include "xnet/steiner.hpp"
#include "xnet/svg.hpp"
#include "xnet/variation.hpp"

namespace {

using namespace xnet;

struct Output {
    std::string dir;

    void emit(const std::string& name, const std::string& text) const
    {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
        if (!out) throw StructuralError("cannot write '" + name + "' in '" + dir + "'");
        out << text;
    }
};

std::vector<Point> base_points(const DeformationScene& scene)
{
    return eval_scene(scene, scene.t0).points;
}

void write_network_svg(const Output& out, const std::string& name, const std::vector<Network>& nets,
                       const std::vector<std::string>& captions, std::size_t k, bool requested)
{
    if (k != 2) {
        if (requested) throw GuardRefusal("network drawings need a planar scene (k = 2), got k = " + std::to_string(k));
        return;
    }
    if (!out.dir.empty()) out.emit(name, network_svg(nets, captions));
}

int run_mst(const std::string& path, bool svg, const Output& out, const Tolerances& tol)
{
    const auto scene = load_scene(path);
    const auto pts = base_points(scene);
    const auto res = mst(pts, scene.kind, tol);
    const auto text = mst_report(pts, scene.kind, res, tol);
    std::cout << text;
    out.emit("mst_report.txt", text);
    std::vector<Network> nets;
    std::vector<std::string> captions;
    for (std::size_t i = 0; i < res.types.size(); ++i) {
        nets.push_back(network_from_edges(pts, res.types[i].edges, scene.kind));
        captions.push_back("type " + std::to_string(res.type_ids[i]));
    }
    write_network_svg(out, "mst.svg", nets, captions, scene.dimension(), svg);
    return 0;
}

int run_smt(const std::string& path, bool svg, const Output& out, const Tolerances& tol)
{
    const auto scene = load_scene(path);
    if (!scene.kind.euclidean()) throw StructuralError("smt needs the Euclidean metric (p = 2)");
    const auto pts = base_points(scene);
    const auto res = smt(pts, tol);
    const auto text = smt_report(pts, res, tol);
    std::cout << text;
    out.emit("smt_report.txt", text);
    std::vector<Network> nets;
    std::vector<std::string> captions;
    for (const auto& e : res.types) {
        nets.push_back(e.trace);
        captions.push_back("type " + std::to_string(e.type_id) + ", length " + num(e.solve.length));
    }
    write_network_svg(out, "smt.svg", nets, captions, scene.dimension(), svg);
    return 0;
}

int run_fill(const std::string& distances, const std::string& scene_path, std::size_t k_max, const Output& out,
             const Tolerances& tol)
{
    if (distances.empty() == scene_path.empty()) throw StructuralError("fill needs exactly one of --distances or --scene");
    SemimetricVector r;
    if (!distances.empty()) {
        r = parse_distance_matrix(read_file(distances), tol.triangle_slack);
    } else {
        const auto scene = load_scene(scene_path);
        r = pullback(base_points(scene), scene.kind);
    }
    if (k_max > kMaxTourMultiplicity)
        throw GuardRefusal("multi-tour enumeration allows --kmax <= " + std::to_string(kMaxTourMultiplicity));
    const auto res = mf(r, tol);
    std::vector<Rational> exact_r;
    for (double v : r.values()) exact_r.push_back(exact(v));
    const auto trees = enumerate_binary_trees(r.n());
    std::vector<FillTypeRow> rows;
    // the minimax check is skipped above the tour enumeration bound
    const bool tours = r.n() <= kMaxTourLabels && k_max > 0;
    for (auto id : res.type_ids) {
        FillTypeRow row;
        row.type_id = id;
        row.label = canonical_form(trees[id].tree());
        row.generalized = mpf_exact(exact_r, r.n(), trees[id].tree(), true).exact_weight;
        row.parametric = mpf_exact(exact_r, r.n(), trees[id].tree(), false).exact_weight;
        if (tours)
            row.eremin = eremin_check(exact_r, r.n(), trees[id].tree(), enumerate_multi_tours(trees[id].tree(), k_max), k_max);
        rows.push_back(std::move(row));
    }
    const auto text = fill_report(r, res, rows, k_max, tol);
    std::cout << text;
    out.emit("fill_report.txt", text);
    return 0;
}

int run_deform(const std::string& path, const std::string& scenario, const std::string& family_name_arg,
               std::optional<std::size_t> samples, const Output& out, const Tolerances& tol)
{
    if (path.empty() == scenario.empty()) throw StructuralError("deform needs a scene file or --scenario, not both");
    auto scene = path.empty() ? scenario_library(scenario) : load_scene(path);
    if (samples) {
        scene.samples = *samples;
        scene.validate();
    }
    const auto family = parse_family(family_name_arg);
    const auto tl = track_types(scene, family, tol);
    const auto rep = stabilization_report(tl);
    std::optional<Hypothesis> hyp;
    if (family == Family::Smt) hyp = classify_hypothesis(smt(base_points(scene), tol), tol);
    const auto text = deform_report(scene, tl, rep, hyp, tol);
    const auto csv = timeline_csv(tl);
    std::cout << text;
    if (out.dir.empty()) std::cout << "\n" << csv;
    out.emit("deform_report.txt", text);
    out.emit("timeline.csv", csv);
    out.emit("timeline.svg", timeline_svg(tl, rep));
    return 0;
}

int run_variation(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& u,
                  const std::vector<double>& v, double t, double h, const Output& out)
{
    const SegmentDeformation d(a, b, u, v);
    const double step = h > 0.0 ? h : default_fd_step(d);
    const auto text = variation_report(d, t, step);
    std::cout << text;
    out.emit("variation_report.txt", text);
    return 0;
}

int run_scenario(const std::string& name, const Output& out)
{
    const auto text = scene_to_string(scenario_library(name));
    if (out.dir.empty()) std::cout << text;
    else out.emit(name + ".json", text);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    // reserved; no core path draws random numbers
    [[maybe_unused]] const char* seed = std::getenv("XNET_SEED");

    CLI::App app{"Extreme networks over finite boundary sets and their deformations"};
    app.require_subcommand(1);
    app.fallthrough();
    Tolerances tol;
    Output out;
    app.add_option("--tie", tol.tie, "relative tie band for optimal type sets")->capture_default_str();
    app.add_option("--angle-tol", tol.angle, "angle certificate tolerance (rad)")->capture_default_str();
    app.add_option("--grad-tol", tol.grad, "gradient bound, times the boundary diameter")->capture_default_str();
    app.add_option("--degenerate-tol", tol.degenerate, "edge collapse threshold, times the boundary diameter")->capture_default_str();
    app.add_option("--margin", tol.margin, "stability margin above 2pi/3 (rad)")->capture_default_str();
    app.add_option("--triangle-slack", tol.triangle_slack, "absolute slack for triangle inequalities")->capture_default_str();
    app.add_option("--out", out.dir, "directory for report, CSV and SVG files");

    std::string scene_path, distances, scenario, family = "smt";
    bool svg = false;
    std::size_t k_max = 2;
    std::optional<std::size_t> samples;
    std::vector<double> va, vb, vu, vv;
    double t = 0.0, h = 0.0;

    auto* mst_cmd = app.add_subcommand("mst", "minimal spanning trees of a scene's boundary at t0");
    mst_cmd->add_option("scene", scene_path, "scene JSON file")->required();
    mst_cmd->add_flag("--svg", svg, "require a drawing (refused unless k = 2)");

    auto* smt_cmd = app.add_subcommand("smt", "Steiner minimal trees of a scene's boundary at t0");
    smt_cmd->add_option("scene", scene_path, "scene JSON file")->required();
    smt_cmd->add_flag("--svg", svg, "require a drawing (refused unless k = 2)");

    auto* fill_cmd = app.add_subcommand("fill", "minimal fillings of a finite metric space");
    fill_cmd->add_option("--distances", distances, "distance matrix file");
    fill_cmd->add_option("--scene", scene_path, "scene JSON file (distances at t0)");
    fill_cmd->add_option("--kmax", k_max, "largest multi-tour multiplicity for the minimax check")->capture_default_str();

    auto* deform_cmd = app.add_subcommand("deform", "track optimal types along a deformation");
    deform_cmd->add_option("scene", scene_path, "scene JSON file");
    deform_cmd->add_option("--scenario", scenario, "built-in scenario instead of a file");
    deform_cmd->add_option("--family", family, "mst, smt or fill")->capture_default_str();
    deform_cmd->add_option("--samples", samples, "override uniform samples per side");

    auto* var_cmd = app.add_subcommand("variation", "segment length derivatives with finite-difference checks");
    var_cmd->add_option("--a", va, "endpoint A")->delimiter(',')->required();
    var_cmd->add_option("--b", vb, "endpoint B")->delimiter(',')->required();
    var_cmd->add_option("--u", vu, "velocity of A")->delimiter(',')->required();
    var_cmd->add_option("--v", vv, "velocity of B")->delimiter(',')->required();
    var_cmd->add_option("--t", t, "evaluation parameter")->capture_default_str();
    var_cmd->add_option("--step", h, "finite-difference step (default 1e-4 max(1, |B - A|))");

    auto* scen_cmd = app.add_subcommand("scenario", "write a built-in scene file");
    scen_cmd->add_option("name", scenario, "figure1, figure2, square-diagonal or square-transversal")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*mst_cmd) return run_mst(scene_path, svg, out, tol);
        if (*smt_cmd) return run_smt(scene_path, svg, out, tol);
        if (*fill_cmd) return run_fill(distances, scene_path, k_max, out, tol);
        if (*deform_cmd) return run_deform(scene_path, scenario, family, samples, out, tol);
        if (*var_cmd) return run_variation(va, vb, vu, vv, t, h, out);
        if (*scen_cmd) return run_scenario(scenario, out);
    } catch (const GuardRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const SingularityError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
