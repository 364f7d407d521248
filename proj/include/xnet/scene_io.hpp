#ifndef XNET_SCENE_IO_HPP
#define XNET_SCENE_IO_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deformation.hpp"
#include "errors.hpp"
#include "metric.hpp"

// Scene files (JSON) and distance-matrix files (plain text).
//
// Scene:
//   {"name": "...", "dimension": 2, "metric": 2,
//    "points": [[x, y], ...],
//    "curves": [{"kind": "poly", "coeffs": [[...], [...]]},
//               {"kind": "osc", "base": [...], "dir": [...], "flatness": 1}],
//    "t0": 0, "window": 0.1, "samples": 64}
// "curves", "t0", "window" and "samples" are optional; without curves every
// point stays fixed.

namespace xnet {

using Json = nlohmann::json;

namespace detail {

inline Point read_point(const Json& j, const std::string& where, std::size_t k)
{
    if (!j.is_array()) throw StructuralError(where + ": expected an array of " + std::to_string(k) + " numbers");
    if (j.size() != k)
        throw StructuralError(where + ": expected " + std::to_string(k) + " coordinates, got " + std::to_string(j.size()));
    Point p;
    for (std::size_t a = 0; a < k; ++a) {
        if (!j[a].is_number()) throw StructuralError(where + "[" + std::to_string(a) + "]: expected a number");
        p.push_back(j[a].get<double>());
        if (!std::isfinite(p.back())) throw StructuralError(where + "[" + std::to_string(a) + "]: not finite");
    }
    return p;
}

inline const Json& field(const Json& j, const char* key)
{
    if (!j.contains(key)) throw StructuralError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline double number_field(const Json& j, const char* key)
{
    const auto& v = field(j, key);
    if (!v.is_number()) throw StructuralError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace detail

inline DeformationScene scene_from_json(const Json& j)
{
    if (!j.is_object()) throw StructuralError("scene file must hold a JSON object");
    DeformationScene s;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw StructuralError("field 'name' must be a string");
        s.name = j["name"].get<std::string>();
    }
    const double dim = detail::number_field(j, "dimension");
    if (!(dim >= 1.0) || dim != std::floor(dim)) throw StructuralError("field 'dimension' must be a positive integer");
    const auto k = static_cast<std::size_t>(dim);
    s.kind = MetricKind(j.contains("metric") ? detail::number_field(j, "metric") : 2.0);
    const auto& pts = detail::field(j, "points");
    if (!pts.is_array() || pts.size() < 2) throw StructuralError("field 'points' must list at least two points");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(detail::read_point(pts[i], "points[" + std::to_string(i) + "]", k));

    if (j.contains("curves")) {
        const auto& cs = j["curves"];
        if (!cs.is_array() || cs.size() != points.size())
            throw StructuralError("field 'curves' must hold one curve per point");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string where = "curves[" + std::to_string(i) + "]";
            const auto& c = cs[i];
            if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string())
                throw StructuralError(where + ": expected an object with a string 'kind'");
            const auto kind = c["kind"].get<std::string>();
            if (kind == "poly") {
                if (!c.contains("coeffs") || !c["coeffs"].is_array() || c["coeffs"].empty())
                    throw StructuralError(where + ".coeffs: expected a non-empty array");
                PolynomialCurve pc;
                for (std::size_t d = 0; d < c["coeffs"].size(); ++d)
                    pc.coeffs.push_back(detail::read_point(c["coeffs"][d], where + ".coeffs[" + std::to_string(d) + "]", k));
                if (pc.coeffs[0] != points[i]) throw StructuralError(where + ".coeffs[0] must equal points[" + std::to_string(i) + "]");
                s.curves.emplace_back(std::move(pc));
            } else if (kind == "osc") {
                OscillatoryCurve oc;
                if (!c.contains("base") || !c.contains("dir")) throw StructuralError(where + ": osc curves need 'base' and 'dir'");
                oc.base = detail::read_point(c["base"], where + ".base", k);
                oc.dir = detail::read_point(c["dir"], where + ".dir", k);
                if (c.contains("flatness")) {
                    if (!c["flatness"].is_number()) throw StructuralError(where + ".flatness: expected a number");
                    oc.flatness = c["flatness"].get<double>();
                }
                if (!(oc.flatness > 0.0)) throw StructuralError(where + ".flatness: must be positive");
                if (oc.base != points[i]) throw StructuralError(where + ".base must equal points[" + std::to_string(i) + "]");
                s.curves.emplace_back(std::move(oc));
            } else {
                throw StructuralError(where + ".kind: unknown curve kind '" + kind + "' (expected poly or osc)");
            }
        }
    } else {
        for (auto& p : points) s.curves.emplace_back(fixed_point(p));
    }
    if (j.contains("t0")) s.t0 = detail::number_field(j, "t0");
    if (j.contains("window")) s.window = detail::number_field(j, "window");
    if (j.contains("samples")) {
        const double n = detail::number_field(j, "samples");
        if (!(n >= 1.0) || n != std::floor(n)) throw StructuralError("field 'samples' must be a positive integer");
        s.samples = static_cast<std::size_t>(n);
    }
    s.validate();
    return s;
}

inline Json scene_to_json(const DeformationScene& s)
{
    Json j;
    j["name"] = s.name;
    j["dimension"] = s.dimension();
    j["metric"] = s.kind.p;
    // points are the t = 0 anchors the curves start from
    Json pts = Json::array(), curves = Json::array();
    for (const auto& c : s.curves) {
        if (const auto* p = std::get_if<PolynomialCurve>(&c)) {
            pts.push_back(p->coeffs[0]);
            curves.push_back({{"kind", "poly"}, {"coeffs", p->coeffs}});
        } else {
            const auto& o = std::get<OscillatoryCurve>(c);
            pts.push_back(o.base);
            curves.push_back({{"kind", "osc"}, {"base", o.base}, {"dir", o.dir}, {"flatness", o.flatness}});
        }
    }
    j["points"] = pts;
    j["curves"] = curves;
    j["t0"] = s.t0;
    j["window"] = s.window;
    j["samples"] = s.samples;
    return j;
}

inline std::string scene_to_string(const DeformationScene& s) { return scene_to_json(s).dump(2) + "\n"; }

inline DeformationScene parse_scene(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw StructuralError(std::string("scene is not valid JSON: ") + e.what());
    }
    return scene_from_json(j);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline DeformationScene load_scene(const std::string& path)
{
    try {
        return parse_scene(read_file(path));
    } catch (const StructuralError& e) {
        throw StructuralError(path + ": " + e.what());
    }
}

/// Distance matrix: the first line holds n, then n lines of n numbers each.
/// The matrix must be symmetric with a zero diagonal and satisfy the triangle
/// inequalities.
inline SemimetricVector parse_distance_matrix(const std::string& text, double slack = Tolerances{}.triangle_slack)
{
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw StructuralError("distance file is empty");
    std::size_t n = 0;
    {
        std::istringstream ls(line);
        long long v = 0;
        std::string extra;
        if (!(ls >> v) || (ls >> extra) || v < 2)
            throw StructuralError("line " + std::to_string(line_no) + ": expected the point count n >= 2");
        n = static_cast<std::size_t>(v);
    }
    std::vector<std::vector<double>> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_line()) throw StructuralError("distance file ends after " + std::to_string(i) + " of " + std::to_string(n) + " rows");
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || !std::isfinite(v))
                throw StructuralError("line " + std::to_string(line_no) + ": '" + tok + "' is not a number");
            m[i].push_back(v);
        }
        if (m[i].size() != n)
            throw StructuralError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " entries, got " +
                                  std::to_string(m[i].size()));
    }
    if (next_line()) throw StructuralError("line " + std::to_string(line_no) + ": unexpected extra row");
    SemimetricVector r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][i] != 0.0) throw StructuralError("entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") must be 0");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m[i][j] != m[j][i])
                throw StructuralError("matrix is not symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            r.at(i, j) = m[i][j];
        }
    }
    const auto rep = validate_semimetric(r, slack);
    if (!rep.ok) {
        if (rep.negative_entry) throw StructuralError("distance matrix has a negative entry");
        const auto& t = rep.violated_triples.front();
        throw StructuralError("triangle inequality fails for points (" + std::to_string(t[0] + 1) + "," +
                              std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) + ")");
    }
    return r;
}

} // namespace xnet

#endif
