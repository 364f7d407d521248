#include <cstdio>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "xnet/scene_io.hpp"

using namespace xnet;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_scene(text);
    } catch (const StructuralError& e) {
        return e.what();
    }
    return "";
}

std::string matrix_error(const std::string& text)
{
    try {
        parse_distance_matrix(text);
    } catch (const StructuralError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(SceneIo, RoundTripOfEveryScenario)
{
    for (const auto& name : scenario_names()) {
        const auto s = scenario_library(name);
        const auto text = scene_to_string(s);
        const auto back = parse_scene(text);
        EXPECT_EQ(scene_to_string(back), text) << name;
        EXPECT_EQ(back.samples, s.samples);
        for (double t : {-0.05, 0.0, 0.003, 0.07}) EXPECT_EQ(eval_scene(back, t).points, eval_scene(s, t).points) << name;
    }
}

TEST(SceneIo, FixedPointsWithoutCurves)
{
    const auto s = parse_scene(R"({"dimension": 2, "points": [[0,0],[1,0],[1,1]]})");
    EXPECT_EQ(s.curves.size(), 3u);
    EXPECT_EQ(s.kind.p, 2.0);
    EXPECT_EQ(eval_scene(s, 0.05).points[2], (Point{1, 1}));
}

TEST(SceneIo, FieldDiagnostics)
{
    EXPECT_NE(error_of("[1,2]").find("JSON object"), std::string::npos);
    EXPECT_NE(error_of("{").find("not valid JSON"), std::string::npos);
    EXPECT_NE(error_of(R"({"points": [[0,0],[1,0]]})").find("'dimension'"), std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1]]})").find("points[1]"), std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1,"x"]]})").find("points[1][1]"), std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[0,0]]})").find("coincide"), std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1,0]], "curves": [{"kind": "spline"}, {"kind": "poly", "coeffs": [[1,0]]}]})")
                  .find("curves[0].kind"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1,0]], "curves": [{"kind": "poly", "coeffs": [[0,1]]}, {"kind": "poly", "coeffs": [[1,0]]}]})")
                  .find("curves[0].coeffs[0]"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1,0]], "samples": 2.5})").find("'samples'"), std::string::npos);
    EXPECT_NE(error_of(R"({"dimension": 2, "points": [[0,0],[1,0]], "curves": [{"kind": "osc", "base": [0,0], "dir": [0,1], "flatness": -1}, {"kind": "poly", "coeffs": [[1,0]]}]})")
                  .find("flatness"),
              std::string::npos);
}

TEST(SceneIo, LoadSceneNamesTheFile)
{
    const std::string path = ::testing::TempDir() + "xnet_bad_scene.json";
    std::ofstream(path) << R"({"dimension": 0, "points": []})";
    try {
        load_scene(path);
        FAIL() << "expected a StructuralError";
    } catch (const StructuralError& e) {
        EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
    }
    std::remove(path.c_str());
    EXPECT_THROW(load_scene(path), StructuralError);
}

TEST(DistanceMatrix, Parses)
{
    const auto r = parse_distance_matrix("3\n0 3 4\n3 0 5\n4 5 0\n\n");
    EXPECT_EQ(r.n(), 3u);
    EXPECT_EQ(r(0, 1), 3.0);
    EXPECT_EQ(r(0, 2), 4.0);
    EXPECT_EQ(r(1, 2), 5.0);
}

TEST(DistanceMatrix, Errors)
{
    EXPECT_NE(matrix_error("").find("empty"), std::string::npos);
    EXPECT_NE(matrix_error("1\n0\n").find("n >= 2"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 1\n").find("ends after 1 of 2"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 1\n1 0 5\n").find("line 3"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 x\n1 0\n").find("'x'"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 1\n2 0\n").find("not symmetric"), std::string::npos);
    EXPECT_NE(matrix_error("2\n1 1\n1 0\n").find("(1,1)"), std::string::npos);
    EXPECT_NE(matrix_error("3\n0 1 3\n1 0 1\n3 1 0\n").find("triangle"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 -1\n-1 0\n").find("negative"), std::string::npos);
    EXPECT_NE(matrix_error("2\n0 1\n1 0\n0 0\n").find("extra row"), std::string::npos);
}
