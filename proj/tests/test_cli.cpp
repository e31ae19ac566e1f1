#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "simplexviz/cli.hpp"
#include "simplexviz/csv.hpp"
#include "test_support.hpp"

using namespace simplexviz;
using namespace simplexviz::cli;
using simplexviz::testing::gallery_path;
using simplexviz::testing::read_text;
using simplexviz::testing::ScratchDir;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome inspect(const std::filesystem::path& input) {
  RunConfig c;
  c.command = Command::Inspect;
  c.input = input;
  std::ostringstream out, err;
  Outcome o;
  o.code = cmd_inspect(c, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

/// Runs the built executable; stderr is captured to a file in `dir`.
Outcome run_binary(const ScratchDir& dir, const std::string& args) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + SIMPLEXVIZ_CLI_PATH + "\" " + args + " > /dev/null 2> \"" + err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.err = read_text(err_path);
  return o;
}

std::vector<double> marker_times(const Scene& s) {
  std::vector<double> out;
  for (const auto& item : s.items) {
    if (const auto* m = std::get_if<Marker>(&item)) out.push_back(*m->timestamp);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// render

TEST(CliRender, ListingToPng) {
  ScratchDir dir("render");
  const auto out = dir / "tetra.png";
  const Outcome o = run_binary(dir, "render \"" + gallery_path("tetrahedron.lns").string() + "\" -o \"" + out.string() + "\"");
  EXPECT_EQ(o.code, 0) << o.err;
  const std::string bytes = read_text(out);
  ASSERT_GT(bytes.size(), 8u);
  const Image img = decode_png(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
  EXPECT_EQ(img.width, 800);
  EXPECT_EQ(img.height, 600);
}

TEST(CliRender, FormatFromExtensionAndOverrides) {
  ScratchDir dir("render-svg");
  const auto out = dir / "tri.svg";
  const Outcome o = run_binary(dir, "render \"" + gallery_path("triangle.lns").string() + "\" -o \"" + out.string() +
                                        "\" --width 300 --height 200");
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string doc = read_text(out);
  EXPECT_NE(doc.find("<svg"), std::string::npos);
  EXPECT_NE(doc.find("width=\"300\""), std::string::npos);

  const auto forced = dir / "forced.out";
  ASSERT_EQ(run_binary(dir, "render \"" + gallery_path("triangle.lns").string() + "\" -o \"" + forced.string() +
                                "\" --format svg")
                .code,
            0);
  EXPECT_NE(read_text(forced).find("<svg"), std::string::npos);
}

TEST(CliRender, CameraOverridesChangeOutput) {
  ScratchDir dir("render-camera");
  const std::string in = "\"" + gallery_path("tetrahedron.lns").string() + "\"";
  ASSERT_EQ(run_binary(dir, "render " + in + " -o \"" + (dir / "a.svg").string() + "\"").code, 0);
  ASSERT_EQ(run_binary(dir, "render " + in + " -o \"" + (dir / "b.svg").string() + "\" --azimuth 120 --elevation 40").code, 0);
  EXPECT_NE(read_text(dir / "a.svg"), read_text(dir / "b.svg"));
}

TEST(CliRender, SyntaxErrorExitsOneWithPosition) {
  ScratchDir dir("render-bad");
  const auto in = dir.write("bad.lns", "addTriangle(\"#000\", 1, [1], 100);\naddPoint(;\n");
  const Outcome o = run_binary(dir, "render \"" + in.string() + "\" -o \"" + (dir / "bad.png").string() + "\"");
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("2:10"), std::string::npos) << o.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "bad.png"));
}

TEST(CliRender, IoErrorsExitTwo) {
  ScratchDir dir("render-io");
  const Outcome unwritable =
      run_binary(dir, "render \"" + gallery_path("tetrahedron.lns").string() + "\" -o \"" + (dir / "missing" / "x.png").string() + "\"");
  EXPECT_EQ(unwritable.code, 2) << unwritable.err;
  const Outcome unreadable = run_binary(dir, "render \"" + (dir / "nope.lns").string() + "\"");
  EXPECT_EQ(unreadable.code, 2);
}

TEST(CliRender, UsageErrors) {
  ScratchDir dir("usage");
  EXPECT_EQ(run_binary(dir, "").code, 1);
  EXPECT_EQ(run_binary(dir, "paint x.lns").code, 1);
  EXPECT_EQ(run_binary(dir, "render x.lns --width 10").code, 1);
  EXPECT_EQ(run_binary(dir, "render x.lns --format gif").code, 1);
  EXPECT_EQ(run_binary(dir, "from-csv x.csv --prism-length -1").code, 1);
  EXPECT_EQ(run_binary(dir, "--help").code, 0);
}

// ---------------------------------------------------------------------------
// validate

TEST(CliValidate, OkAndDiagnostics) {
  ScratchDir dir("validate");
  RunConfig c;
  c.command = Command::Validate;
  c.input = gallery_path("tetrahedron.lns");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_validate(c, out, err), 0);
  EXPECT_EQ(out.str(), "ok\n");

  c.input = dir.write("small.lns",
                      "addTriangle(\"#000\", 1, [1], 100);\n"
                      "addSample(\"#000\", 8, \"Circle\", 100, [1, 1, 1]);\n"
                      "addPoint(\"#000\", 6, \"Circle\", 100, [1, 2, 1]);\n");
  std::ostringstream out2;
  EXPECT_EQ(cmd_validate(c, out2, err), 1);
  EXPECT_NE(out2.str().find("item 2: radius"), std::string::npos) << out2.str();
}

// ---------------------------------------------------------------------------
// inspect

TEST(CliInspect, EqualCoefficientsGiveEqualDistances) {
  ScratchDir dir("inspect");
  const double edge = 2.0 * std::sqrt(3.0);  // height 3
  const auto in = dir.write("eq.lns", "addPoint(\"#000\", 6, \"Circle\", " + lns::format_number(edge) + ", [1, 1, 1]);\n");
  const Outcome o = inspect(in);
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = nlohmann::json::parse(o.out);
  EXPECT_EQ(report["simplex"]["height"], 3.0);
  ASSERT_EQ(report["points"].size(), 1u);
  EXPECT_EQ(report["points"][0]["distances"], nlohmann::json::parse("[1, 1, 1]"));
  EXPECT_EQ(report["points"][0]["sum"], 3.0);
  EXPECT_TRUE(report["prism"].is_null());
}

TEST(CliInspect, ListingReportsTwoPoints) {
  const Outcome o = inspect(gallery_path("tetrahedron.lns"));
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = nlohmann::json::parse(o.out);
  ASSERT_EQ(report["points"].size(), 2u);
  for (const auto& p : report["points"]) {
    EXPECT_EQ(p["distances"].size(), 4u);
    EXPECT_EQ(p["position"].size(), 3u);
    EXPECT_EQ(p["sum"], 15.0);
  }
  // Key order is fixed.
  EXPECT_LT(o.out.find("\"simplex\""), o.out.find("\"prism\""));
  EXPECT_LT(o.out.find("\"prism\""), o.out.find("\"points\""));
  EXPECT_EQ(inspect(gallery_path("tetrahedron.lns")).out, o.out);
}

TEST(CliInspect, PrismEndpointOffset) {
  ScratchDir dir("inspect-prism");
  const auto in = dir.write("p.lns",
                            "addPrism(\"#000\", 1, [1], 100, 75, 2, 9);\n"
                            "addPoint(\"#000\", 6, \"Circle\", 100, [1, 2, 3], 9);\n"
                            "addPoint(\"#000\", 6, \"Circle\", 100, [1, 2, 3], 2);\n");
  const Outcome o = inspect(in);
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = nlohmann::json::parse(o.out);
  EXPECT_EQ(report["points"][0]["prismOffset"], 75.0);
  EXPECT_EQ(report["points"][1]["prismOffset"], 0.0);
  EXPECT_EQ(report["prism"]["length"], 75.0);
}

TEST(CliInspect, ParseErrorExitsOne) {
  ScratchDir dir("inspect-bad");
  const Outcome o = inspect(dir.write("bad.lns", "addPoint(;"));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("1:10"), std::string::npos);
}

// ---------------------------------------------------------------------------
// from-csv

TEST(CliFromCsv, FourPatternSeriesGivesTwoPrisms) {
  ScratchDir dir("csv-dios");
  RunConfig c;
  c.command = Command::FromCsv;
  c.input = gallery_path("dios.csv");
  c.output = dir / "dios.lns";
  std::ostringstream err;
  ASSERT_EQ(cmd_from_csv(c, err), 0) << err.str();
  ASSERT_TRUE(std::filesystem::exists(dir / "dios_A.lns"));
  ASSERT_TRUE(std::filesystem::exists(dir / "dios_B.lns"));
  EXPECT_FALSE(std::filesystem::exists(dir / "dios.lns"));

  const auto rows = read_samples(read_text(c.input));
  ASSERT_EQ(rows.size(), 5u);
  const Scene a = lns::load_scene(read_text(dir / "dios_A.lns"));
  const Scene b = lns::load_scene(read_text(dir / "dios_B.lns"));
  EXPECT_EQ(marker_times(a), (std::vector<double>{rows[0].timestamp, rows[1].timestamp, rows[2].timestamp, rows[3].timestamp}));
  EXPECT_EQ(marker_times(b), (std::vector<double>{rows[2].timestamp, rows[3].timestamp, rows[4].timestamp}));
  EXPECT_TRUE(validate_scene(a).empty());
  EXPECT_TRUE(validate_scene(b).empty());

  // CSV -> LNS -> Scene equals CSV -> Scene.
  const auto direct = scenes_from_samples(rows, 100.0);
  ASSERT_EQ(direct.size(), 2u);
  EXPECT_EQ(direct[0].scene, a);
  EXPECT_EQ(direct[1].scene, b);
}

TEST(CliFromCsv, ThreeCoefficientSeriesGivesOnePrism) {
  ScratchDir dir("csv-learning");
  const Outcome o = run_binary(dir, "from-csv \"" + gallery_path("learning.csv").string() + "\" -o \"" +
                                        (dir / "learning.lns").string() + "\" --prism-length 60");
  ASSERT_EQ(o.code, 0) << o.err;
  const Scene s = lns::load_scene(read_text(dir / "learning.lns"));
  ASSERT_TRUE(s.prism_axis);
  EXPECT_EQ(s.prism_axis->length(), 60.0);
  EXPECT_EQ(s.count<WireSimplex>(), 1u);
  ASSERT_EQ(s.count<Trajectory>(), 1u);
  for (const auto& item : s.items) {
    if (const auto* t = std::get_if<Trajectory>(&item)) {
      EXPECT_EQ(t->waypoints.size(), 3u);
    }
  }
  EXPECT_EQ(s.count<SliceTriangle>(), 3u);
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir.path()), std::filesystem::directory_iterator()), 2);
}

TEST(CliFromCsv, EmptyBody) {
  ScratchDir dir("csv-empty");
  RunConfig c;
  c.command = Command::FromCsv;
  c.input = dir.write("empty.csv", "object_id,timestamp,a1,a2,a3\n");
  std::ostringstream err;
  EXPECT_EQ(cmd_from_csv(c, err), 1);
  EXPECT_NE(err.str().find("no samples"), std::string::npos) << err.str();
  EXPECT_FALSE(std::filesystem::exists(dir / "empty.lns"));
}

TEST(CliFromCsv, SchemaAndArityErrors) {
  ScratchDir dir("csv-errors");
  RunConfig c;
  c.command = Command::FromCsv;
  std::ostringstream err;
  c.input = dir.write("hdr.csv", "id,time,a,b,c\nx,0,1,2,3\n");
  EXPECT_EQ(cmd_from_csv(c, err), 1);
  c.input = dir.write("mixed.csv", "object_id,timestamp,a1,a2,a3\nx,0,1,2,3\nx,1,1,2\n");
  EXPECT_EQ(cmd_from_csv(c, err), 1);
  c.input = dir.write("zero.csv", "object_id,timestamp,a1,a2,a3\nx,0,0,0,0\n");
  EXPECT_EQ(cmd_from_csv(c, err), 1);
  c.input = dir.write("two.csv", "object_id,timestamp,a1,a2,a3\nx,0,1,2,3\ny,1,1,2,3\n");
  EXPECT_EQ(cmd_from_csv(c, err), 1);
  c.input = dir / "absent.csv";
  EXPECT_EQ(cmd_from_csv(c, err), 2);
}

// ---------------------------------------------------------------------------
// csv parsing

TEST(Csv, Timestamps) {
  EXPECT_EQ(parse_timestamp("12.5"), 12.5);
  EXPECT_EQ(parse_timestamp("1970-01-02"), 86400.0);
  EXPECT_EQ(parse_timestamp("1970-01-01T01:00:00Z"), 3600.0);
  EXPECT_EQ(parse_timestamp("1970-01-01T01:00:00+01:00"), 0.0);
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00.25Z"), 0.25);
  EXPECT_EQ(parse_timestamp("2016-01-11"), 1452470400.0);
  EXPECT_THROW(parse_timestamp("yesterday"), CsvError);
  EXPECT_THROW(parse_timestamp("2016-13-01"), CsvError);
}

TEST(Csv, QuotedFieldsAndOptionalStage) {
  const auto rows = read_samples(
      "object_id,timestamp,a1,a2,a3,a4,stage\r\n"
      "\"obj, one\",0,1,2,3,4,\r\n"
      "\"obj, one\",1,1,2,3,4,2\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].object_id, "obj, one");
  EXPECT_FALSE(rows[0].stage);
  EXPECT_EQ(rows[1].stage, 2);
  EXPECT_THROW(read_samples("object_id,timestamp,a1,a2,a3,stage\nx,0,1,2,3,7\n"), CsvError);
}
