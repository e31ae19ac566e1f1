#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "simplexviz/scene.hpp"
#include "test_support.hpp"

using namespace simplexviz;

namespace {

SimplexFrame tri() { return simplex_frame(2, 100.0); }

std::vector<PrismSample> samples_at(std::initializer_list<double> times) {
  std::vector<PrismSample> out;
  double k = 1.0;
  for (double t : times) {
    out.push_back({t, CoefficientVector({k, 2.0, 3.0}), Style{"#E01B1B", 1.0, {}}});
    k += 1.0;
  }
  return out;
}

std::vector<StagedSample> staged(std::initializer_list<int> stages) {
  std::vector<StagedSample> out;
  double t = 1.0;
  for (int s : stages) out.push_back({t++, s});
  return out;
}

std::vector<double> times_of(const std::vector<StagedSample>& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(s.timestamp);
  return out;
}

Scene labelled_triangle_scene() {
  Scene s;
  s.frame = tri();
  s.items.emplace_back(WireSimplex{WireKind::Triangle, {}});
  Marker learning;
  learning.coefficients = CoefficientVector({1, 1, 1});
  learning.radius = kLearningRadius;
  learning.role = MarkerRole::LearningSample;
  s.items.emplace_back(learning);
  Marker study;
  study.coefficients = CoefficientVector({3, 5, 2});
  s.items.emplace_back(study);
  s.items.emplace_back(PerpendicularFan{CoefficientVector({3, 5, 2}), {"#E01B1B", "#F7F307", "#07F70B"}, {}, {}});
  Trajectory path;
  path.waypoints = {{CoefficientVector({1, 1, 1}), {}}, {CoefficientVector({3, 5, 2}), {}}};
  s.items.emplace_back(path);
  s.items.emplace_back(SideLabels{{"1", "2", "3"}, {}});
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// build_prism_scene

TEST(BuildPrismScene, SingleSampleAtStart) {
  const TimeAxis axis(0, 10, 100);
  const auto samples = samples_at({0});
  const Scene s = build_prism_scene(samples, axis, tri());
  EXPECT_EQ(s.count<SliceTriangle>(), 1u);
  EXPECT_EQ(s.count<Marker>(), 1u);
  EXPECT_EQ(s.count<Trajectory>(), 0u);
  for (const auto& item : s.items) {
    if (const auto* slice = std::get_if<SliceTriangle>(&item)) {
      EXPECT_EQ(slice->offset, 0.0);
    }
  }
}

TEST(BuildPrismScene, FourTests) {
  const TimeAxis axis(1, 4, 90);
  const auto samples = samples_at({1, 2, 3, 4});
  const Scene s = build_prism_scene(samples, axis, tri());
  EXPECT_EQ(s.count<SliceTriangle>(), 4u);
  EXPECT_EQ(s.count<Marker>(), 4u);
  ASSERT_EQ(s.count<Trajectory>(), 1u);
  EXPECT_EQ(s.count<WireSimplex>(), 1u);
  EXPECT_EQ(std::get<WireSimplex>(s.items.front()).kind, WireKind::Prism);
  const auto& path = std::get<Trajectory>(s.items.back());
  EXPECT_EQ(path.waypoints.size(), 4u);
  EXPECT_EQ(path.kind, TrajectoryKind::Observed);
  EXPECT_TRUE(validate_scene(s).empty());
}

TEST(BuildPrismScene, SharedTimestampSharesSlice) {
  const TimeAxis axis(0, 10, 100);
  const auto samples = samples_at({5, 5});
  const Scene s = build_prism_scene(samples, axis, tri());
  EXPECT_EQ(s.count<SliceTriangle>(), 1u);
  std::vector<double> z;
  for (const auto& item : s.items) {
    if (const auto* m = std::get_if<Marker>(&item)) z.push_back(scene_position(s, m->coefficients, m->timestamp).z);
  }
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0], z[1]);
  EXPECT_NEAR(z[0], 50.0, 1e-12);
}

TEST(BuildPrismScene, MarkersSitInTheirSlices) {
  const TimeAxis axis(0, 8, 80);
  const auto samples = samples_at({6, 0, 2});
  const Scene s = build_prism_scene(samples, axis, tri());
  std::vector<double> times;
  for (const auto& item : s.items) {
    if (const auto* m = std::get_if<Marker>(&item)) {
      times.push_back(*m->timestamp);
      EXPECT_NEAR(scene_position(s, m->coefficients, m->timestamp).z, 10.0 * *m->timestamp, 1e-12);
    }
  }
  EXPECT_EQ(times, (std::vector<double>{0, 2, 6}));
}

TEST(BuildPrismScene, Errors) {
  const TimeAxis axis(0, 10, 100);
  EXPECT_THROW(build_prism_scene(std::vector<PrismSample>{}, axis, tri()), SceneError);
  const auto late = samples_at({11});
  EXPECT_THROW(build_prism_scene(late, axis, tri()), SceneError);
  const auto ok = samples_at({1});
  EXPECT_THROW(build_prism_scene(ok, axis, simplex_frame(3, 1.0)), SceneError);
}

TEST(BuildPrismScene, SliceCountEqualsDistinctTimes) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> t(0, 12);
  std::uniform_int_distribution<int> n(1, 20);
  const TimeAxis axis(0, 12, 60);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<PrismSample> samples;
    std::set<double> distinct;
    const int count = n(rng);
    for (int i = 0; i < count; ++i) {
      const double ts = t(rng);
      distinct.insert(ts);
      samples.push_back({ts, CoefficientVector(simplexviz::testing::random_coefficients(rng, 3)), {}});
    }
    const Scene s = build_prism_scene(samples, axis, tri());
    ASSERT_EQ(s.count<SliceTriangle>(), distinct.size());
    ASSERT_EQ(s.count<Marker>(), samples.size());
    ASSERT_EQ(s.count<Trajectory>(), samples.size() >= 2 ? 1u : 0u);
    ASSERT_TRUE(validate_scene(s).empty());
  }
}

// ---------------------------------------------------------------------------
// partition_four_pattern_series

TEST(Partition, RecoveryOverFiveTests) {
  const auto series = staged({3, 3, 2, 1, 0});
  const auto p = partition_four_pattern_series(std::span<const StagedSample>(series));
  EXPECT_EQ(times_of(p.first), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(times_of(p.second), (std::vector<double>{3, 4, 5}));
}

TEST(Partition, SinglePrismForStagesThreeToOne) {
  const auto series = staged({3, 2, 1});
  const auto p = partition_four_pattern_series(std::span<const StagedSample>(series));
  EXPECT_EQ(p.first.size(), 3u);
  EXPECT_TRUE(p.second.empty());
}

TEST(Partition, SinglePrismForStagesOneToZero) {
  const auto series = staged({1, 0});
  const auto p = partition_four_pattern_series(std::span<const StagedSample>(series));
  EXPECT_TRUE(p.first.empty());
  EXPECT_EQ(p.second.size(), 2u);
}

TEST(Partition, Errors) {
  EXPECT_THROW(partition_four_pattern_series(std::span<const StagedSample>()), SceneError);
  const auto rising = staged({1, 2});
  EXPECT_THROW(partition_four_pattern_series(std::span<const StagedSample>(rising)), SceneError);
  const auto bad = staged({4});
  EXPECT_THROW(partition_four_pattern_series(std::span<const StagedSample>(bad)), SceneError);
}

TEST(Partition, CoverageOverAllMonotoneSeries) {
  // Every non-increasing series up to length 7.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 7);
  std::uniform_int_distribution<int> stage(0, 3);
  for (int iter = 0; iter < 3000; ++iter) {
    std::vector<int> stages(static_cast<std::size_t>(len(rng)));
    for (int& s : stages) s = stage(rng);
    std::sort(stages.rbegin(), stages.rend());
    std::vector<StagedSample> series;
    for (std::size_t i = 0; i < stages.size(); ++i) series.push_back({static_cast<double>(i), stages[i]});
    const auto p = partition_four_pattern_series(std::span<const StagedSample>(series));

    for (const auto& s : p.first) ASSERT_GE(s.stage, 1);
    for (const auto& s : p.second) ASSERT_LE(s.stage, 2);

    std::vector<int> hits(series.size(), 0);
    for (const auto& s : p.first) ++hits[static_cast<std::size_t>(s.timestamp)];
    for (const auto& s : p.second) ++hits[static_cast<std::size_t>(s.timestamp)];
    for (std::size_t i = 0; i < series.size(); ++i) {
      ASSERT_GE(hits[i], 1);
      // Doubly covered samples must be valid in both triples.
      if (hits[i] == 2) {
        ASSERT_TRUE(series[i].stage == 1 || series[i].stage == 2);
      }
    }
    // Contiguous: first is a prefix, second a suffix.
    for (std::size_t i = 0; i < p.first.size(); ++i) ASSERT_EQ(p.first[i].timestamp, static_cast<double>(i));
    for (std::size_t i = 0; i < p.second.size(); ++i) {
      ASSERT_EQ(p.second[i].timestamp, static_cast<double>(series.size() - p.second.size() + i));
    }
  }
}

TEST(DominantStage, ArgmaxWithSevereTieBreak) {
  EXPECT_EQ(dominant_stage(CoefficientVector({9, 1, 1, 1})), 0);
  EXPECT_EQ(dominant_stage(CoefficientVector({1, 1, 1, 9})), 3);
  EXPECT_EQ(dominant_stage(CoefficientVector({1, 5, 5, 1})), 2);
  EXPECT_EQ(dominant_stage(CoefficientVector({2, 2, 2, 2})), 3);
  EXPECT_THROW(dominant_stage(CoefficientVector({1, 1, 1})), SceneError);
}

// ---------------------------------------------------------------------------
// validate_scene

TEST(ValidateScene, WellFormedTriangleScene) { EXPECT_TRUE(validate_scene(labelled_triangle_scene()).empty()); }

TEST(ValidateScene, ArityMismatch) {
  Scene s = labelled_triangle_scene();
  Marker m;
  m.coefficients = CoefficientVector({1, 2, 3, 4});
  s.items.emplace_back(m);
  const auto d = validate_scene(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "arity");
  EXPECT_EQ(d[0].item, s.items.size() - 1);
}

TEST(ValidateScene, DecreasingTrajectoryTimes) {
  const TimeAxis axis(0, 10, 100);
  Scene s = build_prism_scene(samples_at({1, 5}), axis, tri());
  Trajectory back;
  back.waypoints = {{CoefficientVector({1, 1, 1}), 6.0}, {CoefficientVector({1, 2, 1}), 2.0}};
  s.items.emplace_back(back);
  const auto d = validate_scene(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "timestamp-order");
}

TEST(ValidateScene, StudyMarkerMustOutsizeLearningSamples) {
  Scene s = labelled_triangle_scene();
  std::get<Marker>(s.items[2]).radius = kLearningRadius;
  const auto d = validate_scene(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "radius");
}

TEST(ValidateScene, StyleAndFanRules) {
  Scene s = labelled_triangle_scene();
  std::get<WireSimplex>(s.items[0]).style = Style{"red", 0.0, {2, -1}};
  std::get<PerpendicularFan>(s.items[3]).side_colors.pop_back();
  const auto d = validate_scene(s);
  std::multiset<std::string> rules;
  for (const auto& x : d) rules.insert(x.rule);
  EXPECT_EQ(rules.count("style"), 3u);
  EXPECT_EQ(rules.count("fan-colors"), 1u);
}

TEST(ValidateScene, PrismPrimitivesNeedAxis) {
  Scene s = labelled_triangle_scene();
  s.items.emplace_back(SliceTriangle{});
  const auto d = validate_scene(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "prism");
  s.view.transform_mode = 3;
  EXPECT_EQ(validate_scene(s).size(), 2u);
}

TEST(SceneModel, ItemsKeepInsertionOrder) {
  const Scene s = labelled_triangle_scene();
  EXPECT_TRUE(std::holds_alternative<WireSimplex>(s.items[0]));
  EXPECT_TRUE(std::holds_alternative<Marker>(s.items[1]));
  EXPECT_TRUE(std::holds_alternative<SideLabels>(s.items[5]));
  EXPECT_FALSE(s.show_digits);
}

TEST(SceneModel, ViewPresets) {
  EXPECT_EQ(view_preset_angles(0), std::make_pair(30.0, 60.0));
  EXPECT_EQ(view_preset_angles(1), std::make_pair(0.0, 0.0));
  EXPECT_THROW(view_preset_angles(9), SceneError);
}

TEST(SceneModel, SaturationReference) {
  Scene s = labelled_triangle_scene();
  EXPECT_FALSE(saturation_reference(s));
  s.saturation = SaturationEncoding{};
  EXPECT_EQ(saturation_reference(s), 10.0);
  s.saturation->reference = 4.0;
  EXPECT_EQ(saturation_reference(s), 4.0);
}
