// Copyright 2026 The qdiffuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdiffuse/checkpoint.h"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

Checkpoint Sample() {
  Checkpoint c;
  c.config = {{"task", "clustered"}, {"T", 2}};
  c.config_hash = "abc123";
  c.seed = 18446744073709551557ull;
  c.stream_keys = {{"train", 17}, {"generate", 99}};
  c.pipeline = BackwardPipeline(1, 2, 1, 2, AncillaKind::kHaarFirst);
  for (int t = 2; t >= 1; --t) {
    CircuitStep step = c.pipeline.step(t);
    std::vector<double> params(step.num_params());
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = 0.1 * t + 1e-17 * k - 0.3;
    step.set_params(params);
    c.pipeline.set_step(t, step);
    c.pipeline.mark_trained(t);
  }
  return c;
}

TEST(Checkpoint, JsonRoundTripIsExact) {
  const auto c = Sample();
  const auto back = checkpoint_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.config_hash, c.config_hash);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.stream_keys, c.stream_keys);
  EXPECT_EQ(back.pipeline.ancilla_kind(), AncillaKind::kHaarFirst);
  EXPECT_EQ(back.pipeline.trained_down_to(), 1);
  for (int t = 1; t <= 2; ++t) {
    const auto a = c.pipeline.step(t).params();
    const auto b = back.pipeline.step(t).params();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
  }
}

TEST(Checkpoint, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "qdiffuse_checkpoint_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "model.json";
  save_checkpoint(path, Sample());
  const auto back = load_checkpoint(path);
  EXPECT_EQ(to_json(back), to_json(Sample()));
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsWrongSchemaAndShape) {
  auto j = to_json(Sample());
  j["schema_version"] = kCheckpointSchemaVersion + 1;
  EXPECT_THROW(checkpoint_from_json(j), InvalidArgument);
  j = to_json(Sample());
  j["pipeline"]["steps"].erase(0);
  EXPECT_THROW(checkpoint_from_json(j), InvalidArgument);
  j = to_json(Sample());
  j["pipeline"]["steps"][0]["params"].push_back(1.0);
  EXPECT_THROW(checkpoint_from_json(j), InvalidArgument);
  j = to_json(Sample());
  j["pipeline"]["ancilla"] = "thermal";
  EXPECT_THROW(checkpoint_from_json(j), InvalidArgument);
  j = to_json(Sample());
  j.erase("seed");
  EXPECT_THROW(checkpoint_from_json(j), InvalidArgument);
  EXPECT_THROW(load_checkpoint("/nonexistent/qdiffuse.json"), InvalidArgument);
}

TEST(TrainRecordJson, OmitsWallClock) {
  TrainRecord r;
  r.seed = 3;
  StepRecord s;
  s.step = 2;
  s.loss = {0.5, 0.25};
  s.learning_rate = {0.05, 0.0495};
  s.final_loss = 0.125;
  s.params = {1.0};
  s.seconds = 12.5;
  r.steps.push_back(s);
  const auto j = to_json(r);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["steps"][0]["loss"][1], 0.25);
  EXPECT_FALSE(j["steps"][0].contains("seconds"));
}

TEST(AncillaNames, RoundTrip) {
  for (auto k : {AncillaKind::kAllZero, AncillaKind::kHaarFirst}) {
    EXPECT_EQ(parse_ancilla(ancilla_name(k)), k);
  }
  EXPECT_THROW(parse_ancilla("bell"), InvalidArgument);
}

}  // namespace
}  // namespace qdiffuse
