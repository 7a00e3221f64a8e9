// Copyright 2026 The mcdebias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include <gtest/gtest.h>

#include "embeddings.h"
#include "error.h"
#include "json.hpp"
#include "test_util.h"
#include "wordsets.h"

namespace mcdebias {
namespace {

using testing::ThrownCode;

EmbeddingSet Vocab(const std::vector<std::string>& words) {
  RowMatrix m = RowMatrix::Identity(static_cast<Eigen::Index>(words.size()),
                                    static_cast<Eigen::Index>(words.size()));
  return EmbeddingSet(words, m, true);
}

TEST(ParseCategorySpec, FullSchema) {
  const CategorySpec spec = ParseCategorySpec(R"({
    "name": "gender",
    "defining_sets": [["he", "she"], ["man", "woman"]],
    "equality_sets": [["king", "queen"]],
    "target_words": [["he"], ["she"]],
    "attribute_sets": [["nurse"], ["engineer", "pilot"]]})");
  EXPECT_EQ(spec.name, "gender");
  ASSERT_EQ(spec.defining_sets.size(), 2u);
  EXPECT_EQ(spec.defining_sets[1][1], "woman");
  EXPECT_EQ(spec.equality_sets.size(), 1u);
  EXPECT_EQ(spec.attribute_sets[1].size(), 2u);
}

TEST(ParseCategorySpec, OptionalFieldsDefaultEmpty) {
  const CategorySpec spec =
      ParseCategorySpec(R"({"name": "x", "defining_sets": [["a", "b"]]})");
  EXPECT_TRUE(spec.equality_sets.empty());
  EXPECT_TRUE(spec.target_words.empty());
  EXPECT_TRUE(spec.attribute_sets.empty());
}

TEST(ParseCategorySpec, SchemaErrors) {
  EXPECT_EQ(ThrownCode([] { ParseCategorySpec("{not json"); }), ErrorCode::kSchema);
  EXPECT_EQ(ThrownCode([] { ParseCategorySpec(R"({"name": "x"})"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(R"({"name": "x", "defining_sets": []})");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(R"({"defining_sets": [["a"]]})");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(R"({"name": "x", "defining_sets": [["a", 3]]})");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(R"({"name": "x", "defining_sets": [["a", ""]]})");
            }),
            ErrorCode::kSchema);
}

TEST(ParseCategorySpec, EmptyInnerListIsEmptySet) {
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(R"({"name": "x", "defining_sets": [["a"], []]})");
            }),
            ErrorCode::kEmptySet);
  EXPECT_EQ(ThrownCode([] {
              ParseCategorySpec(
                  R"({"name": "x", "defining_sets": [["a"]], "attribute_sets": [[]]})");
            }),
            ErrorCode::kEmptySet);
}

TEST(CategorySpecToJson, RoundTrips) {
  CategorySpec spec;
  spec.name = "religion";
  spec.defining_sets = {{"jew", "christian", "muslim"}};
  spec.attribute_sets = {{"greedy"}, {"violent", "dirty"}};
  const CategorySpec back = ParseCategorySpec(CategorySpecToJson(spec));
  EXPECT_EQ(back.name, spec.name);
  EXPECT_EQ(back.defining_sets, spec.defining_sets);
  EXPECT_EQ(back.attribute_sets, spec.attribute_sets);
}

TEST(WordResolver, LowercaseFallbackIsOptIn) {
  const EmbeddingSet set = Vocab({"mary", "john"});
  EXPECT_FALSE(WordResolver(set, false).Resolve("Mary").has_value());
  EXPECT_EQ(WordResolver(set, true).Resolve("Mary"), std::optional<std::size_t>(0));
  WordList missing;
  const auto rows = WordResolver(set, false).ResolveAll({"john", "Bob", "mary"}, &missing);
  EXPECT_EQ(rows, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(missing, WordList{"Bob"});
}

TEST(ValidateAgainstVocab, ReportsMissingWords) {
  const EmbeddingSet set = Vocab({"he", "she", "nurse"});
  CategorySpec spec;
  spec.name = "gender";
  spec.defining_sets = {{"he", "she"}, {"man", "woman"}};
  spec.attribute_sets = {{"nurse", "pilot"}};
  const ValidationReport report = ValidateAgainstVocab(spec, set, false);
  EXPECT_TRUE(report.fatal);
  EXPECT_EQ(report.total_missing(), 3u);
  const auto json = nlohmann::json::parse(report.ToJson());
  EXPECT_EQ(json["category"], "gender");
  EXPECT_TRUE(json["fatal"].get<bool>());
  EXPECT_EQ(ThrownCode([&] { ResolveCategory(spec, set, false); }),
            ErrorCode::kFatalValidation);
}

TEST(ResolveCategory, DropsMissingNonDefiningWords) {
  const EmbeddingSet set = Vocab({"he", "she", "nurse"});
  CategorySpec spec;
  spec.name = "gender";
  spec.defining_sets = {{"he", "she"}};
  spec.attribute_sets = {{"nurse", "pilot"}};
  const ResolvedCategory r = ResolveCategory(spec, set, false);
  EXPECT_EQ(r.defining_sets[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.attribute_sets[0], (std::vector<std::size_t>{2}));
}

TEST(BundledData, SpecsParse) {
  for (const char* name : {"gender", "race", "religion", "race_gender_intersectional"}) {
    const CategorySpec spec =
        LoadCategorySpec(std::string(MCDEBIAS_DATA_DIR) + "/" + name + ".json");
    EXPECT_EQ(spec.name, name);
    EXPECT_FALSE(spec.defining_sets.empty());
    EXPECT_FALSE(spec.target_words.empty());
    EXPECT_FALSE(spec.attribute_sets.empty());
  }
  const CategorySpec inter = LoadCategorySpec(std::string(MCDEBIAS_DATA_DIR) +
                                              "/race_gender_intersectional.json");
  EXPECT_EQ(inter.defining_sets.size(), 6u);
  EXPECT_EQ(inter.defining_sets[0][0], "Aisha");
  EXPECT_EQ(inter.defining_sets[0][1], "Keisha");
  EXPECT_EQ(inter.defining_sets[0][2], "Lakisha");
}

TEST(LoadCategorySpec, MissingFileIsIoError) {
  EXPECT_EQ(ThrownCode([] { LoadCategorySpec("/nonexistent.json"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace mcdebias
