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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "embeddings.h"
#include "error.h"
#include "test_util.h"

namespace mcdebias {
namespace {

using testing::ThrownCode;

TEST(EmbeddingFormat, ParsesNames) {
  EXPECT_EQ(ParseEmbeddingFormat("word2vec"), EmbeddingFormat::kWord2VecText);
  EXPECT_EQ(ParseEmbeddingFormat("glove-text"), EmbeddingFormat::kGloveText);
  EXPECT_EQ(ThrownCode([] { ParseEmbeddingFormat("fasttext-bin"); }),
            ErrorCode::kInvalidArgument);
}

TEST(ParseEmbeddings, Word2VecHeaderAndRows) {
  const LoadResult r = ParseEmbeddings("2 3\nhe 1 0 0\nshe 0 1 0\n",
                                       EmbeddingFormat::kWord2VecText);
  ASSERT_EQ(r.embeddings.size(), 2u);
  EXPECT_EQ(r.embeddings.dim(), 3u);
  EXPECT_EQ(r.embeddings.word(1), "she");
  EXPECT_DOUBLE_EQ(r.embeddings.row(1)(1), 1.0);
  EXPECT_FALSE(r.declared_count_mismatch.has_value());
}

TEST(ParseEmbeddings, GloveHasNoHeader) {
  const LoadResult r =
      ParseEmbeddings("a 1.5 -2\r\nb 3e-1 +4\n\n", EmbeddingFormat::kGloveText);
  ASSERT_EQ(r.embeddings.size(), 2u);
  EXPECT_DOUBLE_EQ(r.embeddings.row(0)(0), 1.5);
  EXPECT_DOUBLE_EQ(r.embeddings.row(1)(0), 0.3);
  EXPECT_DOUBLE_EQ(r.embeddings.row(1)(1), 4.0);
}

TEST(ParseEmbeddings, StripsByteOrderMark) {
  const LoadResult r =
      ParseEmbeddings("\xEF\xBB\xBFx 1 2\n", EmbeddingFormat::kGloveText);
  EXPECT_EQ(r.embeddings.word(0), "x");
}

TEST(ParseEmbeddings, CaseIsPreserved) {
  const LoadResult r =
      ParseEmbeddings("Mary 1 2\nmary 3 4\n", EmbeddingFormat::kGloveText);
  EXPECT_EQ(r.embeddings.size(), 2u);
  EXPECT_EQ(r.duplicate_count, 0u);
}

TEST(ParseEmbeddings, DuplicateKeepsFirst) {
  const LoadResult r =
      ParseEmbeddings("w 1 2\nw 3 4\nv 5 6\n", EmbeddingFormat::kGloveText);
  EXPECT_EQ(r.embeddings.size(), 2u);
  EXPECT_EQ(r.duplicate_count, 1u);
  EXPECT_DOUBLE_EQ(r.embeddings.row(*r.embeddings.find("w"))(0), 1.0);
}

TEST(ParseEmbeddings, DeclaredCountMismatchIsReported) {
  const LoadResult r =
      ParseEmbeddings("5 2\na 1 2\nb 3 4\n", EmbeddingFormat::kWord2VecText);
  ASSERT_TRUE(r.declared_count_mismatch.has_value());
  EXPECT_EQ(*r.declared_count_mismatch, 5u);
}

TEST(ParseEmbeddings, Errors) {
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("a 1 2\nb 1 2 3\n", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("a 1 x\n", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("a nan 1\n", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("lonely\n", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("2\na 1\n", EmbeddingFormat::kWord2VecText);
            }),
            ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("\n\n", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kEmptyFile);
  EXPECT_EQ(ThrownCode([] {
              ParseEmbeddings("0 3\n", EmbeddingFormat::kWord2VecText);
            }),
            ErrorCode::kEmptyFile);
}

TEST(LoadEmbeddings, MissingFileIsIoError) {
  EXPECT_EQ(ThrownCode([] {
              LoadEmbeddings("/nonexistent/vectors.txt", EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kIo);
}

TEST(EmbeddingSet, RejectsInvalidConstruction) {
  RowMatrix m(2, 2);
  m << 1, 0, 0, 1;
  EXPECT_EQ(ThrownCode([&] { EmbeddingSet({"a", "a"}, m); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { EmbeddingSet({"a"}, m); }),
            ErrorCode::kInvalidArgument);
  RowMatrix not_unit = m * 2.0;
  EXPECT_EQ(ThrownCode([&] { EmbeddingSet({"a", "b"}, not_unit, true); }),
            ErrorCode::kNotNormalized);
}

TEST(Normalize, ProducesUnitRows) {
  testing::Rng rng(3);
  const RowMatrix m = testing::RandomMatrix(rng, 20, 7) * 5.0;
  std::vector<std::string> words;
  for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i));
  const EmbeddingSet set(words, m);
  EXPECT_FALSE(set.RowsAreUnit());
  const EmbeddingSet unit = Normalize(set);
  EXPECT_TRUE(unit.normalized());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    EXPECT_NEAR(unit.row(i).norm(), 1.0, 1e-12);
    // Direction is preserved.
    EXPECT_NEAR(unit.row(i).dot(set.row(i)), set.row(i).norm(), 1e-9);
  }
}

TEST(Normalize, ZeroRowNamesTheWord) {
  RowMatrix m(2, 2);
  m << 1, 1, 0, 0;
  const EmbeddingSet set({"ok", "empty"}, m);
  try {
    Normalize(set);
    FAIL() << "expected ZeroVector";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
    EXPECT_NE(std::string(e.what()).find("empty"), std::string::npos);
  }
}

class RoundTrip : public ::testing::TestWithParam<EmbeddingFormat> {};

TEST_P(RoundTrip, SaveThenLoadIsExact) {
  testing::Rng rng(11);
  const RowMatrix m = testing::RandomMatrix(rng, 30, 9);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("word_" + std::to_string(i));
  const EmbeddingSet set(words, m);
  const std::string path =
      (std::filesystem::temp_directory_path() /
       ("mcdebias_roundtrip_" + std::to_string(static_cast<int>(GetParam())) + ".txt"))
          .string();
  SaveEmbeddings(set, path, GetParam());
  const LoadResult back = LoadEmbeddings(path, GetParam());
  std::filesystem::remove(path);
  ASSERT_EQ(back.embeddings.vocab(), words);
  EXPECT_EQ(back.embeddings.matrix(), m);
}

INSTANTIATE_TEST_SUITE_P(Formats, RoundTrip,
                         ::testing::Values(EmbeddingFormat::kWord2VecText,
                                           EmbeddingFormat::kGloveText));

TEST(SaveEmbeddings, UnwritablePathIsIoError) {
  RowMatrix m(1, 1);
  m << 1;
  const EmbeddingSet set({"a"}, m);
  EXPECT_EQ(ThrownCode([&] {
              SaveEmbeddings(set, "/nonexistent/dir/out.txt",
                             EmbeddingFormat::kGloveText);
            }),
            ErrorCode::kIo);
}

}  // namespace
}  // namespace mcdebias
