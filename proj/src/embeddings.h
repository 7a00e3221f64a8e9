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

#ifndef MCDEBIAS_SRC_EMBEDDINGS_H_
#define MCDEBIAS_SRC_EMBEDDINGS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "types.h"

namespace mcdebias {

enum class EmbeddingFormat { kWord2VecText, kGloveText };

// Parses "word2vec" / "glove" (with or without a "-text" suffix).
EmbeddingFormat ParseEmbeddingFormat(std::string_view name);
const char* EmbeddingFormatName(EmbeddingFormat format);

// Immutable vocabulary-to-vector map. Row i of matrix() is the vector of
// word(i). Operations that change vectors return a new set.
class EmbeddingSet {
 public:
  // Throws kInvalidArgument on duplicate words, a vocab/row count mismatch,
  // zero dimension or non-finite entries, and kNotNormalized if `normalized`
  // is claimed but some row is not unit length within 1e-6.
  EmbeddingSet(std::vector<std::string> vocab, RowMatrix matrix,
               bool normalized = false);

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& word(std::size_t i) const { return vocab_[i]; }
  const RowMatrix& matrix() const { return matrix_; }
  auto row(std::size_t i) const {
    return matrix_.row(static_cast<Eigen::Index>(i));
  }

  std::optional<std::size_t> find(std::string_view word) const;

  // True when every row has unit L2 norm within `tolerance`.
  bool RowsAreUnit(double tolerance = 1e-6) const;

  // Same vocabulary, new vectors.
  EmbeddingSet WithMatrix(RowMatrix matrix, bool normalized) const;

 private:
  std::vector<std::string> vocab_;
  RowMatrix matrix_;
  std::unordered_map<std::string, std::size_t> index_;
  bool normalized_ = false;
};

struct LoadResult {
  EmbeddingSet embeddings;
  // Later occurrences of an already-seen word; the first occurrence wins.
  std::size_t duplicate_count = 0;
  // word2vec header count that disagreed with the number of rows read, if any.
  std::optional<std::size_t> declared_count_mismatch;
};

LoadResult LoadEmbeddings(const std::string& path, EmbeddingFormat format);
LoadResult ParseEmbeddings(std::string_view text, EmbeddingFormat format);

// Values are written in shortest round-trip form, so a reload is bit-exact.
void SaveEmbeddings(const EmbeddingSet& set, const std::string& path,
                    EmbeddingFormat format);

// Rescales every row to unit length. Throws kZeroVector naming the first word
// whose norm is below 1e-12.
EmbeddingSet Normalize(const EmbeddingSet& set);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_EMBEDDINGS_H_
