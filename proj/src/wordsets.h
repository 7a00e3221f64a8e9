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

#ifndef MCDEBIAS_SRC_WORDSETS_H_
#define MCDEBIAS_SRC_WORDSETS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embeddings.h"

namespace mcdebias {

using WordList = std::vector<std::string>;

// Word lists describing one social category. Spec files are JSON objects:
//
//   {"name": "gender",
//    "defining_sets": [["he", "she"], ["man", "woman"]],
//    "equality_sets": [["king", "queen"]],
//    "target_words":  [["he", "she"]],
//    "attribute_sets": [["nurse", "secretary"], ["engineer", "pilot"]]}
//
// The last three keys are optional.
struct CategorySpec {
  std::string name;
  std::vector<WordList> defining_sets;
  std::vector<WordList> equality_sets;
  std::vector<WordList> target_words;
  std::vector<WordList> attribute_sets;
};

CategorySpec ParseCategorySpec(std::string_view json_text);
CategorySpec LoadCategorySpec(const std::string& path);
std::string CategorySpecToJson(const CategorySpec& spec);

// Exact match first, then (if enabled) the ASCII-lowercased word.
class WordResolver {
 public:
  WordResolver(const EmbeddingSet& set, bool lowercase_fallback)
      : set_(set), lowercase_fallback_(lowercase_fallback) {}

  std::optional<std::size_t> Resolve(std::string_view word) const;

  // Resolved row indices of `words`, in order, missing words dropped.
  std::vector<std::size_t> ResolveAll(const WordList& words,
                                      WordList* missing = nullptr) const;

 private:
  const EmbeddingSet& set_;
  bool lowercase_fallback_;
};

struct SetResolution {
  std::string field;  // "defining_sets", "equality_sets", ...
  std::size_t index = 0;
  std::size_t resolved = 0;
  WordList missing;
};

struct ValidationReport {
  std::string category;
  std::vector<SetResolution> sets;
  // Set iff some defining set resolved to zero words.
  bool fatal = false;

  std::size_t total_missing() const;
  std::string ToJson() const;
};

ValidationReport ValidateAgainstVocab(const CategorySpec& spec,
                                      const EmbeddingSet& set,
                                      bool lowercase_fallback);

// Category word lists mapped to row indices of one embedding set.
struct ResolvedCategory {
  std::string name;
  std::vector<std::vector<std::size_t>> defining_sets;
  std::vector<std::vector<std::size_t>> equality_sets;
  std::vector<std::vector<std::size_t>> target_words;
  std::vector<std::vector<std::size_t>> attribute_sets;
};

// Throws kFatalValidation if a defining set resolves to nothing.
ResolvedCategory ResolveCategory(const CategorySpec& spec,
                                 const EmbeddingSet& set,
                                 bool lowercase_fallback);

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_WORDSETS_H_
