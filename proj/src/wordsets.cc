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

#include "wordsets.h"

#include <fstream>
#include <iterator>

#include "error.h"
#include "json.hpp"

namespace mcdebias {
namespace {

using nlohmann::json;

std::vector<WordList> ParseListOfLists(const json& root, const char* key,
                                       bool required) {
  auto it = root.find(key);
  if (it == root.end()) {
    if (required) {
      throw Error(ErrorCode::kSchema, std::string("missing field '") + key + "'");
    }
    return {};
  }
  if (!it->is_array()) {
    throw Error(ErrorCode::kSchema,
                std::string("field '") + key + "' must be a list of word lists");
  }
  std::vector<WordList> lists;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& inner = (*it)[i];
    if (!inner.is_array()) {
      throw Error(ErrorCode::kSchema, std::string("'") + key + "[" +
                                          std::to_string(i) +
                                          "]' must be a list of words");
    }
    if (inner.empty()) {
      throw Error(ErrorCode::kEmptySet,
                  std::string("'") + key + "[" + std::to_string(i) + "]' is empty");
    }
    WordList words;
    for (const json& w : inner) {
      if (!w.is_string() || w.get_ref<const std::string&>().empty()) {
        throw Error(ErrorCode::kSchema, std::string("'") + key + "[" +
                                            std::to_string(i) +
                                            "]' contains a non-string or empty word");
      }
      words.push_back(w.get<std::string>());
    }
    lists.push_back(std::move(words));
  }
  return lists;
}

std::string AsciiLower(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

CategorySpec ParseCategorySpec(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(ErrorCode::kSchema, "category spec must be a JSON object");
  }
  auto name = root.find("name");
  if (name == root.end() || !name->is_string() ||
      name->get_ref<const std::string&>().empty()) {
    throw Error(ErrorCode::kSchema, "field 'name' must be a nonempty string");
  }

  CategorySpec spec;
  spec.name = name->get<std::string>();
  spec.defining_sets = ParseListOfLists(root, "defining_sets", true);
  if (spec.defining_sets.empty()) {
    throw Error(ErrorCode::kSchema,
                "category '" + spec.name + "' has no defining sets");
  }
  spec.equality_sets = ParseListOfLists(root, "equality_sets", false);
  spec.target_words = ParseListOfLists(root, "target_words", false);
  spec.attribute_sets = ParseListOfLists(root, "attribute_sets", false);
  return spec;
}

CategorySpec LoadCategorySpec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open spec file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    return ParseCategorySpec(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string CategorySpecToJson(const CategorySpec& spec) {
  json root = {{"name", spec.name},
               {"defining_sets", spec.defining_sets},
               {"equality_sets", spec.equality_sets},
               {"target_words", spec.target_words},
               {"attribute_sets", spec.attribute_sets}};
  return root.dump(2);
}

std::optional<std::size_t> WordResolver::Resolve(std::string_view word) const {
  if (auto hit = set_.find(word)) return hit;
  if (lowercase_fallback_) return set_.find(AsciiLower(word));
  return std::nullopt;
}

std::vector<std::size_t> WordResolver::ResolveAll(const WordList& words,
                                                  WordList* missing) const {
  std::vector<std::size_t> rows;
  rows.reserve(words.size());
  for (const std::string& w : words) {
    if (auto hit = Resolve(w)) {
      rows.push_back(*hit);
    } else if (missing != nullptr) {
      missing->push_back(w);
    }
  }
  return rows;
}

std::size_t ValidationReport::total_missing() const {
  std::size_t n = 0;
  for (const SetResolution& s : sets) n += s.missing.size();
  return n;
}

std::string ValidationReport::ToJson() const {
  json sets_json = json::array();
  for (const SetResolution& s : sets) {
    sets_json.push_back({{"field", s.field},
                         {"index", s.index},
                         {"resolved", s.resolved},
                         {"missing", s.missing}});
  }
  json root = {{"category", category}, {"fatal", fatal}, {"sets", sets_json}};
  return root.dump();
}

ValidationReport ValidateAgainstVocab(const CategorySpec& spec,
                                      const EmbeddingSet& set,
                                      bool lowercase_fallback) {
  WordResolver resolver(set, lowercase_fallback);
  ValidationReport report;
  report.category = spec.name;
  auto check = [&](const char* field, const std::vector<WordList>& lists,
                   bool defining) {
    for (std::size_t i = 0; i < lists.size(); ++i) {
      SetResolution res;
      res.field = field;
      res.index = i;
      res.resolved = resolver.ResolveAll(lists[i], &res.missing).size();
      if (defining && res.resolved == 0) report.fatal = true;
      report.sets.push_back(std::move(res));
    }
  };
  check("defining_sets", spec.defining_sets, true);
  check("equality_sets", spec.equality_sets, false);
  check("target_words", spec.target_words, false);
  check("attribute_sets", spec.attribute_sets, false);
  return report;
}

ResolvedCategory ResolveCategory(const CategorySpec& spec,
                                 const EmbeddingSet& set,
                                 bool lowercase_fallback) {
  WordResolver resolver(set, lowercase_fallback);
  ResolvedCategory out;
  out.name = spec.name;
  auto resolve = [&](const std::vector<WordList>& lists) {
    std::vector<std::vector<std::size_t>> rows;
    rows.reserve(lists.size());
    for (const WordList& words : lists) rows.push_back(resolver.ResolveAll(words));
    return rows;
  };
  out.defining_sets = resolve(spec.defining_sets);
  for (std::size_t i = 0; i < out.defining_sets.size(); ++i) {
    if (out.defining_sets[i].empty()) {
      throw Error(ErrorCode::kFatalValidation,
                  "category '" + spec.name + "': defining set " +
                      std::to_string(i) + " has no words in the vocabulary");
    }
  }
  out.equality_sets = resolve(spec.equality_sets);
  out.target_words = resolve(spec.target_words);
  out.attribute_sets = resolve(spec.attribute_sets);
  return out;
}

}  // namespace mcdebias
