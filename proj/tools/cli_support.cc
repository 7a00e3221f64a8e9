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

#include "cli_support.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

namespace mcdebias::cli {

int ExitCodeFor(mcd_status status) {
  switch (status) {
    case MCD_OK:
      return kExitOk;
    case MCD_ERR_IO:
    case MCD_ERR_INTERNAL:
      return kExitIo;
    case MCD_ERR_RANK_DEFICIENT:
    case MCD_ERR_ZERO_ROW:
    case MCD_ERR_FULLY_CONTAINED:
    case MCD_ERR_EQUALIZE_DEGENERATE:
    case MCD_ERR_RADICAND_NEGATIVE:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

void Check(mcd_status status, const std::string& context) {
  if (status == MCD_OK) return;
  throw CliError(ExitCodeFor(status), context + ": " + mcd_status_name(status) +
                                          ": " + mcd_last_error());
}

std::string TakeString(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  mcd_string_free(s);
  return out;
}

mcd_format ParseFormat(const std::string& name) {
  if (name == "word2vec" || name == "word2vec-text") return MCD_FORMAT_WORD2VEC_TEXT;
  if (name == "glove" || name == "glove-text") return MCD_FORMAT_GLOVE_TEXT;
  throw CliError(kExitValidation, "unknown embedding format '" + name +
                                      "' (expected word2vec or glove)");
}

LoadedEmbeddings LoadEmbeddings(const std::string& path, mcd_format format) {
  mcd_embeddings* raw = nullptr;
  std::size_t duplicates = 0;
  Check(mcd_embeddings_load(path.c_str(), format, &raw, &duplicates),
        "loading " + path);
  return {Embeddings(raw), duplicates};
}

Embeddings LoadNormalized(const std::string& path, mcd_format format,
                          bool normalize, std::vector<std::string>* warnings) {
  LoadedEmbeddings loaded = LoadEmbeddings(path, format);
  if (loaded.duplicates > 0) {
    warnings->push_back(path + ": " + std::to_string(loaded.duplicates) +
                        " duplicate words ignored (first occurrence kept)");
  }
  if (!normalize && !mcd_embeddings_rows_are_unit(loaded.handle.get(), 1e-6)) {
    throw CliError(kExitValidation,
                   path + ": embeddings are not unit-normalized; hard-debiasing "
                          "requires unit vectors. Re-run with --normalize to "
                          "rescale every row to unit length.");
  }
  mcd_embeddings* unit = nullptr;
  Check(mcd_embeddings_normalize(loaded.handle.get(), &unit), "normalizing " + path);
  return Embeddings(unit);
}

std::vector<Category> LoadCategories(const std::vector<std::string>& paths) {
  std::vector<Category> out;
  for (const std::string& path : paths) {
    mcd_category* raw = nullptr;
    const mcd_status status = mcd_category_load(path.c_str(), &raw);
    if (status == MCD_ERR_IO) {
      throw CliError(kExitValidation, "loading spec " + path + ": " + mcd_last_error());
    }
    Check(status, "loading spec " + path);
    out.emplace_back(raw);
  }
  return out;
}

void ValidateCategories(const std::vector<Category>& categories,
                        const mcd_embeddings* embeddings, bool lowercase_fallback,
                        std::vector<std::string>* warnings) {
  for (const Category& c : categories) {
    char* report = nullptr;
    int fatal = 0;
    Check(mcd_category_validate(c.get(), embeddings, lowercase_fallback ? 1 : 0,
                                &report, &fatal),
          std::string("validating ") + mcd_category_name(c.get()));
    const nlohmann::json json = nlohmann::json::parse(TakeString(report));
    for (const auto& set : json["sets"]) {
      const auto& missing = set["missing"];
      if (missing.empty()) continue;
      std::string words;
      for (const auto& w : missing) {
        if (!words.empty()) words += ",";
        words += w.get<std::string>();
      }
      warnings->push_back(std::string(mcd_category_name(c.get())) + " " +
                          set["field"].get<std::string>() + "[" +
                          std::to_string(set["index"].get<std::size_t>()) +
                          "]: missing " + words);
    }
    if (fatal) {
      throw CliError(kExitValidation,
                     std::string("category '") + mcd_category_name(c.get()) +
                         "' has a defining set with no words in the vocabulary");
    }
  }
}

std::vector<const mcd_category*> Raw(const std::vector<Category>& categories) {
  std::vector<const mcd_category*> out;
  for (const Category& c : categories) out.push_back(c.get());
  return out;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw CliError(kExitValidation, "CSV ends inside a quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitIo, "cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(kExitIo, "cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw CliError(kExitIo, "failed writing '" + path + "'");
}

std::string Fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string Exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::uint64_t Fnv1a64(const std::string& data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

void Manifest::Write(const std::string& path) const {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(config.dump())));
  nlohmann::json root = {{"tool", "mcdebias"},
                         {"version", mcd_version()},
                         {"command", command},
                         {"argv", argv},
                         {"config", config},
                         {"config_hash", hash},
                         {"warnings", warnings},
                         {"details", details},
                         {"outputs", outputs}};
  WriteFile(path, root.dump(2) + "\n");
}

}  // namespace mcdebias::cli
