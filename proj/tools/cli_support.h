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

// Support code shared by the mcdebias subcommands: RAII handles over the C
// API, exit-code mapping, input loading, CSV and manifest writing.

#ifndef MCDEBIAS_TOOLS_CLI_SUPPORT_H_
#define MCDEBIAS_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcdebias/mcdebias.h"

namespace mcdebias::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int ExitCodeFor(mcd_status status);

// Throws CliError carrying the library message when `status` is not MCD_OK.
void Check(mcd_status status, const std::string& context);

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};

using Embeddings =
    std::unique_ptr<mcd_embeddings, HandleDeleter<mcd_embeddings, mcd_embeddings_free>>;
using Category =
    std::unique_ptr<mcd_category, HandleDeleter<mcd_category, mcd_category_free>>;
using Subspace =
    std::unique_ptr<mcd_subspace, HandleDeleter<mcd_subspace, mcd_subspace_free>>;

// Takes ownership of a malloc'ed string from the library.
std::string TakeString(char* s);

mcd_format ParseFormat(const std::string& name);

struct LoadedEmbeddings {
  Embeddings handle;
  std::size_t duplicates = 0;
};

LoadedEmbeddings LoadEmbeddings(const std::string& path, mcd_format format);

// Loads embeddings for operations that need unit rows. Already-unit inputs are
// accepted; others are rescaled only when `normalize` is set and rejected with
// a validation error otherwise.
Embeddings LoadNormalized(const std::string& path, mcd_format format,
                          bool normalize, std::vector<std::string>* warnings);

std::vector<Category> LoadCategories(const std::vector<std::string>& paths);

// Runs vocabulary validation; missing words become warnings, an empty
// defining set is a validation error.
void ValidateCategories(const std::vector<Category>& categories,
                        const mcd_embeddings* embeddings, bool lowercase_fallback,
                        std::vector<std::string>* warnings);

std::vector<const mcd_category*> Raw(const std::vector<Category>& categories);

std::string CsvField(const std::string& field);
std::vector<std::vector<std::string>> ParseCsv(const std::string& text);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

// Fixed-point with six decimals.
std::string Fixed(double value);
// 17 significant digits.
std::string Exact(double value);

std::uint64_t Fnv1a64(const std::string& data);

// Writes a JSON manifest describing the run.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config;
  std::vector<std::string> warnings;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> outputs;

  void Write(const std::string& path) const;
};

}  // namespace mcdebias::cli

#endif  // MCDEBIAS_TOOLS_CLI_SUPPORT_H_
