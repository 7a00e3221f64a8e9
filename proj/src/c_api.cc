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

#include "mcdebias/mcdebias.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "compose.h"
#include "debias.h"
#include "embeddings.h"
#include "error.h"
#include "eval.h"
#include "json.hpp"
#include "subspace.h"
#include "wordsets.h"

struct mcd_embeddings {
  mcdebias::EmbeddingSet set;
};

struct mcd_category {
  mcdebias::CategorySpec spec;
};

struct mcd_subspace {
  mcdebias::BiasSubspace subspace;
};

namespace {

using mcdebias::Error;
using mcdebias::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

mcd_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return MCD_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return MCD_ERR_IO;
    case ErrorCode::kMalformedLine: return MCD_ERR_MALFORMED_LINE;
    case ErrorCode::kDimensionMismatch: return MCD_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kEmptyFile: return MCD_ERR_EMPTY_FILE;
    case ErrorCode::kZeroVector: return MCD_ERR_ZERO_VECTOR;
    case ErrorCode::kNotNormalized: return MCD_ERR_NOT_NORMALIZED;
    case ErrorCode::kSchema: return MCD_ERR_SCHEMA;
    case ErrorCode::kEmptySet: return MCD_ERR_EMPTY_SET;
    case ErrorCode::kFatalValidation: return MCD_ERR_FATAL_VALIDATION;
    case ErrorCode::kRankDeficient: return MCD_ERR_RANK_DEFICIENT;
    case ErrorCode::kShapeMismatch: return MCD_ERR_SHAPE_MISMATCH;
    case ErrorCode::kZeroRow: return MCD_ERR_ZERO_ROW;
    case ErrorCode::kNotUnit: return MCD_ERR_NOT_UNIT;
    case ErrorCode::kNotOrthonormal: return MCD_ERR_NOT_ORTHONORMAL;
    case ErrorCode::kFullyContained: return MCD_ERR_FULLY_CONTAINED;
    case ErrorCode::kEqualizeDegenerate: return MCD_ERR_EQUALIZE_DEGENERATE;
    case ErrorCode::kRadicandNegative: return MCD_ERR_RADICAND_NEGATIVE;
    case ErrorCode::kPlan: return MCD_ERR_PLAN;
    case ErrorCode::kEmptyAttributeSet: return MCD_ERR_EMPTY_ATTRIBUTE_SET;
    case ErrorCode::kLengthMismatch: return MCD_ERR_LENGTH_MISMATCH;
    case ErrorCode::kNoValidGroups: return MCD_ERR_NO_VALID_GROUPS;
  }
  return MCD_ERR_INTERNAL;
}

template <typename F>
mcd_status Guard(F&& body) {
  try {
    body();
    return MCD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MCD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MCD_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, what);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mcdebias::EmbeddingFormat ToFormat(mcd_format format) {
  switch (format) {
    case MCD_FORMAT_WORD2VEC_TEXT: return mcdebias::EmbeddingFormat::kWord2VecText;
    case MCD_FORMAT_GLOVE_TEXT: return mcdebias::EmbeddingFormat::kGloveText;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown embedding format");
}

mcdebias::Vector ToVector(const double* values, std::size_t dim) {
  Require(values != nullptr || dim == 0, "null vector");
  return Eigen::Map<const mcdebias::Vector>(values, static_cast<Eigen::Index>(dim));
}

mcdebias::RowMatrix ToMatrix(const double* values, std::size_t rows,
                             std::size_t cols) {
  Require(values != nullptr || rows * cols == 0, "null matrix");
  return Eigen::Map<const mcdebias::RowMatrix>(values, static_cast<Eigen::Index>(rows),
                                               static_cast<Eigen::Index>(cols));
}

void CopyOut(const mcdebias::Vector& v, double* out, std::size_t dim) {
  Require(out != nullptr, "null output buffer");
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "output buffer has " + std::to_string(dim) + " slots, need " +
                    std::to_string(v.size()));
  }
  std::memcpy(out, v.data(), dim * sizeof(double));
}

std::vector<mcdebias::BiasSubspace> Subspaces(const mcd_subspace* const* list,
                                              std::size_t n) {
  Require(list != nullptr || n == 0, "null subspace list");
  std::vector<mcdebias::BiasSubspace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Require(list[i] != nullptr, "null subspace in list");
    out.push_back(list[i]->subspace);
  }
  return out;
}

std::vector<mcdebias::CategorySpec> Categories(const mcd_category* const* list,
                                               std::size_t n) {
  Require(list != nullptr || n == 0, "null category list");
  std::vector<mcdebias::CategorySpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Require(list[i] != nullptr, "null category in list");
    out.push_back(list[i]->spec);
  }
  return out;
}

std::vector<std::string> Strings(const char* const* list, std::size_t n) {
  Require(list != nullptr || n == 0, "null string list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    Require(list[i] != nullptr, "null string in list");
    out.emplace_back(list[i]);
  }
  return out;
}

mcdebias::DebiasStrategy ToStrategy(mcd_strategy strategy) {
  switch (strategy) {
    case MCD_STRATEGY_SINGLE: return mcdebias::DebiasStrategy::kSingle;
    case MCD_STRATEGY_SEQUENTIAL: return mcdebias::DebiasStrategy::kSequential;
    case MCD_STRATEGY_SUM: return mcdebias::DebiasStrategy::kSum;
    case MCD_STRATEGY_MEAN: return mcdebias::DebiasStrategy::kMean;
    case MCD_STRATEGY_JOSEC: return mcdebias::DebiasStrategy::kJosec;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
}

}  // namespace

extern "C" {

const char* mcd_last_error(void) { return g_last_error.c_str(); }

const char* mcd_status_name(mcd_status status) {
  switch (status) {
    case MCD_OK: return "OK";
    case MCD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case MCD_ERR_IO: return "IoError";
    case MCD_ERR_MALFORMED_LINE: return "MalformedLine";
    case MCD_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case MCD_ERR_EMPTY_FILE: return "EmptyFile";
    case MCD_ERR_ZERO_VECTOR: return "ZeroVector";
    case MCD_ERR_NOT_NORMALIZED: return "NotNormalized";
    case MCD_ERR_SCHEMA: return "SchemaError";
    case MCD_ERR_EMPTY_SET: return "EmptySet";
    case MCD_ERR_FATAL_VALIDATION: return "FatalValidation";
    case MCD_ERR_RANK_DEFICIENT: return "RankDeficient";
    case MCD_ERR_SHAPE_MISMATCH: return "ShapeMismatch";
    case MCD_ERR_ZERO_ROW: return "ZeroRow";
    case MCD_ERR_NOT_UNIT: return "NotUnit";
    case MCD_ERR_NOT_ORTHONORMAL: return "NotOrthonormal";
    case MCD_ERR_FULLY_CONTAINED: return "FullyContained";
    case MCD_ERR_EQUALIZE_DEGENERATE: return "EqualizeDegenerate";
    case MCD_ERR_RADICAND_NEGATIVE: return "RadicandNegative";
    case MCD_ERR_PLAN: return "PlanError";
    case MCD_ERR_EMPTY_ATTRIBUTE_SET: return "EmptyAttributeSet";
    case MCD_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case MCD_ERR_NO_VALID_GROUPS: return "NoValidGroups";
    case MCD_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* mcd_version(void) { return "1.0.0"; }

void mcd_string_free(char* s) { std::free(s); }

// Embeddings.

mcd_status mcd_embeddings_load(const char* path, mcd_format format,
                               mcd_embeddings** out, size_t* duplicates) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    mcdebias::LoadResult loaded = mcdebias::LoadEmbeddings(path, ToFormat(format));
    if (duplicates != nullptr) *duplicates = loaded.duplicate_count;
    *out = new mcd_embeddings{std::move(loaded.embeddings)};
  });
}

mcd_status mcd_embeddings_create(const char* const* words, size_t n,
                                 const double* values, size_t dim,
                                 mcd_embeddings** out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = new mcd_embeddings{
        mcdebias::EmbeddingSet(Strings(words, n), ToMatrix(values, n, dim))};
  });
}

mcd_status mcd_embeddings_save(const mcd_embeddings* e, const char* path,
                               mcd_format format) {
  return Guard([&] {
    Require(e != nullptr && path != nullptr, "null argument");
    mcdebias::SaveEmbeddings(e->set, path, ToFormat(format));
  });
}

mcd_status mcd_embeddings_normalize(const mcd_embeddings* e, mcd_embeddings** out) {
  return Guard([&] {
    Require(e != nullptr && out != nullptr, "null argument");
    *out = new mcd_embeddings{mcdebias::Normalize(e->set)};
  });
}

void mcd_embeddings_free(mcd_embeddings* e) { delete e; }

size_t mcd_embeddings_size(const mcd_embeddings* e) {
  return e == nullptr ? 0 : e->set.size();
}

size_t mcd_embeddings_dim(const mcd_embeddings* e) {
  return e == nullptr ? 0 : e->set.dim();
}

int mcd_embeddings_is_normalized(const mcd_embeddings* e) {
  return e != nullptr && e->set.normalized() ? 1 : 0;
}

int mcd_embeddings_rows_are_unit(const mcd_embeddings* e, double tolerance) {
  return e != nullptr && e->set.RowsAreUnit(tolerance) ? 1 : 0;
}

const char* mcd_embeddings_word(const mcd_embeddings* e, size_t i) {
  if (e == nullptr || i >= e->set.size()) return nullptr;
  return e->set.word(i).c_str();
}

mcd_status mcd_embeddings_vector(const mcd_embeddings* e, const char* word,
                                 double* out, size_t dim) {
  return Guard([&] {
    Require(e != nullptr && word != nullptr, "null argument");
    auto row = e->set.find(word);
    if (!row) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("word '") + word + "' is not in the vocabulary");
    }
    CopyOut(e->set.row(*row).transpose(), out, dim);
  });
}

// Categories.

mcd_status mcd_category_load(const char* path, mcd_category** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new mcd_category{mcdebias::LoadCategorySpec(path)};
  });
}

mcd_status mcd_category_parse(const char* json_text, mcd_category** out) {
  return Guard([&] {
    Require(json_text != nullptr && out != nullptr, "null argument");
    *out = new mcd_category{mcdebias::ParseCategorySpec(json_text)};
  });
}

void mcd_category_free(mcd_category* c) { delete c; }

const char* mcd_category_name(const mcd_category* c) {
  return c == nullptr ? nullptr : c->spec.name.c_str();
}

mcd_status mcd_category_validate(const mcd_category* c, const mcd_embeddings* e,
                                 int lowercase_fallback, char** report_json,
                                 int* fatal) {
  return Guard([&] {
    Require(c != nullptr && e != nullptr, "null argument");
    const mcdebias::ValidationReport report =
        mcdebias::ValidateAgainstVocab(c->spec, e->set, lowercase_fallback != 0);
    if (fatal != nullptr) *fatal = report.fatal ? 1 : 0;
    if (report_json != nullptr) *report_json = CopyString(report.ToJson());
  });
}

// Subspaces.

mcd_status mcd_subspace_build(const mcd_category* c, const mcd_embeddings* e,
                              size_t k, const mcd_subspace_options* options,
                              mcd_subspace** out, int* rank_deficient) {
  return Guard([&] {
    Require(c != nullptr && e != nullptr && out != nullptr, "null argument");
    mcdebias::SubspaceOptions opts;
    if (options != nullptr) {
      opts.double_center = options->double_center != 0;
      opts.lowercase_fallback = options->lowercase_fallback != 0;
    }
    mcdebias::PcaResult pca = mcdebias::BuildBiasSubspace(c->spec, e->set, k, opts);
    if (rank_deficient != nullptr) *rank_deficient = pca.rank_deficient ? 1 : 0;
    *out = new mcd_subspace{std::move(pca.subspace)};
  });
}

mcd_status mcd_principal_components(const double* rows, size_t m, size_t d,
                                    size_t k, int double_center,
                                    mcd_subspace** out, int* rank_deficient) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    mcdebias::PcaResult pca = mcdebias::PrincipalComponents(
        ToMatrix(rows, m, d), k, double_center != 0);
    if (rank_deficient != nullptr) *rank_deficient = pca.rank_deficient ? 1 : 0;
    *out = new mcd_subspace{std::move(pca.subspace)};
  });
}

mcd_status mcd_subspace_create(const char* label, size_t k, size_t dim,
                               const double* components, mcd_subspace** out) {
  return Guard([&] {
    Require(label != nullptr && out != nullptr, "null argument");
    *out = new mcd_subspace{
        mcdebias::BiasSubspace(label, ToMatrix(components, k, dim))};
  });
}

mcd_status mcd_subspace_load(const char* path, mcd_subspace** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new mcd_subspace{mcdebias::LoadSubspace(path)};
  });
}

mcd_status mcd_subspace_save(const mcd_subspace* s, const char* path) {
  return Guard([&] {
    Require(s != nullptr && path != nullptr, "null argument");
    mcdebias::SaveSubspace(s->subspace, path);
  });
}

void mcd_subspace_free(mcd_subspace* s) { delete s; }

const char* mcd_subspace_label(const mcd_subspace* s) {
  return s == nullptr ? nullptr : s->subspace.label().c_str();
}

size_t mcd_subspace_k(const mcd_subspace* s) {
  return s == nullptr ? 0 : s->subspace.k();
}

size_t mcd_subspace_dim(const mcd_subspace* s) {
  return s == nullptr ? 0 : s->subspace.dim();
}

int mcd_subspace_is_orthonormal(const mcd_subspace* s) {
  return s != nullptr && s->subspace.orthonormal() ? 1 : 0;
}

mcd_status mcd_subspace_component(const mcd_subspace* s, size_t j, double* out,
                                  size_t dim) {
  return Guard([&] {
    Require(s != nullptr, "null subspace");
    Require(j < s->subspace.k(), "component index out of range");
    CopyOut(s->subspace.component(j), out, dim);
  });
}

mcd_status mcd_subspace_explained_variance(const mcd_subspace* s, double* out,
                                           size_t k) {
  return Guard([&] {
    Require(s != nullptr && out != nullptr, "null argument");
    const auto& variance = s->subspace.explained_variance();
    Require(!variance.empty(), "explained variance is unknown for this subspace");
    Require(variance.size() == k, "buffer size differs from K");
    std::memcpy(out, variance.data(), k * sizeof(double));
  });
}

// Composition.

mcd_status mcd_compose(mcd_strategy strategy, const mcd_subspace* const* subspaces,
                       size_t n, mcd_subspace** out, mcd_composition_info* info,
                       double* distances) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    mcdebias::CompositionStrategy which;
    switch (strategy) {
      case MCD_STRATEGY_SUM: which = mcdebias::CompositionStrategy::kSum; break;
      case MCD_STRATEGY_MEAN: which = mcdebias::CompositionStrategy::kMean; break;
      case MCD_STRATEGY_JOSEC: which = mcdebias::CompositionStrategy::kJosec; break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    "composition strategy must be SUM, MEAN or JOSEC");
    }
    mcdebias::CompositionResult result =
        mcdebias::Compose(which, Subspaces(subspaces, n));
    if (info != nullptr) {
      info->objective = result.objective.value_or(
          std::numeric_limits<double>::quiet_NaN());
      info->degenerate_tie = result.degenerate_tie ? 1 : 0;
    }
    if (distances != nullptr) {
      for (std::size_t i = 0; i < result.per_category_distance.size(); ++i) {
        distances[i] = result.per_category_distance[i];
      }
    }
    *out = new mcd_subspace{std::move(result.subspace)};
  });
}

mcd_status mcd_distance_to_subspace(const double* u, size_t dim,
                                    const mcd_subspace* s, double* out) {
  return Guard([&] {
    Require(s != nullptr && out != nullptr, "null argument");
    *out = mcdebias::DistanceToSubspace(ToVector(u, dim), s->subspace);
  });
}

mcd_status mcd_josec_objective(const double* u, size_t dim,
                               const mcd_subspace* const* subspaces, size_t n,
                               double* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = mcdebias::JosecObjective(ToVector(u, dim), Subspaces(subspaces, n));
  });
}

mcd_status mcd_direction_subspace_cosine(const double* u, size_t dim,
                                         const mcd_subspace* s, double* out) {
  return Guard([&] {
    Require(s != nullptr && out != nullptr, "null argument");
    *out = mcdebias::DirectionSubspaceCosine(ToVector(u, dim), s->subspace);
  });
}

mcd_status mcd_validate_hypothesis(const mcd_category* const* categories, size_t n,
                                   const mcd_category* ground_truth,
                                   const mcd_embeddings* e,
                                   const mcd_hypothesis_options* options,
                                   char** report_json) {
  return Guard([&] {
    Require(ground_truth != nullptr && e != nullptr && options != nullptr &&
                report_json != nullptr,
            "null argument");
    mcdebias::HypothesisOptions opts;
    opts.k = options->k;
    opts.seed = options->seed;
    opts.random_vectors = options->random_vectors;
    opts.subspace.double_center = options->double_center != 0;
    opts.subspace.lowercase_fallback = options->lowercase_fallback != 0;
    const mcdebias::HypothesisReport report = mcdebias::ValidateHypothesis(
        Categories(categories, n), ground_truth->spec, e->set, opts);

    json individual = json::array();
    for (const auto& entry : report.individual) {
      individual.push_back({{"label", entry.label}, {"cosine", entry.cosine}});
    }
    json projection = json::array();
    for (const auto& p : report.projection) {
      projection.push_back({{"label", p.label},
                            {"component_index", p.component_index},
                            {"x", p.x},
                            {"y", p.y},
                            {"z", p.z}});
    }
    json root = {{"ground_truth", report.ground_truth_label},
                 {"k", report.k},
                 {"seed", report.seed},
                 {"individual", individual},
                 {"random_cosines", report.random_cosines},
                 {"random_mean", report.random_mean},
                 {"random_mean_abs", report.random_mean_abs},
                 {"josec_cosine", report.josec_cosine},
                 {"josec_objective", report.josec_objective},
                 {"josec_degenerate_tie", report.josec_degenerate_tie},
                 {"projection", projection},
                 {"warnings", report.warnings}};
    *report_json = CopyString(root.dump());
  });
}

// Debiasing.

mcd_status mcd_bias_component(const double* w, size_t dim, const mcd_subspace* s,
                              double* out) {
  return Guard([&] {
    Require(s != nullptr, "null subspace");
    CopyOut(mcdebias::BiasComponent(ToVector(w, dim), s->subspace), out, dim);
  });
}

mcd_status mcd_neutralize(const double* w, size_t dim, const mcd_subspace* s,
                          double* out) {
  return Guard([&] {
    Require(s != nullptr, "null subspace");
    CopyOut(mcdebias::Neutralize(ToVector(w, dim), s->subspace), out, dim);
  });
}

mcd_status mcd_equalize(const double* members, size_t n, size_t dim,
                        const mcd_subspace* s, double* out) {
  return Guard([&] {
    Require(s != nullptr && out != nullptr, "null argument");
    const mcdebias::RowMatrix result =
        mcdebias::EqualizeVectors(ToMatrix(members, n, dim), s->subspace);
    std::memcpy(out, result.data(), n * dim * sizeof(double));
  });
}

mcd_status mcd_debias(const mcd_embeddings* e, const mcd_category* const* categories,
                      size_t n, const mcd_debias_options* options,
                      mcd_embeddings** out, char** report_json) {
  return Guard([&] {
    Require(e != nullptr && options != nullptr && out != nullptr, "null argument");
    mcdebias::DebiasPlan plan;
    plan.strategy = ToStrategy(options->strategy);
    plan.k = options->k;
    if (options->order != nullptr) {
      plan.category_order = Strings(options->order, options->order_len);
    }
    if (options->neutral_words != nullptr) {
      plan.neutral_words = Strings(options->neutral_words, options->neutral_len);
    }
    plan.frozen_subspaces = options->frozen_subspaces != 0;
    plan.subspace.double_center = options->double_center != 0;
    plan.subspace.lowercase_fallback = options->lowercase_fallback != 0;

    mcdebias::DebiasOutcome outcome =
        mcdebias::Debias(e->set, Categories(categories, n), plan);

    if (report_json != nullptr) {
      json steps = json::array();
      for (const auto& step : outcome.steps) {
        json s = {{"label", step.subspace_label},
                  {"k", step.k},
                  {"neutralized", step.neutralized},
                  {"equalized", step.equalized},
                  {"degenerate_tie", step.degenerate_tie}};
        if (step.objective) s["objective"] = *step.objective;
        steps.push_back(std::move(s));
      }
      json root = {{"strategy", mcdebias::DebiasStrategyName(plan.strategy)},
                   {"steps", steps},
                   {"warnings", outcome.warnings},
                   {"fully_contained", outcome.fully_contained},
                   {"degenerate_sets", outcome.degenerate_sets},
                   {"rank_deficient", outcome.rank_deficient}};
      *report_json = CopyString(root.dump());
    }
    *out = new mcd_embeddings{std::move(outcome.embeddings)};
  });
}

// Evaluation.

mcd_status mcd_mac(const double* targets, size_t n_targets, const double* attributes,
                   const size_t* set_sizes, size_t n_sets, size_t dim, double* mac,
                   double* table) {
  return Guard([&] {
    Require(mac != nullptr, "null output");
    Require(set_sizes != nullptr || n_sets == 0, "null set sizes");
    std::vector<mcdebias::RowMatrix> sets;
    std::size_t offset = 0;
    for (std::size_t j = 0; j < n_sets; ++j) {
      sets.push_back(ToMatrix(attributes + offset * dim, set_sizes[j], dim));
      offset += set_sizes[j];
    }
    const mcdebias::MacReport report =
        mcdebias::Mac(ToMatrix(targets, n_targets, dim), sets);
    *mac = report.mac;
    if (table != nullptr) {
      for (std::size_t i = 0; i < n_targets; ++i) {
        for (std::size_t j = 0; j < n_sets; ++j) {
          table[i * n_sets + j] = report.table(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j));
        }
      }
    }
  });
}

mcd_status mcd_mac_category(const mcd_category* c, const mcd_embeddings* e,
                            int lowercase_fallback, char** report_json,
                            double* mac) {
  return Guard([&] {
    Require(c != nullptr && e != nullptr, "null argument");
    const mcdebias::MacReport report =
        mcdebias::MacForCategory(c->spec, e->set, lowercase_fallback != 0);
    if (mac != nullptr) *mac = report.mac;
    if (report_json != nullptr) {
      json table = json::array();
      for (Eigen::Index i = 0; i < report.table.rows(); ++i) {
        std::vector<double> row(report.table.cols());
        for (Eigen::Index j = 0; j < report.table.cols(); ++j) {
          row[static_cast<std::size_t>(j)] = report.table(i, j);
        }
        table.push_back(row);
      }
      json root = {{"category", report.category},
                   {"mac", report.mac},
                   {"targets", report.target_labels},
                   {"attribute_sets", report.attribute_labels},
                   {"table", table},
                   {"warnings", report.warnings}};
      *report_json = CopyString(root.dump());
    }
  });
}

mcd_status mcd_paired_t_test(const double* before, const double* after, size_t n,
                             mcd_t_test* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    Require((before != nullptr && after != nullptr) || n == 0, "null sample");
    const mcdebias::TTestResult r = mcdebias::PairedTTest(
        std::span<const double>(before, n), std::span<const double>(after, n));
    *out = mcd_t_test{r.t, r.p, r.df, r.zero_variance ? 1 : 0};
  });
}

mcd_status mcd_equality_differences(const mcd_group_outcome* groups, size_t n,
                                    const mcd_group_outcome* overall, double* fped,
                                    double* fned, size_t* skipped) {
  return Guard([&] {
    Require(overall != nullptr && fped != nullptr && fned != nullptr,
            "null argument");
    Require(groups != nullptr || n == 0, "null group list");
    auto convert = [](const mcd_group_outcome& g) {
      return mcdebias::GroupOutcome{g.label ? g.label : "", g.tp, g.fp, g.tn, g.fn};
    };
    std::vector<mcdebias::GroupOutcome> list;
    for (std::size_t i = 0; i < n; ++i) list.push_back(convert(groups[i]));
    const mcdebias::EqualityDifferences r =
        mcdebias::ComputeEqualityDifferences(list, convert(*overall));
    *fped = r.fped;
    *fned = r.fned;
    if (skipped != nullptr) *skipped = r.warnings.size();
  });
}

}  // extern "C"
