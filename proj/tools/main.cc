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

// mcdebias command-line tool.
//
//   mcdebias subspace            build / compose bias subspaces
//   mcdebias debias              hard-debias embeddings
//   mcdebias eval-mac            MAC per category, optional baseline + t-test
//   mcdebias eval-eq             FPED / FNED from group confusion counts
//   mcdebias validate-hypothesis cosine of subspaces vs an intersectional one
//   mcdebias report              consolidated MAC / pipeline / hypothesis report

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.h"
#include "json.hpp"
#include "mcdebias/mcdebias.h"

namespace mcdebias::cli {
namespace {

using nlohmann::json;

struct CommonOptions {
  std::string embeddings;
  std::string format = "word2vec";
  std::vector<std::string> specs;
  bool normalize = false;
  bool lowercase_fallback = false;
  bool double_center = false;
  bool strict = false;
  std::string manifest;
};

void AddCommon(CLI::App* app, CommonOptions* o, bool specs_required = true) {
  app->add_option("--embeddings", o->embeddings, "Embedding file")->required();
  app->add_option("--format", o->format, "word2vec or glove (text formats)")
      ->capture_default_str();
  auto* specs = app->add_option("--specs,--spec", o->specs,
                                "Category spec files (JSON)");
  if (specs_required) specs->required();
  app->add_flag("--normalize", o->normalize,
                "Rescale rows to unit length before use");
  app->add_flag("--lowercase-fallback", o->lowercase_fallback,
                "Retry missing words in lowercase");
  app->add_flag("--double-center", o->double_center,
                "Remove the global mean before PCA");
  app->add_flag("--strict", o->strict,
                "Treat numerical degeneracies (rank deficiency, ties, skipped "
                "words) as fatal (exit 3)");
  app->add_option("--manifest", o->manifest, "Manifest path");
}

json CommonConfig(const CommonOptions& o) {
  return {{"embeddings", o.embeddings},
          {"format", o.format},
          {"specs", o.specs},
          {"normalize", o.normalize},
          {"lowercase_fallback", o.lowercase_fallback},
          {"double_center", o.double_center},
          {"strict", o.strict}};
}

void Emit(const std::string& text, const std::string& out_path,
          Manifest* manifest) {
  std::cout << text;
  if (!out_path.empty()) {
    WriteFile(out_path, text);
    manifest->outputs.push_back(out_path);
  }
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void FinishManifest(Manifest* manifest, const std::string& explicit_path,
                    const std::string& primary_output) {
  std::string path = explicit_path;
  if (path.empty() && !primary_output.empty()) path = primary_output + ".manifest.json";
  if (!path.empty()) manifest->Write(path);
}

// Left-aligned first column, right-aligned others.
std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  };
  measure(header);
  for (const auto& r : rows) measure(r);
  auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < r.size() ? r[i] : "";
      const std::string pad(width[i] - cell.size(), ' ');
      if (i > 0) out += "  ";
      out += i == 0 ? cell + pad : pad + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string ReplaceExtensionSuffix(const std::string& path, const std::string& tag) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "." + tag;
  }
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

std::string Join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// MAC of one category on one embedding set.
struct CategoryMac {
  std::string category;
  double mac = 0.0;
  std::vector<std::string> targets;
  std::vector<std::string> attribute_sets;
  std::vector<double> flat_table;  // row-major targets x attribute sets
};

CategoryMac EvaluateMac(const mcd_category* category, const mcd_embeddings* e,
                        bool lowercase_fallback, std::vector<std::string>* warnings) {
  char* raw = nullptr;
  double mac = 0.0;
  Check(mcd_mac_category(category, e, lowercase_fallback ? 1 : 0, &raw, &mac),
        std::string("MAC for ") + mcd_category_name(category));
  const json report = json::parse(TakeString(raw));
  CategoryMac out;
  out.category = report["category"].get<std::string>();
  out.mac = mac;
  out.targets = report["targets"].get<std::vector<std::string>>();
  out.attribute_sets = report["attribute_sets"].get<std::vector<std::string>>();
  for (const auto& row : report["table"]) {
    for (const auto& v : row) out.flat_table.push_back(v.get<double>());
  }
  for (const auto& w : report["warnings"]) {
    warnings->push_back(out.category + ": " + w.get<std::string>());
  }
  return out;
}

std::vector<CategoryMac> EvaluateAll(const std::vector<Category>& categories,
                                     const mcd_embeddings* e, bool lowercase_fallback,
                                     std::vector<std::string>* warnings) {
  std::vector<CategoryMac> out;
  for (const Category& c : categories) {
    out.push_back(EvaluateMac(c.get(), e, lowercase_fallback, warnings));
  }
  return out;
}

double Total(const std::vector<CategoryMac>& macs) {
  double total = 0.0;
  for (const CategoryMac& m : macs) total += m.mac;
  return total;
}

std::optional<mcd_t_test> PairedTest(const CategoryMac& before,
                                     const CategoryMac& after,
                                     std::vector<std::string>* warnings) {
  if (before.flat_table.size() != after.flat_table.size() ||
      before.targets != after.targets ||
      before.attribute_sets != after.attribute_sets) {
    warnings->push_back(before.category +
                        ": distance tables differ in shape; t-test skipped");
    return std::nullopt;
  }
  if (before.flat_table.size() < 2) {
    warnings->push_back(before.category + ": fewer than two samples; t-test skipped");
    return std::nullopt;
  }
  mcd_t_test result{};
  Check(mcd_paired_t_test(before.flat_table.data(), after.flat_table.data(),
                          before.flat_table.size(), &result),
        "paired t-test");
  return result;
}

std::string FormatP(const std::optional<mcd_t_test>& test) {
  if (!test) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", test->p);
  return buf;
}

void AppendTableCsv(const std::string& label, const CategoryMac& m, std::string* csv) {
  const std::size_t cols = m.attribute_sets.size();
  for (std::size_t i = 0; i < m.targets.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      *csv += CsvField(label) + "," + CsvField(m.category) + "," +
              CsvField(m.targets[i]) + "," + CsvField(m.attribute_sets[j]) + "," +
              Exact(m.flat_table[i * cols + j]) + "\n";
    }
  }
}

struct DebiasRun {
  Embeddings embeddings;
  json report;
};

DebiasRun RunDebias(const mcd_embeddings* e, const std::vector<Category>& categories,
                    mcd_strategy strategy, std::size_t k,
                    const std::vector<std::string>& order,
                    const std::vector<std::string>* neutral, bool frozen,
                    const CommonOptions& common) {
  std::vector<const char*> order_ptrs;
  for (const std::string& s : order) order_ptrs.push_back(s.c_str());
  std::vector<const char*> neutral_ptrs;
  if (neutral != nullptr) {
    for (const std::string& s : *neutral) neutral_ptrs.push_back(s.c_str());
  }
  mcd_debias_options options{};
  options.strategy = strategy;
  options.k = k;
  options.order = order.empty() ? nullptr : order_ptrs.data();
  options.order_len = order_ptrs.size();
  // A non-null pointer marks an explicit (possibly empty) neutral list.
  static const char* const kEmpty[] = {nullptr};
  options.neutral_words = neutral == nullptr     ? nullptr
                          : neutral_ptrs.empty() ? kEmpty
                                                 : neutral_ptrs.data();
  options.neutral_len = neutral_ptrs.size();
  options.frozen_subspaces = frozen ? 1 : 0;
  options.double_center = common.double_center ? 1 : 0;
  options.lowercase_fallback = common.lowercase_fallback ? 1 : 0;

  const auto raw = Raw(categories);
  mcd_embeddings* out = nullptr;
  char* report = nullptr;
  Check(mcd_debias(e, raw.data(), raw.size(), &options, &out, &report), "debias");
  return {Embeddings(out), json::parse(TakeString(report))};
}

void CheckStrict(const json& report, bool strict) {
  if (!strict) return;
  bool tie = false;
  for (const auto& step : report["steps"]) tie = tie || step["degenerate_tie"].get<bool>();
  if (report["fully_contained"].get<std::size_t>() > 0 ||
      report["degenerate_sets"].get<std::size_t>() > 0 ||
      report["rank_deficient"].get<std::size_t>() > 0 || tie) {
    throw CliError(kExitNumerical,
                   "numerical degeneracy under --strict: " + report["warnings"].dump());
  }
}

mcd_strategy StrategyFromName(const std::string& name) {
  if (name == "single") return MCD_STRATEGY_SINGLE;
  if (name == "seq" || name == "sequential") return MCD_STRATEGY_SEQUENTIAL;
  if (name == "sum") return MCD_STRATEGY_SUM;
  if (name == "mean") return MCD_STRATEGY_MEAN;
  if (name == "josec") return MCD_STRATEGY_JOSEC;
  throw CliError(kExitValidation, "unknown strategy '" + name + "'");
}

std::vector<std::vector<std::string>> Permutations(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  std::vector<std::vector<std::string>> out;
  do {
    out.push_back(names);
  } while (std::next_permutation(names.begin(), names.end()));
  return out;
}

std::vector<std::string> CategoryNames(const std::vector<Category>& categories) {
  std::vector<std::string> names;
  for (const Category& c : categories) names.emplace_back(mcd_category_name(c.get()));
  return names;
}

// ---- subspace ---------------------------------------------------------------

struct SubspaceCommand {
  CommonOptions common;
  std::size_t k = 0;
  std::string strategy = "single";
  std::string out;
  std::string out_dir;
};

int RunSubspace(const SubspaceCommand& cmd, const std::vector<std::string>& argv) {
  Manifest manifest{"subspace", argv, CommonConfig(cmd.common), {}, json::object(), {}};
  manifest.config["k"] = cmd.k;
  manifest.config["strategy"] = cmd.strategy;
  manifest.config["out"] = cmd.out;
  manifest.config["out_dir"] = cmd.out_dir;

  const std::vector<Category> categories = LoadCategories(cmd.common.specs);
  Embeddings e = LoadNormalized(cmd.common.embeddings, ParseFormat(cmd.common.format),
                                cmd.common.normalize, &manifest.warnings);
  ValidateCategories(categories, e.get(), cmd.common.lowercase_fallback,
                     &manifest.warnings);

  const mcd_strategy strategy = StrategyFromName(cmd.strategy);
  if (strategy == MCD_STRATEGY_SEQUENTIAL) {
    throw CliError(kExitValidation, "subspace --strategy must be single, sum, mean or josec");
  }
  if (strategy == MCD_STRATEGY_SINGLE && categories.size() != 1) {
    throw CliError(kExitValidation,
                   "--strategy single takes exactly one spec; use sum, mean or "
                   "josec to compose several");
  }

  mcd_subspace_options options{cmd.common.double_center ? 1 : 0,
                               cmd.common.lowercase_fallback ? 1 : 0};
  std::vector<Subspace> individual;
  std::string text;
  for (const Category& c : categories) {
    mcd_subspace* raw = nullptr;
    int rank_deficient = 0;
    Check(mcd_subspace_build(c.get(), e.get(), cmd.k, &options, &raw, &rank_deficient),
          std::string("building subspace for ") + mcd_category_name(c.get()));
    Subspace s(raw);
    if (rank_deficient) {
      const std::string msg = std::string(mcd_category_name(c.get())) + " yielded only " +
                              std::to_string(mcd_subspace_k(s.get())) + " of K=" +
                              std::to_string(cmd.k) + " components";
      if (cmd.common.strict) throw CliError(kExitNumerical, msg);
      manifest.warnings.push_back(msg);
    }
    std::vector<double> variance(mcd_subspace_k(s.get()));
    Check(mcd_subspace_explained_variance(s.get(), variance.data(), variance.size()),
          "explained variance");
    text += std::string("subspace ") + mcd_subspace_label(s.get()) +
            " K=" + std::to_string(mcd_subspace_k(s.get())) +
            " d=" + std::to_string(mcd_subspace_dim(s.get())) + " explained_variance";
    for (double v : variance) text += " " + Fixed(v);
    text += "\n";
    individual.push_back(std::move(s));
  }

  if (strategy == MCD_STRATEGY_SINGLE) {
    Check(mcd_subspace_save(individual[0].get(), cmd.out.c_str()), "writing " + cmd.out);
    manifest.outputs.push_back(cmd.out);
  } else {
    std::vector<const mcd_subspace*> raw;
    for (const Subspace& s : individual) raw.push_back(s.get());
    mcd_subspace* composed_raw = nullptr;
    mcd_composition_info info{};
    std::vector<double> distances(raw.size());
    Check(mcd_compose(strategy, raw.data(), raw.size(), &composed_raw, &info,
                      distances.data()),
          "composing subspaces");
    Subspace composed(composed_raw);
    text += std::string("composed ") + mcd_subspace_label(composed.get()) +
            " K=" + std::to_string(mcd_subspace_k(composed.get())) + "\n";
    if (strategy == MCD_STRATEGY_JOSEC) {
      text += "objective " + Fixed(info.objective) + "\n";
      for (std::size_t i = 0; i < raw.size(); ++i) {
        text += std::string("distance ") + mcd_subspace_label(raw[i]) + " " +
                Fixed(distances[i]) + "\n";
      }
      manifest.details["objective"] = info.objective;
      if (info.degenerate_tie) {
        const std::string msg = "JoSEC direction is not unique (singular value tie)";
        if (cmd.common.strict) throw CliError(kExitNumerical, msg);
        manifest.warnings.push_back(msg);
      }
    }
    Check(mcd_subspace_save(composed.get(), cmd.out.c_str()), "writing " + cmd.out);
    manifest.outputs.push_back(cmd.out);
    if (!cmd.out_dir.empty()) {
      for (const Subspace& s : individual) {
        const std::string path =
            cmd.out_dir + "/" + mcd_subspace_label(s.get()) + ".sub";
        Check(mcd_subspace_save(s.get(), path.c_str()), "writing " + path);
        manifest.outputs.push_back(path);
      }
    }
  }
  std::cout << text;
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.common.manifest, cmd.out);
  return kExitOk;
}

// ---- debias -----------------------------------------------------------------

struct DebiasCommand {
  CommonOptions common;
  std::size_t k = 0;
  std::string strategy;
  std::vector<std::string> order;
  bool all_orders = false;
  bool frozen_subspaces = false;
  std::string neutral_words;
  std::string out;
  std::string out_format;
};

std::vector<std::string> ReadWordList(const std::string& path) {
  std::vector<std::string> words;
  const std::string text = ReadFile(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    const std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    words.push_back(line.substr(start));
  }
  return words;
}

int RunDebiasCommand(const DebiasCommand& cmd, const std::vector<std::string>& argv) {
  Manifest manifest{"debias", argv, CommonConfig(cmd.common), {}, json::object(), {}};
  manifest.config["k"] = cmd.k;
  manifest.config["strategy"] = cmd.strategy;
  manifest.config["order"] = cmd.order;
  manifest.config["all_orders"] = cmd.all_orders;
  manifest.config["frozen_subspaces"] = cmd.frozen_subspaces;
  manifest.config["neutral_words"] = cmd.neutral_words;
  manifest.config["out"] = cmd.out;
  manifest.config["out_format"] = cmd.out_format;

  const mcd_strategy strategy = StrategyFromName(cmd.strategy);
  if (cmd.all_orders && strategy != MCD_STRATEGY_SEQUENTIAL) {
    throw CliError(kExitValidation, "--all-orders requires --strategy seq");
  }
  if (!cmd.order.empty() && strategy != MCD_STRATEGY_SEQUENTIAL) {
    throw CliError(kExitValidation, "--order requires --strategy seq");
  }
  const mcd_format in_format = ParseFormat(cmd.common.format);
  const mcd_format out_format =
      cmd.out_format.empty() ? in_format : ParseFormat(cmd.out_format);

  const std::vector<Category> categories = LoadCategories(cmd.common.specs);
  Embeddings e = LoadNormalized(cmd.common.embeddings, in_format, cmd.common.normalize,
                                &manifest.warnings);
  ValidateCategories(categories, e.get(), cmd.common.lowercase_fallback,
                     &manifest.warnings);

  std::optional<std::vector<std::string>> neutral;
  if (!cmd.neutral_words.empty()) neutral = ReadWordList(cmd.neutral_words);

  std::vector<std::vector<std::string>> orders;
  if (cmd.all_orders) {
    orders = Permutations(CategoryNames(categories));
  } else {
    orders.push_back(cmd.order);
  }

  bool can_score = true;
  json runs = json::array();
  std::optional<std::size_t> best;
  double best_total = 0.0;
  std::string text;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    DebiasRun run = RunDebias(e.get(), categories, strategy, cmd.k, orders[i],
                              neutral ? &*neutral : nullptr, cmd.frozen_subspaces,
                              cmd.common);
    CheckStrict(run.report, cmd.common.strict);
    for (const auto& w : run.report["warnings"]) {
      manifest.warnings.push_back(w.get<std::string>());
    }
    const std::string path =
        cmd.all_orders ? ReplaceExtensionSuffix(cmd.out, Join(orders[i], "-")) : cmd.out;
    Check(mcd_embeddings_save(run.embeddings.get(), path.c_str(), out_format),
          "writing " + path);
    manifest.outputs.push_back(path);

    json entry = {{"output", path}, {"order", orders[i]}, {"steps", run.report["steps"]}};
    std::string line = "wrote " + path;
    if (cmd.all_orders && can_score) {
      try {
        std::vector<std::string> scratch;
        const double total =
            Total(EvaluateAll(categories, run.embeddings.get(),
                              cmd.common.lowercase_fallback, &scratch));
        entry["total_mac"] = total;
        line += "  total_mac " + Fixed(total);
        if (!best || total > best_total) {
          best = i;
          best_total = total;
        }
      } catch (const CliError&) {
        can_score = false;
        manifest.warnings.push_back(
            "specs lack target/attribute words; orders were not ranked by MAC");
      }
    }
    text += line + "\n";
    runs.push_back(std::move(entry));
  }
  manifest.details["runs"] = runs;
  if (best && can_score) {
    manifest.details["best_order"] = orders[*best];
    text += "best order " + Join(orders[*best], ",") + " total_mac " +
            Fixed(best_total) + "\n";
  }
  std::cout << text;
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.common.manifest, cmd.out);
  return kExitOk;
}

// ---- eval-mac ---------------------------------------------------------------

struct EvalMacCommand {
  CommonOptions common;
  std::string baseline;
  std::string csv;
  std::string out;
};

int RunEvalMac(const EvalMacCommand& cmd, const std::vector<std::string>& argv) {
  Manifest manifest{"eval-mac", argv, CommonConfig(cmd.common), {}, json::object(), {}};
  manifest.config["baseline"] = cmd.baseline;
  manifest.config["csv"] = cmd.csv;
  manifest.config["out"] = cmd.out;

  const mcd_format format = ParseFormat(cmd.common.format);
  const std::vector<Category> categories = LoadCategories(cmd.common.specs);
  LoadedEmbeddings current = LoadEmbeddings(cmd.common.embeddings, format);
  const std::vector<CategoryMac> after = EvaluateAll(
      categories, current.handle.get(), cmd.common.lowercase_fallback, &manifest.warnings);

  std::vector<CategoryMac> before;
  if (!cmd.baseline.empty()) {
    LoadedEmbeddings base = LoadEmbeddings(cmd.baseline, format);
    before = EvaluateAll(categories, base.handle.get(), cmd.common.lowercase_fallback,
                         &manifest.warnings);
  }

  std::vector<std::string> header = {"category", "MAC"};
  if (!before.empty()) {
    header.insert(header.end(), {"baseline", "delta", "p"});
  }
  std::vector<std::vector<std::string>> rows;
  std::string csv = before.empty() ? "category,target,attribute_set,f\n"
                                   : "category,target,attribute_set,f,f_baseline\n";
  for (std::size_t i = 0; i < after.size(); ++i) {
    std::vector<std::string> row = {after[i].category, Fixed(after[i].mac)};
    if (!before.empty()) {
      const auto test = PairedTest(before[i], after[i], &manifest.warnings);
      row.insert(row.end(), {Fixed(before[i].mac), Fixed(after[i].mac - before[i].mac),
                             FormatP(test)});
    }
    rows.push_back(std::move(row));

    const CategoryMac& m = after[i];
    const std::size_t cols = m.attribute_sets.size();
    const bool paired = !before.empty() && before[i].flat_table.size() == m.flat_table.size();
    for (std::size_t t = 0; t < m.targets.size(); ++t) {
      for (std::size_t j = 0; j < cols; ++j) {
        csv += CsvField(m.category) + "," + CsvField(m.targets[t]) + "," +
               CsvField(m.attribute_sets[j]) + "," + Exact(m.flat_table[t * cols + j]);
        if (!before.empty()) {
          csv += ",";
          if (paired) csv += Exact(before[i].flat_table[t * cols + j]);
        }
        csv += "\n";
      }
    }
  }
  std::vector<std::string> total = {"Total", Fixed(Total(after))};
  if (!before.empty()) {
    total.insert(total.end(),
                 {Fixed(Total(before)), Fixed(Total(after) - Total(before)), ""});
  }
  rows.push_back(std::move(total));

  Emit(RenderTable(header, rows), cmd.out, &manifest);
  if (!cmd.csv.empty()) {
    WriteFile(cmd.csv, csv);
    manifest.outputs.push_back(cmd.csv);
  }
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.common.manifest, cmd.out);
  return kExitOk;
}

// ---- eval-eq ----------------------------------------------------------------

struct EvalEqCommand {
  std::string input;
  std::string out;
  std::string manifest;
};

std::uint64_t ParseCount(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    if (field.empty() || field[0] == '-') throw std::invalid_argument("negative");
    value = std::stoull(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw CliError(kExitValidation, "row " + std::to_string(line) + ": '" + field +
                                        "' is not a nonnegative integer count");
  }
  return value;
}

int RunEvalEq(const EvalEqCommand& cmd, const std::vector<std::string>& argv) {
  Manifest manifest{"eval-eq", argv, {{"input", cmd.input}, {"out", cmd.out}},
                    {}, json::object(), {}};
  const auto rows = ParseCsv(ReadFile(cmd.input));
  if (rows.empty()) throw CliError(kExitValidation, cmd.input + ": empty CSV");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    std::string name = rows[0][i];
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    column[name] = i;
  }
  for (const char* required : {"group", "tp", "fp", "tn", "fn"}) {
    if (!column.count(required)) {
      throw CliError(kExitValidation, cmd.input + ": missing column '" +
                                          std::string(required) + "'");
    }
  }

  std::vector<std::string> labels;
  std::vector<mcd_group_outcome> groups;
  std::optional<mcd_group_outcome> overall;
  labels.reserve(rows.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < rows[0].size()) {
      throw CliError(kExitValidation, cmd.input + ": row " + std::to_string(r + 1) +
                                          " has too few fields");
    }
    labels.push_back(row[column["group"]]);
    mcd_group_outcome g{nullptr, ParseCount(row[column["tp"]], r + 1),
                        ParseCount(row[column["fp"]], r + 1),
                        ParseCount(row[column["tn"]], r + 1),
                        ParseCount(row[column["fn"]], r + 1)};
    std::string lower = labels.back();
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "overall") {
      if (overall) throw CliError(kExitValidation, "more than one 'overall' row");
      overall = g;
    } else {
      groups.push_back(g);
    }
  }
  if (!overall) throw CliError(kExitValidation, cmd.input + ": no 'overall' row");
  std::size_t gi = 0;
  for (const std::string& label : labels) {
    std::string lower = label;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower != "overall") groups[gi++].label = label.c_str();
  }
  overall->label = "overall";

  double fped = 0.0;
  double fned = 0.0;
  std::size_t skipped = 0;
  Check(mcd_equality_differences(groups.data(), groups.size(), &*overall, &fped, &fned,
                                 &skipped),
        "equality differences");
  if (skipped > 0) {
    manifest.warnings.push_back(std::to_string(skipped) +
                                " group rates undefined (zero denominator); skipped");
  }
  const std::string text =
      "FPED " + Fixed(fped) + "\nFNED " + Fixed(fned) + "\nTotal " + Fixed(fped + fned) + "\n";
  manifest.details = {{"fped", fped}, {"fned", fned}};
  Emit(text, cmd.out, &manifest);
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.manifest, cmd.out);
  return kExitOk;
}

// ---- validate-hypothesis ----------------------------------------------------

struct HypothesisCommand {
  CommonOptions common;
  std::string ground_truth;
  std::size_t k = 0;
  std::uint64_t seed = 42;
  std::size_t random_vectors = 10;
  std::string out;
  std::string csv;
};

json RunHypothesis(const std::vector<Category>& categories, const Category& truth,
                   const mcd_embeddings* e, std::size_t k, std::uint64_t seed,
                   std::size_t random_vectors, const CommonOptions& common) {
  mcd_hypothesis_options options{k, seed, random_vectors, common.double_center ? 1 : 0,
                                 common.lowercase_fallback ? 1 : 0};
  const auto raw = Raw(categories);
  char* report = nullptr;
  Check(mcd_validate_hypothesis(raw.data(), raw.size(), truth.get(), e, &options,
                                &report),
        "validating the intersectional hypothesis");
  return json::parse(TakeString(report));
}

std::string HypothesisText(const json& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& entry : report["individual"]) {
    rows.push_back({entry["label"].get<std::string>(), Fixed(entry["cosine"].get<double>())});
  }
  rows.push_back({"Random (mean of " +
                      std::to_string(report["random_cosines"].size()) + ")",
                  Fixed(report["random_mean"].get<double>())});
  rows.push_back({"JoSEC", Fixed(report["josec_cosine"].get<double>())});
  std::string text = "ground truth " + report["ground_truth"].get<std::string>() +
                     "  K=" + std::to_string(report["k"].get<std::size_t>()) +
                     "  seed=" + std::to_string(report["seed"].get<std::uint64_t>()) + "\n";
  text += RenderTable({"direction", "cosine"}, rows);
  text += "random mean |cosine| " + Fixed(report["random_mean_abs"].get<double>()) + "\n";
  text += "JoSEC objective " + Fixed(report["josec_objective"].get<double>()) + "\n";
  return text;
}

std::string ProjectionCsv(const json& report) {
  std::string csv = "label,component_index,x,y,z\n";
  for (const auto& p : report["projection"]) {
    csv += CsvField(p["label"].get<std::string>()) + "," +
           std::to_string(p["component_index"].get<std::size_t>()) + "," +
           Exact(p["x"].get<double>()) + "," + Exact(p["y"].get<double>()) + "," +
           Exact(p["z"].get<double>()) + "\n";
  }
  return csv;
}

int RunValidateHypothesis(const HypothesisCommand& cmd,
                          const std::vector<std::string>& argv) {
  Manifest manifest{"validate-hypothesis", argv, CommonConfig(cmd.common), {},
                    json::object(), {}};
  manifest.config["ground_truth"] = cmd.ground_truth;
  manifest.config["k"] = cmd.k;
  manifest.config["seed"] = cmd.seed;
  manifest.config["random_vectors"] = cmd.random_vectors;
  manifest.config["out"] = cmd.out;
  manifest.config["csv"] = cmd.csv;

  const std::vector<Category> categories = LoadCategories(cmd.common.specs);
  std::vector<Category> truth = LoadCategories({cmd.ground_truth});
  Embeddings e = LoadNormalized(cmd.common.embeddings, ParseFormat(cmd.common.format),
                                cmd.common.normalize, &manifest.warnings);
  ValidateCategories(categories, e.get(), cmd.common.lowercase_fallback,
                     &manifest.warnings);
  ValidateCategories(truth, e.get(), cmd.common.lowercase_fallback, &manifest.warnings);

  const json report = RunHypothesis(categories, truth[0], e.get(), cmd.k, cmd.seed,
                                    cmd.random_vectors, cmd.common);
  for (const auto& w : report["warnings"]) manifest.warnings.push_back(w.get<std::string>());
  if (cmd.common.strict && !report["warnings"].empty()) {
    throw CliError(kExitNumerical, "numerical degeneracy under --strict: " +
                                       report["warnings"].dump());
  }
  Emit(HypothesisText(report), cmd.out, &manifest);
  if (!cmd.csv.empty()) {
    WriteFile(cmd.csv, ProjectionCsv(report));
    manifest.outputs.push_back(cmd.csv);
  }
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.common.manifest, cmd.out);
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportCommand {
  CommonOptions common;
  std::string debiased;
  bool pipeline = false;
  std::size_t k = 0;
  bool frozen_subspaces = false;
  std::string ground_truth;
  std::uint64_t seed = 42;
  std::size_t random_vectors = 10;
  std::string out;
  std::string csv;
  std::string table_csv;
  std::string projection_csv;
};

struct MethodResult {
  std::string method;
  std::vector<CategoryMac> macs;
  std::vector<std::optional<mcd_t_test>> tests;
};

int RunReport(const ReportCommand& cmd, const std::vector<std::string>& argv) {
  Manifest manifest{"report", argv, CommonConfig(cmd.common), {}, json::object(), {}};
  manifest.config["debiased"] = cmd.debiased;
  manifest.config["pipeline"] = cmd.pipeline;
  manifest.config["k"] = cmd.k;
  manifest.config["frozen_subspaces"] = cmd.frozen_subspaces;
  manifest.config["ground_truth"] = cmd.ground_truth;
  manifest.config["seed"] = cmd.seed;
  manifest.config["random_vectors"] = cmd.random_vectors;
  manifest.config["out"] = cmd.out;
  manifest.config["csv"] = cmd.csv;
  manifest.config["table_csv"] = cmd.table_csv;
  manifest.config["projection_csv"] = cmd.projection_csv;

  const bool needs_unit = cmd.pipeline || !cmd.ground_truth.empty();
  if (needs_unit && cmd.k == 0) {
    throw CliError(kExitValidation, "--k is required with --pipeline or --ground-truth");
  }
  if (cmd.pipeline && !cmd.debiased.empty()) {
    throw CliError(kExitValidation, "--pipeline and --debiased are mutually exclusive");
  }
  const mcd_format format = ParseFormat(cmd.common.format);
  const std::vector<Category> categories = LoadCategories(cmd.common.specs);

  Embeddings biased;
  if (needs_unit) {
    biased = LoadNormalized(cmd.common.embeddings, format, cmd.common.normalize,
                            &manifest.warnings);
  } else {
    biased = LoadEmbeddings(cmd.common.embeddings, format).handle;
  }
  ValidateCategories(categories, biased.get(), cmd.common.lowercase_fallback,
                     &manifest.warnings);

  std::vector<MethodResult> results;
  results.push_back({"Biased",
                     EvaluateAll(categories, biased.get(), cmd.common.lowercase_fallback,
                                 &manifest.warnings),
                     {}});
  auto add_method = [&](const std::string& label, const mcd_embeddings* e) {
    MethodResult r{label,
                   EvaluateAll(categories, e, cmd.common.lowercase_fallback,
                               &manifest.warnings),
                   {}};
    for (std::size_t i = 0; i < r.macs.size(); ++i) {
      r.tests.push_back(PairedTest(results[0].macs[i], r.macs[i], &manifest.warnings));
    }
    results.push_back(std::move(r));
  };

  std::string best_seq;
  if (!cmd.debiased.empty()) {
    LoadedEmbeddings after = LoadEmbeddings(cmd.debiased, format);
    add_method("Debiased", after.handle.get());
  } else if (cmd.pipeline) {
    double best_total = -1.0;
    for (const auto& order : Permutations(CategoryNames(categories))) {
      DebiasRun run = RunDebias(biased.get(), categories, MCD_STRATEGY_SEQUENTIAL,
                                cmd.k, order, nullptr, cmd.frozen_subspaces, cmd.common);
      CheckStrict(run.report, cmd.common.strict);
      const std::string label = "Hard_Seq(" + Join(order, ">") + ")";
      add_method(label, run.embeddings.get());
      const double total = Total(results.back().macs);
      if (total > best_total) {
        best_total = total;
        best_seq = label;
      }
    }
    if (categories.size() > 1) {
      for (auto [label, strategy] :
           {std::pair<const char*, mcd_strategy>{"SUM", MCD_STRATEGY_SUM},
            {"MEAN", MCD_STRATEGY_MEAN},
            {"JoSEC", MCD_STRATEGY_JOSEC}}) {
        DebiasRun run = RunDebias(biased.get(), categories, strategy, cmd.k, {}, nullptr,
                                  false, cmd.common);
        CheckStrict(run.report, cmd.common.strict);
        add_method(label, run.embeddings.get());
      }
    } else {
      manifest.warnings.push_back(
          "SUM, MEAN and JoSEC need at least two categories; skipped");
    }
  }

  // MAC table.
  std::vector<std::string> header = {"method"};
  for (const CategoryMac& m : results[0].macs) header.push_back(m.category);
  header.push_back("Total");
  std::vector<std::vector<std::string>> rows;
  std::string summary = "method,category,mac,p_value\n";
  std::string table_csv = "method,category,target,attribute_set,f\n";
  for (const MethodResult& r : results) {
    std::vector<std::string> row = {r.method};
    for (std::size_t i = 0; i < r.macs.size(); ++i) {
      row.push_back(Fixed(r.macs[i].mac));
      summary += CsvField(r.method) + "," + CsvField(r.macs[i].category) + "," +
                 Exact(r.macs[i].mac) + "," +
                 (i < r.tests.size() && r.tests[i] ? Exact(r.tests[i]->p) : "") + "\n";
      AppendTableCsv(r.method, r.macs[i], &table_csv);
    }
    row.push_back(Fixed(Total(r.macs)));
    summary += CsvField(r.method) + ",Total," + Exact(Total(r.macs)) + ",\n";
    rows.push_back(std::move(row));
  }
  std::string text = "MAC (higher means more bias removed)\n" + RenderTable(header, rows);

  if (results.size() > 1) {
    std::vector<std::string> dheader = {"method"};
    for (const CategoryMac& m : results[0].macs) {
      dheader.push_back("d_" + m.category);
      dheader.push_back("p_" + m.category);
    }
    dheader.push_back("d_Total");
    std::vector<std::vector<std::string>> drows;
    for (std::size_t r = 1; r < results.size(); ++r) {
      std::vector<std::string> row = {results[r].method};
      for (std::size_t i = 0; i < results[r].macs.size(); ++i) {
        row.push_back(Fixed(results[r].macs[i].mac - results[0].macs[i].mac));
        row.push_back(FormatP(results[r].tests[i]));
      }
      row.push_back(Fixed(Total(results[r].macs) - Total(results[0].macs)));
      drows.push_back(std::move(row));
    }
    text += "\nChange vs Biased (paired t-test p-values)\n" + RenderTable(dheader, drows);
  }
  if (!best_seq.empty()) {
    text += "\nbest Hard_Seq order: " + best_seq + "\n";
    manifest.details["best_hard_seq"] = best_seq;
  }

  if (!cmd.ground_truth.empty()) {
    std::vector<Category> truth = LoadCategories({cmd.ground_truth});
    ValidateCategories(truth, biased.get(), cmd.common.lowercase_fallback,
                       &manifest.warnings);
    const json report = RunHypothesis(categories, truth[0], biased.get(), cmd.k,
                                      cmd.seed, cmd.random_vectors, cmd.common);
    for (const auto& w : report["warnings"]) {
      manifest.warnings.push_back(w.get<std::string>());
    }
    text += "\nCosine similarity with the intersectional subspace\n" +
            HypothesisText(report);
    if (!cmd.projection_csv.empty()) {
      WriteFile(cmd.projection_csv, ProjectionCsv(report));
      manifest.outputs.push_back(cmd.projection_csv);
    }
  }

  Emit(text, cmd.out, &manifest);
  if (!cmd.csv.empty()) {
    WriteFile(cmd.csv, summary);
    manifest.outputs.push_back(cmd.csv);
  }
  if (!cmd.table_csv.empty()) {
    WriteFile(cmd.table_csv, table_csv);
    manifest.outputs.push_back(cmd.table_csv);
  }
  PrintWarnings(manifest.warnings);
  FinishManifest(&manifest, cmd.common.manifest, cmd.out);
  return kExitOk;
}

}  // namespace
}  // namespace mcdebias::cli

int main(int argc, char** argv) {
  using namespace mcdebias::cli;

  CLI::App app{"Bias subspaces, multi-category hard-debiasing and bias metrics "
               "for static word embeddings"};
  app.set_config("--config", "", "Read options from a TOML/INI config file");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mcd_version()));

  SubspaceCommand subspace;
  auto* sub = app.add_subcommand("subspace", "Build (and optionally compose) bias subspaces");
  AddCommon(sub, &subspace.common);
  sub->add_option("--k", subspace.k, "Components per category")->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--strategy", subspace.strategy, "single, sum, mean or josec")
      ->capture_default_str();
  sub->add_option("--out", subspace.out, "Output subspace file")->required();
  sub->add_option("--out-dir", subspace.out_dir,
                  "Also write per-category subspaces here when composing");

  DebiasCommand debias;
  auto* deb = app.add_subcommand("debias", "Hard-debias embeddings");
  AddCommon(deb, &debias.common);
  deb->add_option("--strategy", debias.strategy, "single, seq, sum, mean or josec")
      ->required();
  deb->add_option("--k", debias.k, "Components per category")->required()
      ->check(CLI::PositiveNumber);
  auto* order = deb->add_option("--order", debias.order,
                                "Sequential order, e.g. race,religion,gender")
                    ->delimiter(',');
  auto* all_orders =
      deb->add_flag("--all-orders", debias.all_orders, "Run every sequential order");
  order->excludes(all_orders);
  deb->add_flag("--frozen-subspaces", debias.frozen_subspaces,
                "Sequential: build all subspaces from the input embeddings");
  deb->add_option("--neutral-words", debias.neutral_words,
                  "File with one neutral word per line (default: all words "
                  "outside defining and equality sets)");
  deb->add_option("--out", debias.out, "Output embedding file")->required();
  deb->add_option("--out-format", debias.out_format,
                  "Output format (default: same as input)");

  EvalMacCommand eval_mac;
  auto* mac = app.add_subcommand("eval-mac", "Mean average cosine distance per category");
  AddCommon(mac, &eval_mac.common);
  mac->add_option("--baseline", eval_mac.baseline, "Embeddings to compare against");
  mac->add_option("--csv", eval_mac.csv, "Write the distance table as CSV");
  mac->add_option("--out", eval_mac.out, "Also write the printed table here");

  EvalEqCommand eval_eq;
  auto* eq = app.add_subcommand("eval-eq", "FPED / FNED from group confusion counts");
  eq->add_option("--input", eval_eq.input, "CSV with group,TP,FP,TN,FN rows")
      ->required();
  eq->add_option("--out", eval_eq.out, "Also write the result here");
  eq->add_option("--manifest", eval_eq.manifest, "Manifest path");

  HypothesisCommand hypothesis;
  auto* hyp = app.add_subcommand("validate-hypothesis",
                                 "Compare subspaces with an intersectional ground truth");
  AddCommon(hyp, &hypothesis.common);
  hyp->add_option("--ground-truth", hypothesis.ground_truth,
                  "Spec whose defining sets are intersectional groups")->required();
  hyp->add_option("--k", hypothesis.k, "Components per category")->required()
      ->check(CLI::PositiveNumber);
  hyp->add_option("--seed", hypothesis.seed, "Seed for the random baseline")
      ->capture_default_str();
  hyp->add_option("--random-vectors", hypothesis.random_vectors,
                  "Random unit vectors to average")->capture_default_str();
  hyp->add_option("--out", hypothesis.out, "Also write the report here");
  hyp->add_option("--csv", hypothesis.csv, "3-D projection CSV");

  ReportCommand report;
  auto* rep = app.add_subcommand("report", "Consolidated bias report");
  AddCommon(rep, &report.common);
  auto* debiased = rep->add_option("--debiased", report.debiased,
                                   "Debiased embeddings to compare with --embeddings");
  auto* pipeline = rep->add_flag("--pipeline", report.pipeline,
                                 "Run Hard_Seq (all orders), SUM, MEAN and JoSEC");
  debiased->excludes(pipeline);
  rep->add_option("--k", report.k, "Components per category (pipeline, ground truth)");
  rep->add_flag("--frozen-subspaces", report.frozen_subspaces,
                "Hard_Seq: build all subspaces from the input embeddings");
  rep->add_option("--ground-truth", report.ground_truth,
                  "Add the intersectional similarity table");
  rep->add_option("--seed", report.seed, "Seed for the random baseline")
      ->capture_default_str();
  rep->add_option("--random-vectors", report.random_vectors,
                  "Random unit vectors to average")->capture_default_str();
  rep->add_option("--out", report.out, "Also write the report here");
  rep->add_option("--csv", report.csv, "Per-method MAC summary CSV");
  rep->add_option("--table-csv", report.table_csv, "Per-method distance tables CSV");
  rep->add_option("--projection-csv", report.projection_csv, "3-D projection CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (sub->parsed()) return RunSubspace(subspace, args);
    if (deb->parsed()) return RunDebiasCommand(debias, args);
    if (mac->parsed()) return RunEvalMac(eval_mac, args);
    if (eq->parsed()) return RunEvalEq(eval_eq, args);
    if (hyp->parsed()) return RunValidateHypothesis(hypothesis, args);
    if (rep->parsed()) return RunReport(report, args);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
