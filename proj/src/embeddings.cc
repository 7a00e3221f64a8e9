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

#include "embeddings.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <utility>

#include "error.h"

namespace mcdebias {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits on spaces/tabs; a trailing '\r' is treated as whitespace.
void Tokenize(std::string_view line, std::vector<std::string_view>* tokens) {
  tokens->clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) tokens->push_back(line.substr(start, i - start));
  }
}

bool ParseDouble(std::string_view token, double* value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *value);
  return ec == std::errc() && ptr == end && std::isfinite(*value);
}

bool ParseCount(std::string_view token, std::size_t* value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, *value);
  return ec == std::errc() && ptr == end;
}

std::string LineRef(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

}  // namespace

EmbeddingFormat ParseEmbeddingFormat(std::string_view name) {
  if (name == "word2vec" || name == "word2vec-text") {
    return EmbeddingFormat::kWord2VecText;
  }
  if (name == "glove" || name == "glove-text") {
    return EmbeddingFormat::kGloveText;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown embedding format '" + std::string(name) + "'");
}

const char* EmbeddingFormatName(EmbeddingFormat format) {
  return format == EmbeddingFormat::kWord2VecText ? "word2vec-text"
                                                  : "glove-text";
}

EmbeddingSet::EmbeddingSet(std::vector<std::string> vocab, RowMatrix matrix,
                           bool normalized)
    : vocab_(std::move(vocab)),
      matrix_(std::move(matrix)),
      normalized_(normalized) {
  if (matrix_.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be > 0");
  }
  if (static_cast<std::size_t>(matrix_.rows()) != vocab_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vocabulary has " + std::to_string(vocab_.size()) +
                    " words but matrix has " + std::to_string(matrix_.rows()) +
                    " rows");
  }
  if (!matrix_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding matrix has non-finite entries");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate word '" + vocab_[i] + "'");
    }
  }
  if (normalized_ && !RowsAreUnit(1e-6)) {
    throw Error(ErrorCode::kNotNormalized,
                "embedding set flagged normalized has non-unit rows");
  }
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingSet::RowsAreUnit(double tolerance) const {
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    if (std::abs(matrix_.row(i).norm() - 1.0) > tolerance) return false;
  }
  return true;
}

EmbeddingSet EmbeddingSet::WithMatrix(RowMatrix matrix, bool normalized) const {
  if (matrix.rows() != matrix_.rows() || matrix.cols() != matrix_.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "replacement matrix shape differs from the embedding set");
  }
  return EmbeddingSet(vocab_, std::move(matrix), normalized);
}

LoadResult ParseEmbeddings(std::string_view text, EmbeddingFormat format) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }

  std::vector<std::string> vocab;
  std::unordered_map<std::string, bool> seen;
  std::vector<double> values;
  std::vector<std::string_view> tokens;
  std::size_t dim = 0;
  std::size_t duplicates = 0;
  std::optional<std::size_t> declared_count;
  bool header_pending = format == EmbeddingFormat::kWord2VecText;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    Tokenize(line, &tokens);
    if (tokens.empty()) continue;

    if (header_pending) {
      std::size_t count = 0;
      if (tokens.size() != 2 || !ParseCount(tokens[0], &count) ||
          !ParseCount(tokens[1], &dim) || dim == 0) {
        throw Error(ErrorCode::kMalformedLine,
                    LineRef(line_no) +
                        ": expected word2vec header '<vocab_count> <dim>'");
      }
      declared_count = count;
      vocab.reserve(count);
      values.reserve(count * dim);
      header_pending = false;
      continue;
    }

    if (tokens.size() < 2) {
      throw Error(ErrorCode::kMalformedLine,
                  LineRef(line_no) + ": expected a word followed by values");
    }
    const std::size_t row_dim = tokens.size() - 1;
    if (dim == 0) dim = row_dim;

    const std::size_t base = values.size();
    values.resize(base + row_dim);
    for (std::size_t j = 0; j < row_dim; ++j) {
      if (!ParseDouble(tokens[j + 1], &values[base + j])) {
        throw Error(ErrorCode::kMalformedLine,
                    LineRef(line_no) + ": '" + std::string(tokens[j + 1]) +
                        "' is not a finite number");
      }
    }
    if (row_dim != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  LineRef(line_no) + ": row has " + std::to_string(row_dim) +
                      " values, expected " + std::to_string(dim));
    }

    std::string word(tokens[0]);
    if (!seen.emplace(word, true).second) {
      ++duplicates;
      values.resize(base);
      continue;
    }
    vocab.push_back(std::move(word));
  }

  if (vocab.empty()) {
    throw Error(ErrorCode::kEmptyFile, "no embedding rows found");
  }

  RowMatrix matrix = Eigen::Map<const RowMatrix>(
      values.data(), static_cast<Eigen::Index>(vocab.size()),
      static_cast<Eigen::Index>(dim));
  const std::size_t rows_read = vocab.size() + duplicates;
  LoadResult result{EmbeddingSet(std::move(vocab), std::move(matrix), false),
                    duplicates, std::nullopt};
  if (declared_count && *declared_count != rows_read) {
    result.declared_count_mismatch = *declared_count;
  }
  return result;
}

LoadResult LoadEmbeddings(const std::string& path, EmbeddingFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading '" + path + "'");
  return ParseEmbeddings(text, format);
}

void SaveEmbeddings(const EmbeddingSet& set, const std::string& path,
                    EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");

  std::string buffer;
  char number[32];
  if (format == EmbeddingFormat::kWord2VecText) {
    buffer += std::to_string(set.size()) + " " + std::to_string(set.dim()) + "\n";
  }
  const RowMatrix& m = set.matrix();
  for (std::size_t i = 0; i < set.size(); ++i) {
    buffer += set.word(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      auto [ptr, ec] = std::to_chars(number, number + sizeof(number),
                                     m(static_cast<Eigen::Index>(i), j));
      buffer += ' ';
      buffer.append(number, ptr);
    }
    buffer += '\n';
    if (buffer.size() > (1u << 20)) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

EmbeddingSet Normalize(const EmbeddingSet& set) {
  RowMatrix m = set.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm < 1e-12) {
      throw Error(ErrorCode::kZeroVector,
                  "zero vector for word '" +
                      set.word(static_cast<std::size_t>(i)) + "'");
    }
    m.row(i) /= norm;
  }
  return set.WithMatrix(std::move(m), true);
}

}  // namespace mcdebias
