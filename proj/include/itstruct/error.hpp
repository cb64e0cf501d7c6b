// Copyright 2026 The itstruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace itstruct {

enum class ErrorKind {
  InvalidAlphabet,
  InvalidDistribution,
  InvalidPartition,
  InvalidStructure,
  ZeroMassSubset,
  PartitionMismatch,
  AlphabetMismatch,
  EmptySubset,
  NotUltrametric,
  NotNormalized,
  ZeroMassSide,
  DegenerateSplit,
  TooFewLetters,
  IterationCap,
  UnsupportedRegime,
  TooFewPoints,
  DuplicateValues,
  NonMonotoneCdf,
  SpaceTooLarge,
  Parse,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers can branch
// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed input text. line/column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& reason)
      : Error(ErrorKind::Parse, format(source, line, column, reason)),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& source, std::size_t line, std::size_t column,
                            const std::string& reason) {
    std::string out = source.empty() ? std::string("<input>") : source;
    if (line > 0) {
      out += ":" + std::to_string(line);
      if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + reason;
  }

  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace itstruct
