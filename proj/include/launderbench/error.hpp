// Copyright 2026  launderbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lb {

// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LB_DECLARE_ERROR(Name)                  \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

LB_DECLARE_ERROR(InvalidParameter);
LB_DECLARE_ERROR(IoFailure);

// audio-core
LB_DECLARE_ERROR(UnsupportedFormat);
LB_DECLARE_ERROR(MultichannelInput);
LB_DECLARE_ERROR(CorruptFile);
LB_DECLARE_ERROR(EmptyBuffer);
LB_DECLARE_ERROR(BackendInvocationFailed);

// dsp
LB_DECLARE_ERROR(SilentInput);
LB_DECLARE_ERROR(RateMismatch);
LB_DECLARE_ERROR(UnstableFilter);
LB_DECLARE_ERROR(NoiseAssetMissing);

// protocol
LB_DECLARE_ERROR(DuplicateId);

// augment
LB_DECLARE_ERROR(EmptyInput);
LB_DECLARE_ERROR(ZeroSelection);

// metrics / reporting
LB_DECLARE_ERROR(EmptyClass);
LB_DECLARE_ERROR(InsufficientCells);

#undef LB_DECLARE_ERROR

// A text input line that could not be parsed. Line numbers are 1-based.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonFiniteScore : public MalformedLine {
 public:
  using MalformedLine::MalformedLine;
};

// Join failures carry the offending utterance ids.
class JoinError : public Error {
 public:
  JoinError(const std::string& what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

class MissingScore : public JoinError {
 public:
  using JoinError::JoinError;
};

class OrphanScore : public JoinError {
 public:
  using JoinError::JoinError;
};

}  // namespace lb
