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

#include "launderbench/log.hpp"

#include <iostream>
#include <mutex>
#include <string>

namespace lb {
namespace {

std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s;
  return s;
}

LogLevel& min_level() {
  static LogLevel level = LogLevel::kInfo;
  return level;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::kInfo: return "INFO";
    case LogLevel::kWarning: return "WARNING";
    case LogLevel::kError: return "ERROR";
  }
  return "?";
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(log_mutex());
  sink() = std::move(s);
}

void set_min_log_level(LogLevel level) {
  std::lock_guard lock(log_mutex());
  min_level() = level;
}

void log_message(LogLevel level, std::string_view message) {
  std::lock_guard lock(log_mutex());
  if (sink()) {
    sink()(level, message);
    return;
  }
  if (level < min_level()) return;
  std::cerr << level_name(level) << ": " << message << '\n';
}

}  // namespace lb
