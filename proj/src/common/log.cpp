/*
 * Copyright (c) 2026 The viskd Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "common/log.hpp"

#include <iostream>
#include <mutex>

namespace viskd::log {
namespace {

std::mutex g_mutex;
bool g_quiet = false;

void default_sink(Level level, const std::string& message) {
  if (g_quiet) return;
  if (level == Level::kWarning) {
    std::cerr << "warning: " << message << '\n';
  } else {
    std::cerr << message << '\n';
  }
}

Sink& sink_ref() {
  static Sink sink = default_sink;
  return sink;
}

void emit(Level level, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (auto& sink = sink_ref()) sink(level, message);
}

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard<std::mutex> lock(g_mutex);
  Sink previous = std::move(sink_ref());
  sink_ref() = sink ? std::move(sink) : Sink(default_sink);
  return previous;
}

void set_quiet(bool quiet) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_quiet = quiet;
}

void info(const std::string& message) { emit(Level::kInfo, message); }
void warning(const std::string& message) { emit(Level::kWarning, message); }

}  // namespace viskd::log
