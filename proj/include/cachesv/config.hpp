// Copyright 2026 The cachesv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Simulator configuration file:
//
//   [system]
//   total_qbit=31
//   rank_qbit=0
//   buffer_qbit=28
//
// Exactly these three keys are accepted. Comments start with '#', ';' or "//".

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cachesv/circuit_io.hpp"

namespace cachesv {

struct SystemConfig {
    int total_qbit = 0;
    int rank_qbit = 0;
    int buffer_qbit = 0;

    bool operator==(const SystemConfig &) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const char *ws = " \t\r";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::string_view strip_ini_comment(std::string_view line) {
    std::size_t cut = line.size();
    for (std::string_view marker : {"#", ";", "//"}) {
        cut = std::min(cut, line.find(marker) == std::string_view::npos ? line.size() : line.find(marker));
    }
    return line.substr(0, cut);
}

}  // namespace detail

inline SystemConfig parse_ini(std::string_view text) {
    std::optional<int> total, rank, buffer;
    bool in_system = false;
    bool saw_system = false;
    auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); i++) {
        const std::size_t no = i + 1;
        std::string_view line = detail::trim(detail::strip_ini_comment(lines[i]));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(no, "malformed section header");
            std::string_view name = detail::trim(line.substr(1, line.size() - 2));
            if (name != "system") throw ParseError(no, "unknown section '" + std::string(name) + "'");
            if (saw_system) throw ParseError(no, "duplicate [system] section");
            in_system = saw_system = true;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(no, "expected key=value");
        if (!in_system) throw ParseError(no, "key outside the [system] section");
        std::string_view key = detail::trim(line.substr(0, eq));
        std::string_view value = detail::trim(line.substr(eq + 1));
        std::optional<int> *slot = nullptr;
        if (key == "total_qbit") slot = &total;
        else if (key == "rank_qbit") slot = &rank;
        else if (key == "buffer_qbit") slot = &buffer;
        else throw ParseError(no, "unknown key '" + std::string(key) + "'");
        if (slot->has_value()) throw ParseError(no, "duplicate key '" + std::string(key) + "'");
        *slot = detail::parse_int<int>(value, no, "value");
    }
    if (!total || !rank || !buffer) {
        throw std::invalid_argument("config must set total_qbit, rank_qbit and buffer_qbit in [system]");
    }
    SystemConfig cfg{*total, *rank, *buffer};
    if (cfg.total_qbit < 1 || cfg.total_qbit > kMaxQubits - 1) throw std::invalid_argument("total_qbit out of range");
    if (cfg.rank_qbit < 0 || cfg.rank_qbit > cfg.total_qbit) throw std::invalid_argument("rank_qbit out of range");
    if (cfg.buffer_qbit < 0 || cfg.buffer_qbit > cfg.total_qbit - cfg.rank_qbit) {
        throw std::invalid_argument("buffer_qbit out of range");
    }
    return cfg;
}

inline std::string serialize_ini(const SystemConfig &cfg) {
    return "[system]\ntotal_qbit=" + std::to_string(cfg.total_qbit) + "\nrank_qbit=" + std::to_string(cfg.rank_qbit) +
           "\nbuffer_qbit=" + std::to_string(cfg.buffer_qbit) + "\n";
}

}  // namespace cachesv
