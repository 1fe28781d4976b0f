#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace molqudit {

/// Serialises with a fixed layout: insertion-ordered keys, two-space indent,
/// floats as %.17g. Equal documents give byte-identical text.
std::string dump_json(const nlohmann::ordered_json& doc);

/// Reads a whole file; throws ConfigError when it cannot be opened.
std::string read_file(const std::string& path);
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& text);

}  // namespace molqudit
