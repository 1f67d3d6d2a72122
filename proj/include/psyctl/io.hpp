#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace psyctl::io {

std::string iso8601_utc_now();

// Reads a line-delimited JSON file; blank lines are skipped.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record);

}  // namespace psyctl::io
