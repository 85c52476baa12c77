#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace testing {

inline std::string source_path(const std::string& rel) { return std::string(REGIMECAST_SOURCE_DIR) + "/" + rel; }

/// Writes `content` to a fresh file under the system temp directory.
inline std::string write_temp(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "regimecast_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

}  // namespace testing
