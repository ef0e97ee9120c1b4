#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qtensor::cli {

struct FileRecord {
  std::string name;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::uint32_t crc32 = 0;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Inventory written next to the outputs of every successful invocation.
struct RunManifest {
  std::string version;
  std::string subcommand;
  std::string config;  // resolved config text, replayable with --config
  std::vector<StageTiming> stages;
  std::vector<FileRecord> files;

  std::string to_json() const;
};

std::uint32_t file_crc32(const std::filesystem::path& path);
FileRecord describe_file(const std::filesystem::path& dir, const std::string& name);

/// Semantic version of this build.
std::string version();

}  // namespace qtensor::cli
