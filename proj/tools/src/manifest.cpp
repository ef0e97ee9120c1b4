#include "qtensor/cli/manifest.hpp"

#include <array>
#include <boost/crc.hpp>
#include <fstream>
#include <json.hpp>

#include "qtensor/errors.hpp"

#ifndef QTENSOR_VERSION
#define QTENSOR_VERSION "0.0.0"
#endif

namespace qtensor::cli {

std::string version() { return QTENSOR_VERSION; }

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("manifest: cannot read " + path.string());
  boost::crc_32_type crc;
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    crc.process_bytes(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  return crc.checksum();
}

FileRecord describe_file(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  return {name, std::filesystem::file_size(path), file_crc32(path)};
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["config"] = config;
  auto& st = j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) st.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  auto& fs = j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", f.crc32);
    fs.push_back({{"name", f.name}, {"bytes", f.bytes}, {"crc32", hex}});
  }
  return j.dump(2) + "\n";
}

}  // namespace qtensor::cli
