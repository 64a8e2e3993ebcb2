#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace recam {

// One per pipeline run. Carries no timestamps so that identical runs write
// identical manifests.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> content hash
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;

  // Hashes a file (or every regular file below a directory, in path order).
  void add_input(const std::string& name, const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& file) const;
};

std::string hash_path(const std::filesystem::path& path);

}  // namespace recam
