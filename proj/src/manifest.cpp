#include "recam/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

std::string hash_path(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw ResourceError("missing input: " + path.string());
  std::uint64_t h = text::fnv1a64("");
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      h = text::fnv1a64(fs::relative(f, path).generic_string(), h);
      h = text::fnv1a64(text::read_file(f.string()), h);
    }
  } else {
    h = text::fnv1a64(text::read_file(path.string()), h);
  }
  return text::hex64(h);
}

void RunManifest::add_input(const std::string& name, const std::filesystem::path& path) {
  inputs.emplace_back(name, hash_path(path));
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : inputs) j["inputs"][k] = v;
  j["counts"] = counts;
  j["warnings"] = warnings;
  return j;
}

void RunManifest::write(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ResourceError("cannot write manifest: " + file.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace recam
