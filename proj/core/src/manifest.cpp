#include "paraforge/manifest.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "paraforge/errors.hpp"
#include "paraforge/hashing.hpp"

namespace paraforge {

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

ManifestFileRef hash_file_ref(const std::filesystem::path& path) {
  return ManifestFileRef{path.string(), sha256_file_hex(path)};
}

namespace {

nlohmann::ordered_json refs_json(const std::vector<ManifestFileRef>& refs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& ref : refs) {
    nlohmann::ordered_json item;
    item["path"] = ref.path;
    item["sha256"] = ref.sha256;
    arr.push_back(std::move(item));
  }
  return arr;
}

}  // namespace

void write_run_manifest(const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["tool"] = manifest.tool;
  doc["tool_version"] = manifest.tool_version;
  doc["command"] = manifest.command;
  doc["config_hash"] = manifest.config_hash;
  doc["inputs"] = refs_json(manifest.inputs);
  doc["outputs"] = refs_json(manifest.outputs);
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.counts) counts[key] = value;
  doc["counts"] = std::move(counts);
  std::string body = doc.dump(2) + "\n";

  for (const auto& output : manifest.outputs) {
    auto path = manifest_path_for(output.path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << body;
  }
}

RunManifest read_run_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  RunManifest manifest;
  try {
    manifest.tool = doc.at("tool").get<std::string>();
    manifest.tool_version = doc.at("tool_version").get<std::string>();
    manifest.command = doc.at("command").get<std::string>();
    manifest.config_hash = doc.at("config_hash").get<std::string>();
    for (const auto& item : doc.at("inputs")) {
      manifest.inputs.push_back({item.at("path").get<std::string>(),
                                 item.at("sha256").get<std::string>()});
    }
    for (const auto& item : doc.at("outputs")) {
      manifest.outputs.push_back({item.at("path").get<std::string>(),
                                  item.at("sha256").get<std::string>()});
    }
    for (auto it = doc.at("counts").begin(); it != doc.at("counts").end(); ++it) {
      manifest.counts[it.key()] = it.value().get<long>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  return manifest;
}

}  // namespace paraforge
