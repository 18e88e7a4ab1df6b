#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace paraforge {

struct ManifestFileRef {
  std::string path;    // as passed on the command line
  std::string sha256;  // content hash
};

// Machine-readable provenance for one stage run, written beside each
// output as <output>.manifest.json. Deliberately free of timestamps so
// reruns of deterministic stages stay byte-identical.
struct RunManifest {
  std::string tool;
  std::string tool_version;
  std::string command;
  std::string config_hash;
  std::vector<ManifestFileRef> inputs;
  std::vector<ManifestFileRef> outputs;
  std::map<std::string, long> counts;
};

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

ManifestFileRef hash_file_ref(const std::filesystem::path& path);

// Writes the manifest beside every output it lists.
void write_run_manifest(const RunManifest& manifest);
RunManifest read_run_manifest(const std::filesystem::path& path);

}  // namespace paraforge
