#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atomwalk/config.hpp"

namespace atomwalk {

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string config_json;  // full echo of the effective RunConfig
  std::string version;
  std::string started_at;  // UTC, ISO 8601
  std::string finished_at;
  double wall_seconds = 0.0;
  std::vector<OutputFile> outputs;
};

std::string artifact_version();

/// JSON echo of every effective setting.
std::string config_json(const RunConfig& cfg);

/// Runs the command, writes its data files into cfg.out_dir and finishes with
/// manifest.json listing every data file with its SHA-256. Data files depend
/// only on the config, never on the worker count. A zoom that resolves early
/// still writes the levels it computed before the ZoomResolved is rethrown.
RunManifest run(const RunConfig& cfg);

std::string manifest_json(const RunManifest& m);

}  // namespace atomwalk
