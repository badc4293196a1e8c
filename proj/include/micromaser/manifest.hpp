#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "micromaser/config.hpp"

namespace micromaser {

// Plain-text record of a run: the full configuration as replayable
// "key = value" lines followed by metadata and the digest of every output.
struct RunManifest {
  std::string command;
  RunConfig config;
  std::string schedule;  // human-readable injection schedule description
  std::vector<std::pair<std::string, std::string>> digests;  // file name -> sha256 hex
  std::vector<std::string> warnings;

  std::string render() const;
};

std::string sha256_hex(std::string_view data);

}  // namespace micromaser
