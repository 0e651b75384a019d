#pragma once

#include <map>
#include <string>
#include <vector>

#include "rotsim/config.hpp"

// Output plumbing: deterministic CSV formatting and the run manifest that
// accompanies every data file.

namespace rotsim {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest-but-sufficient float formatting with 12 significant digits,
/// locale independent. Used for all data files.
std::string format_float(double value);

/// 17 significant digits; round-trips a double exactly (manifests).
std::string format_exact(double value);

struct RunManifest {
  Scenario scenario;
  std::string command;
  std::string tool_version;
  // diagnostics, kept as ordered key -> value text
  std::map<std::string, std::string> diagnostics;

  std::string serialize() const;  // config grammar plus diagnostics.*
};

/// Writes text to path, throwing IoError on failure. Newlines are '\n'.
void write_text_file(const std::string& path, const std::string& text);

/// Replaces the extension of path with ".manifest".
std::string manifest_path_for(const std::string& output_path);

}  // namespace rotsim
