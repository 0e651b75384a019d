#include "rotsim/io.hpp"

#include <cstdio>
#include <fstream>

namespace rotsim {

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string RunManifest::serialize() const {
  std::string out = serialize_config(scenario);
  out += "diagnostics.command = " + command + "\n";
  out += "diagnostics.tool_version = " + tool_version + "\n";
  for (const auto& [key, value] : diagnostics)
    out += "diagnostics." + key + " = " + value + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string manifest_path_for(const std::string& output_path) {
  const std::size_t slash = output_path.find_last_of('/');
  const std::size_t dot = output_path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return output_path + ".manifest";
  return output_path.substr(0, dot) + ".manifest";
}

}  // namespace rotsim
