#pragma once

#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "kqb/app/config.hpp"

namespace kqb::app {

/// Numeric CSV with a header row; every value printed with %.17g and rows ended by '\n'.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::initializer_list<double> values);
  /// Flushes and closes; throws on I/O failure.
  void close();

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
  std::size_t columns_;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct ManifestRun {
  std::string name;
  Mode mode = Mode::figure;
  std::vector<ResolvedParam> parameters;
  std::vector<std::string> outputs;  ///< paths relative to the output root
  std::string summary_json;          ///< optional serialized object, e.g. the fit
};

struct RunManifest {
  std::string command;
  double duration_seconds = 0.0;
  std::vector<std::string> assumptions;
  std::vector<ManifestRun> runs;
};

inline constexpr const char* kSoftwareVersion = "1.0.0";

/// Writes root/manifest.json, hashing every listed output.
void write_manifest(const std::filesystem::path& root, const RunManifest& manifest);

}  // namespace kqb::app
