#include "kqb/app/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include "json.hpp"

#include "kqb/errors.hpp"
#include "kqb/simd/kernels.hpp"

namespace kqb::app {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header)
    : path_(path), columns_(header.size()) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw Error("cannot open " + path.string() + " for writing");
  bool first = true;
  for (const char* h : header) {
    std::fputs(first ? "" : ",", file_);
    std::fputs(h, file_);
    first = false;
  }
  std::fputc('\n', file_);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::row(std::initializer_list<double> values) {
  if (values.size() != columns_) throw InvalidArgument("CsvWriter: row width does not match header");
  bool first = true;
  for (double v : values) {
    std::fprintf(file_, first ? "%.17g" : ",%.17g", v);
    first = false;
  }
  std::fputc('\n', file_);
}

void CsvWriter::close() {
  const bool failed = std::ferror(file_) != 0;
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (failed || rc != 0) throw Error("write failed for " + path_.string());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& root, const RunManifest& manifest) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["software"] = {{"name", "kqb"}, {"version", kSoftwareVersion}, {"simd", std::string(simd::kernels().name)}};
  j["command"] = manifest.command;
  j["duration_seconds"] = manifest.duration_seconds;
  j["assumptions"] = manifest.assumptions;
  ordered_json runs = ordered_json::array();
  for (const ManifestRun& run : manifest.runs) {
    ordered_json r;
    r["name"] = run.name;
    r["mode"] = std::string(mode_name(run.mode));
    ordered_json params = ordered_json::array();
    for (const ResolvedParam& p : run.parameters)
      params.push_back({{"key", p.key}, {"value", p.value}, {"assumed", p.assumed}});
    r["parameters"] = params;
    ordered_json assumed = ordered_json::array();
    for (const ResolvedParam& p : run.parameters)
      if (p.assumed) assumed.push_back(p.key);
    r["assumed_keys"] = assumed;
    if (!run.summary_json.empty()) r["summary"] = ordered_json::parse(run.summary_json);
    ordered_json outputs = ordered_json::array();
    for (const std::string& rel : run.outputs) outputs.push_back({{"path", rel}, {"sha256", sha256_file(root / rel)}});
    r["outputs"] = outputs;
    runs.push_back(r);
  }
  j["runs"] = runs;
  std::ofstream out(root / "manifest.json", std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw Error("cannot write " + (root / "manifest.json").string());
}

}  // namespace kqb::app
