#include "manifest.h"

#include <openssl/evp.h>

#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include "covdesign/error.h"
#include "covdesign/kernels.h"

namespace covdesign::cli {
namespace {

std::string hex(const unsigned char* data, unsigned int len) {
  static const char* digits = "0123456789abcdef";
  std::string out(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = digits[data[i] >> 4];
    out[2 * i + 1] = digits[data[i] & 15];
  }
  return out;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("sha256 failed");
  return hex(digest, len);
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RunRecord::RunRecord(std::string command, json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void RunRecord::input(const std::string& name, const std::filesystem::path& path) {
  inputs_[name] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void RunRecord::output(const std::string& name, const std::filesystem::path& path) {
  outputs_[name] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void RunRecord::write(const std::filesystem::path& path) const {
  json m;
  m["tool"] = "covdesign";
  m["version"] = kToolVersion;
  m["command"] = command_;
  m["created_utc"] = utc_now();
  m["isa"] = kernels::isa_name(kernels::active_isa());
  m["config"] = config_;
  m["config_sha256"] = sha256_hex(config_.dump());
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  m["seeds"] = seeds_;
  m["timings_seconds"] = timings_;
  if (!notes_.empty()) m["notes"] = notes_;
  write_file(path, m.dump(2) + "\n");
}

}  // namespace covdesign::cli
