#ifndef COVDESIGN_TOOLS_MANIFEST_H_
#define COVDESIGN_TOOLS_MANIFEST_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace covdesign::cli {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Collects what a command read, wrote and how long each stage took, and
// writes it as the run manifest. `config` is the fully resolved command
// configuration; feeding it back to the same command reproduces the outputs.
class RunRecord {
 public:
  RunRecord(std::string command, json config);

  json& config() { return config_; }
  void input(const std::string& name, const std::filesystem::path& path);
  void output(const std::string& name, const std::filesystem::path& path);
  void seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }
  void note(const std::string& key, json value) { notes_[key] = std::move(value); }

  template <typename F>
  auto timed(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Stop {
      RunRecord* self;
      std::string stage;
      std::chrono::steady_clock::time_point start;
      ~Stop() {
        self->timings_[stage] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    } stop{this, stage, start};
    return f();
  }

  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  json config_;
  json inputs_ = json::object();
  json outputs_ = json::object();
  json seeds_ = json::object();
  json timings_ = json::object();
  json notes_ = json::object();
};

// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view text);
std::string read_file(const std::filesystem::path& path);

}  // namespace covdesign::cli

#endif  // COVDESIGN_TOOLS_MANIFEST_H_
