#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace reslab::cli {

/// SHA-1 of "blob <size>\0" + bytes, i.e. what `git hash-object` prints.
std::string git_blob_sha1(const std::string& bytes);
std::string file_blob_sha1(const std::filesystem::path& path);

/// Writes bytes to path via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

class RunManifest {
 public:
  RunManifest(std::string command, std::filesystem::path out_dir);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_warning(const std::string& text) { warnings_.push_back(text); }
  void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  /// Writes bytes under out_dir and lists the file.
  void write_output(const std::string& name, const std::string& bytes);
  /// Lists a file something else already wrote under out_dir.
  void add_output(const std::string& name);

  const std::filesystem::path& out_dir() const { return out_dir_; }

  /// manifest.json, atomically, after every output; hashes are taken here.
  void finish(double wall_seconds) const;

 private:
  std::string command_;
  std::filesystem::path out_dir_;
  nlohmann::json config_;
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json extra_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
};

}  // namespace reslab::cli
