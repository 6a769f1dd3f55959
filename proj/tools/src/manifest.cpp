#include "reslab_cli/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "reslab/errors.hpp"

#ifndef RESLAB_VERSION
#define RESLAB_VERSION "unknown"
#endif

namespace reslab::cli {

namespace fs = std::filesystem;

namespace {
std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
}  // namespace

std::string git_blob_sha1(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-1 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string file_blob_sha1(const fs::path& path) { return git_blob_sha1(read_all(path)); }

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

RunManifest::RunManifest(std::string command, fs::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {
  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir_.string() + "': " + ec.message());
}

void RunManifest::add_input(const std::string& role, const fs::path& path) {
  inputs_[role] = {{"path", path.string()}, {"sha1", file_blob_sha1(path)}};
}

void RunManifest::write_output(const std::string& name, const std::string& bytes) {
  write_file_atomic(out_dir_ / name, bytes);
  add_output(name);
}

void RunManifest::add_output(const std::string& name) {
  for (const auto& o : outputs_)
    if (o == name) return;
  outputs_.push_back(name);
}

void RunManifest::finish(double wall_seconds) const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& name : outputs_) {
    const auto bytes = read_all(out_dir_ / name);
    files.push_back({{"path", name}, {"bytes", bytes.size()}, {"sha1", git_blob_sha1(bytes)}});
  }
  nlohmann::json m{{"tool", "reslab"},
                   {"version", RESLAB_VERSION},
                   {"command", command_},
                   {"config", config_},
                   {"inputs", inputs_},
                   {"outputs", files},
                   {"warnings", warnings_},
                   {"wall_time_s", wall_seconds}};
  for (auto it = extra_.begin(); it != extra_.end(); ++it) m[it.key()] = it.value();
  write_file_atomic(out_dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace reslab::cli
