#include "pchain/cache.hpp"

#include "pchain/error.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace pchain::io {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::InvalidArgument, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::InvalidArgument, "short write to " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::InvalidArgument, "cannot rename into " + path + ": " + ec.message());
  }
}

Cache Cache::from_environment(const std::string& flag_dir) {
  if (const char* env = std::getenv("PCHAIN_CACHE"); env && *env) return Cache(env);
  return Cache(flag_dir);
}

std::string Cache::key(std::string_view material) {
  std::string m = "pchain-cache-v" + std::to_string(format_version) + "\n";
  m += material;
  return sha256_hex(m);
}

std::string Cache::path(const std::string& key) const {
  return (fs::path(dir_) / ("v" + std::to_string(format_version)) / key.substr(0, 2) / (key + ".json")).string();
}

std::optional<std::string> Cache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void Cache::put(const std::string& key, const std::string& content) const {
  if (enabled()) write_atomic(path(key), content);
}

} // namespace pchain::io
