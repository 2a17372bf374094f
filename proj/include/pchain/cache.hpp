#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pchain::io {

std::string sha256_hex(std::string_view data);

// Writes to a temporary file in the same directory, then renames over path.
void write_atomic(const std::string& path, const std::string& content);

// Content-addressed store of finished results under <dir>/v<format>/. An
// empty directory disables it.
class Cache {
public:
  static constexpr int format_version = 1;

  Cache() = default;
  explicit Cache(std::string dir) : dir_(std::move(dir)) {}
  // PCHAIN_CACHE wins over the flag value.
  static Cache from_environment(const std::string& flag_dir);

  bool enabled() const { return !dir_.empty(); }
  const std::string& dir() const { return dir_; }
  // hash of the format version and the given key material
  static std::string key(std::string_view material);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& content) const;

private:
  std::string dir_;
  std::string path(const std::string& key) const;
};

} // namespace pchain::io
