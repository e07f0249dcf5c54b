#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace shiftdim {

/// Flat `key = value` configuration. '#' starts a comment line. Unknown keys,
/// duplicate keys and malformed values are errors.
class Config {
public:
  static Config parse(std::istream& in, const std::string& origin = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Applies a `key=value` override (validated like a file entry).
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long> integers(const std::string& key, const std::vector<long>& fallback) const;
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

  static const std::vector<std::string>& known_keys();

private:
  std::map<std::string, std::string> values_;
};

}  // namespace shiftdim
