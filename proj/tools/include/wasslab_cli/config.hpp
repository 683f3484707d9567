#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wasslab::cli {

// Bad key, value or cross-field constraint. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat dotted key = value settings over a table of known keys with
/// defaults. Unknown keys are rejected.
class Config {
 public:
  /// Built-in defaults only.
  Config();

  /// Merge `key = value` lines; '#' starts a comment.
  void parse(std::istream& in, const std::string& origin);
  void load_file(const std::string& path);
  /// Single "key=value" override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool user_set(const std::string& key) const { return user_keys_.count(key) > 0; }

  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  double positive(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::uint64_t seed() const;
  std::vector<std::string> list(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// Every known key with its current value, sorted.
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::map<std::string, std::string>& defaults();

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> user_keys_;
};

}  // namespace wasslab::cli
