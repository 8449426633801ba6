#pragma once

#include <map>
#include <string>

namespace ductflight {

// Flat key = value configuration. Keys use dotted prefixes to group related
// settings (e.g. "field.regime", "train.epochs"). A Config is created with
// the full set of known keys and their defaults; loading a file that names an
// unknown key is an error, which catches typos early instead of silently
// running with a default.
//
// File syntax: one "key = value" per line, '#' starts a comment, blank lines
// ignored.
class Config {
 public:
  void define(const std::string& key, double default_value);
  void define(const std::string& key, const std::string& default_value);

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string text(const std::string& key) const;

  // Renders every key with its current value, sorted, in loadable syntax.
  std::string print() const;

 private:
  struct Entry {
    bool numeric = true;
    double num = 0.0;
    std::string str;
  };
  const Entry& lookup(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

}  // namespace ductflight
