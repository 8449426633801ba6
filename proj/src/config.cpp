#include "ductflight/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ductflight/ioutil.hpp"

namespace ductflight {

void Config::define(const std::string& key, double default_value) {
  Entry e;
  e.numeric = true;
  e.num = default_value;
  entries_[key] = e;
}

void Config::define(const std::string& key, const std::string& default_value) {
  Entry e;
  e.numeric = false;
  e.str = default_value;
  entries_[key] = e;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::invalid_argument("unknown config key: " + key);
  if (it->second.numeric) {
    it->second.num = parse_double(value);
  } else {
    it->second.str = value;
  }
}

const Config::Entry& Config::lookup(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::invalid_argument("unknown config key: " + key);
  return it->second;
}

double Config::number(const std::string& key) const {
  const Entry& e = lookup(key);
  if (!e.numeric) throw std::invalid_argument("config key is not numeric: " + key);
  return e.num;
}

int Config::integer(const std::string& key) const {
  double v = number(key);
  double r = std::round(v);
  if (std::abs(v - r) > 1e-9) throw std::invalid_argument("config key is not an integer: " + key);
  return static_cast<int>(r);
}

std::string Config::text(const std::string& key) const {
  const Entry& e = lookup(key);
  if (e.numeric) throw std::invalid_argument("config key is not text: " + key);
  return e.str;
}

std::string Config::print() const {
  std::ostringstream out;
  for (const auto& [key, e] : entries_) {
    out << key << " = ";
    if (e.numeric) {
      out << fmt_double(e.num);
    } else {
      out << e.str;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ductflight
