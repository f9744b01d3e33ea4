#include "naghdi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace naghdi {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return hex64(h);
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  size_t pos = 0;
  double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::runtime_error("config key '" + key + "': not a number: " + it->second);
  return v;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  return static_cast<int>(get_long(key, fallback));
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  size_t pos = 0;
  long v = std::stol(it->second, &pos);
  if (pos != it->second.size())
    throw std::runtime_error("config key '" + key + "': not an integer: " + it->second);
  return v;
}

void RunConfig::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, value] : kv)
    if (!known.count(key)) throw std::runtime_error("unknown config key: " + key);
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& provenance,
                     const std::vector<std::string>& columns)
    : n_cols_(columns.size()) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  out_ = f;
  for (const auto& line : provenance) std::fprintf(f, "# %s\n", line.c_str());
  for (size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f, "%s%s", columns[i].c_str(), i + 1 == columns.size() ? "\n" : ",");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw std::invalid_argument("csv row width mismatch");
  std::FILE* f = static_cast<std::FILE*>(out_);
  for (size_t i = 0; i < values.size(); ++i)
    std::fprintf(f, "%.17g%s", values[i], i + 1 == values.size() ? "\n" : ",");
}

CsvWriter::~CsvWriter() {
  if (out_) std::fclose(static_cast<std::FILE*>(out_));
}

}  // namespace naghdi
