#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace naghdi {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ull);
std::string hex64(std::uint64_t h);
std::string file_hash(const std::string& path);

// Plain key=value run configuration ('#' starts a comment). Unknown keys are
// rejected against a per-command schema.
struct RunConfig {
  std::map<std::string, std::string> kv;

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value) { kv[key] = value; }
  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  long get_long(const std::string& key, long fallback) const;

  void require_known(const std::set<std::string>& known) const;
  std::string canonical() const;  // sorted key=value lines
  std::string hash() const { return hex64(fnv1a(canonical().data(), canonical().size())); }
};

// CSV writer: provenance comment lines, a header row, then %.17g-formatted
// rows, so identical runs produce identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& provenance,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  ~CsvWriter();

 private:
  void* out_;
  std::size_t n_cols_;
};

std::string format_double(double v);

}  // namespace naghdi
