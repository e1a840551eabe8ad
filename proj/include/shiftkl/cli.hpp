#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace shiftkl::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat key=value configuration; '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& assignment);  // "key=value"
  // Throws InputError naming the first key outside `allowed`.
  void restrict_to(const std::set<std::string>& allowed, const std::string& command) const;

  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::optional<double> maybe_number(const std::string& key) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> numbers(const std::string& key) const;  // comma separated
  bool flag_or(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  std::string hash_hex(const std::string& command) const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 14695981039346656037ULL);
std::string hex64(std::uint64_t v);
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(long v);
  CsvTable& add(const std::string& v);

  std::size_t rows() const { return rows_.size(); }
  // Header, rows and the trailing metadata comment.
  void write(std::ostream& os, const std::string& config_hash) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CommandContext {
  std::string command;
  Config config;
  std::optional<std::string> out_path;
  std::vector<std::string> positional;
  std::ostream* out = nullptr;
};

// Each returns the process exit code; validation problems surface as exceptions.
int cmd_bound(CommandContext& ctx);
int cmd_shifts(CommandContext& ctx);
int cmd_plan(CommandContext& ctx);
int cmd_sample(CommandContext& ctx);
int cmd_local_errors(CommandContext& ctx);
int cmd_verify(CommandContext& ctx);

// Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shiftkl::cli
