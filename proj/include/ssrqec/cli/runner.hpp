#pragma once

// Experiment dispatch and output writing. An experiment produces all of its
// files in memory; nothing touches the output directory unless the whole
// run succeeds.

#include "ssrqec/cli/params.hpp"
#include "ssrqec/klcore.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ssrqec::cli {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitInvariant = 4;

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<OutputFile> files;
  json results = json::object();
  std::vector<std::string> assumptions;
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(int v) { return add(static_cast<long long>(v)); }
  CsvTable& add(std::uint64_t v);
  CsvTable& add(bool v);
  CsvTable& add(const std::string& v);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
  std::size_t in_row_ = 0;
};

json kl_report_to_json(const KLReport& report, std::size_t max_listed = 100);

/// Runs a validated config. Throws the module exceptions unchanged.
RunOutput execute(const ResolvedConfig& config);

std::string sha256_hex(std::string_view data);

/// Validates, executes and writes outputs plus run_report.json. Structured
/// errors go to err as JSON; returns one of the kExit codes.
int run_config(const json& config, std::ostream& out, std::ostream& err);

/// Writes the diagnostics as a JSON array and returns the exit code they imply.
int report_validation(const json& config, std::ostream& out);

}  // namespace ssrqec::cli
