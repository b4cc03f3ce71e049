#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symdyn/oracle.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/word_set.hpp"

namespace symdyn::cli {

using json = nlohmann::json;

struct Diagnostic {
  bool error = true;  // false: warning
  std::string field;  // e.g. "analyses[2].n_max", or "line 4, column 7"
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

// Syntax errors become a single diagnostic carrying the line and column.
std::optional<json> parse_config(const std::string& text, std::vector<Diagnostic>& diags);
// Schema and guard-limit checks. Builds the shift to resolve alphabets and guards.
std::vector<Diagnostic> validate_config(const json& cfg, std::optional<std::size_t> depth_guard);

OraclePtr build_shift(const json& spec, const OracleOptions& options);
Potential build_potential(const json& spec, const LanguageOracle& oracle);

struct Context {
  json config;
  OraclePtr oracle;
  Potential phi;
  OracleOptions options;
};

// Named output files (CSV, .dat) produced by one analysis.
using Files = std::map<std::string, std::string>;

WordSet build_set(const json& spec, const Context& ctx);
json run_analysis(const json& request, const Context& ctx, const std::string& stem, Files& files);

// JSON with every double printed to 17 significant digits; non-finite values as strings.
std::string dump_json(const json& j);
std::string fmt_double(double x);

}  // namespace symdyn::cli
