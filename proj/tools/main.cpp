#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"

#ifndef SYMDYN_VERSION
#define SYMDYN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace symdyn;
using namespace symdyn::cli;

namespace {

constexpr int kOk = 0;
constexpr int kConfigInvalid = 1;
constexpr int kInternal = 2;

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

// Parses and validates; prints diagnostics. Returns the config when there are no errors.
std::optional<json> load(const std::string& path, std::optional<std::size_t> guard) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::vector<Diagnostic> diags;
  auto cfg = parse_config(*text, diags);
  if (cfg) diags = validate_config(*cfg, guard);
  bool errors = false;
  for (const auto& d : diags) {
    std::cerr << path << ": " << format_diagnostic(d) << "\n";
    errors = errors || d.error;
  }
  if (errors) return std::nullopt;
  return cfg;
}

bool wants(const json& cfg, const char* format) {
  if (!cfg.contains("output") || !cfg.at("output").contains("formats")) return true;
  for (const auto& f : cfg.at("output").at("formats"))
    if (f == format) return true;
  return false;
}

int run(const std::string& path, std::string out_dir, std::size_t threads, std::optional<std::size_t> guard) {
  auto cfg = load(path, guard);
  if (!cfg) return kConfigInvalid;
  const auto t0 = std::chrono::steady_clock::now();
  set_thread_count(threads);
  if (out_dir.empty()) out_dir = cfg->contains("output") ? cfg->at("output").value("dir", "out") : "out";
  fs::create_directories(out_dir);

  Context ctx;
  ctx.config = *cfg;
  ctx.options.depth_guard = guard;
  ctx.oracle = build_shift(cfg->at("shift"), ctx.options);
  ctx.phi = cfg->contains("potential") ? build_potential(cfg->at("potential"), *ctx.oracle) : Potential::zero(ctx.oracle->k());

  json report;
  report["tool"] = {{"name", "symdyn"}, {"version", SYMDYN_VERSION}};
  report["config_hash"] = fnv1a(cfg->dump());
  report["config"] = *cfg;
  report["shift"] = {{"family", ctx.oracle->family()},
                     {"exact", ctx.oracle->exact()},
                     {"depth_guard", ctx.oracle->enumeration_limit()},
                     {"notes", ctx.oracle->notes()}};
  json blocks = json::array();
  const auto& analyses = cfg->at("analyses");
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    const json& req = analyses[i];
    char num[8];
    std::snprintf(num, sizeof num, "%02zu", i + 1);
    const std::string stem = std::string(num) + "_" + req.value("name", req.at("type").get<std::string>());
    json block{{"index", i + 1}, {"type", req.at("type")}};
    if (req.contains("name")) block["name"] = req.at("name");
    Files files;
    try {
      block["result"] = run_analysis(req, ctx, stem, files);
      block["status"] = "ok";
    } catch (const Error& e) {
      block["status"] = "error";
      block["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
      files.clear();
    } catch (const std::exception& e) {
      block["status"] = "error";
      block["error"] = {{"kind", "internal"}, {"message", e.what()}};
      files.clear();
    }
    json written = json::array();
    for (const auto& [name, text] : files) {
      std::string ext = fs::path(name).extension().string();
      bool keep = ext == ".csv" ? wants(*cfg, "csv") : ext == ".dat" ? wants(*cfg, "dat") : true;
      if (!keep) continue;
      write_file(fs::path(out_dir) / name, text);
      written.push_back(name);
    }
    block["files"] = written;
    std::cerr << "[" << (i + 1) << "/" << analyses.size() << "] " << stem << ": " << block["status"].get<std::string>()
              << "\n";
    blocks.push_back(block);
  }
  report["analyses"] = blocks;
  if (wants(*cfg, "json")) write_file(fs::path(out_dir) / "report.json", dump_json(report));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(fs::path(out_dir) / "run_info.json",
             dump_json({{"wall_time_seconds", wall}, {"threads", threads}, {"config_hash", report["config_hash"]}}));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: finite-scale symbolic dynamics and thermodynamic formalism"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::size_t threads = 1;
  std::optional<std::size_t> guard;

  auto* run_cmd = app.add_subcommand("run", "run the analyses of a config");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run_cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--depth-guard", guard, "largest enumeration length");

  auto* validate_cmd = app.add_subcommand("validate", "check a config without computing");
  validate_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  validate_cmd->add_option("--depth-guard", guard, "largest enumeration length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigInvalid;
  }
  try {
    if (*validate_cmd) {
      bool ok = load(config_path, guard).has_value();
      if (ok) std::cout << config_path << ": ok\n";
      return ok ? kOk : kConfigInvalid;
    }
    return run(config_path, out_dir, threads, guard);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
