// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

// Command-line front end. Everything of substance lives behind the C API in
// libtrajkit; this binary only maps flags onto config overrides and status
// codes onto exit codes (0 ok, 1 usage, 2 missing input, 3 validation,
// 4 internal).

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajkit.h"

namespace {

struct EngineDeleter {
  void operator()(tk_engine* engine) const { tk_engine_free(engine); }
};
using EnginePtr = std::unique_ptr<tk_engine, EngineDeleter>;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;  // key=value overrides
  std::string seed, threads, format, out_dir;
  std::string tracks, manifest, floorplan, features;
  bool print_config = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--set", opts.sets,
                  "override a config field, e.g. --set movement.split_deg=25");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--threads", opts.threads, "thread cap (0 = all cores)");
  cmd->add_option("--format", opts.format, "output format: csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--tracks", opts.tracks, "tracks file (jsonl or csv)");
  cmd->add_option("--manifest", opts.manifest, "session manifest file");
  cmd->add_option("--floorplan", opts.floorplan,
                  "floor plan file (omit for the built-in default)");
  cmd->add_option("--features", opts.features,
                  "precomputed feature table (features.json)");
  cmd->add_flag("--print-config", opts.print_config,
                "print the effective config before running");
}

int fail(tk_engine* engine, tk_status status, const char* stage) {
  std::fprintf(stderr, "trajkit: %s: %s\n", stage, tk_engine_error(engine));
  return static_cast<int>(status);
}

int run_command(const std::string& command, const CommonOptions& opts) {
  EnginePtr engine(tk_engine_new());
  if (!engine) {
    std::fprintf(stderr, "trajkit: out of memory\n");
    return static_cast<int>(TK_ERR_INTERNAL);
  }

  if (!opts.config_path.empty()) {
    const tk_status status =
        tk_engine_load_config(engine.get(), opts.config_path.c_str());
    if (status != TK_OK) return fail(engine.get(), status, "config");
  }
  if (const tk_status status = tk_engine_apply_env(engine.get()); status != TK_OK) {
    return fail(engine.get(), status, "environment");
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const std::string& kv : opts.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "trajkit: --set expects key=value, got '%s'\n",
                   kv.c_str());
      return static_cast<int>(TK_ERR_USAGE);
    }
    overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  const std::pair<const char*, const std::string*> flags[] = {
      {"seed", &opts.seed},           {"threads", &opts.threads},
      {"format", &opts.format},       {"paths.out_dir", &opts.out_dir},
      {"paths.tracks", &opts.tracks}, {"paths.manifest", &opts.manifest},
      {"paths.floorplan", &opts.floorplan},
      {"paths.features", &opts.features}};
  for (const auto& [key, value] : flags) {
    if (!value->empty()) overrides.emplace_back(key, *value);
  }
  for (const auto& [key, value] : overrides) {
    const tk_status status =
        tk_engine_set(engine.get(), key.c_str(), value.c_str());
    if (status != TK_OK) return fail(engine.get(), status, "config override");
  }

  if (opts.print_config) {
    std::printf("%s\n", tk_engine_config_json(engine.get()));
  }

  const tk_status status = tk_engine_run(engine.get(), command.c_str());
  if (status != TK_OK) return fail(engine.get(), status, command.c_str());
  std::printf("trajkit %s: ok (config %s)\n", command.c_str(),
              tk_engine_config_hash(engine.get()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajkit - indoor trajectory and social-interaction analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tk_version());

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"simulate", "generate a synthetic study (tracks, manifest, floor plan)"},
      {"features", "extract the per-session feature table"},
      {"stats", "rank-sum screen of the raw feature distributions"},
      {"classify", "leave-one-out classification reports per model"},
      {"importance", "permutation feature importance per feature set"},
      {"report", "features + stats + classify + importance in one pass"},
  };

  std::vector<std::pair<std::string, CommonOptions>> invocations;
  invocations.reserve(6);
  for (const auto& command : commands) {
    invocations.emplace_back(command.name, CommonOptions{});
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    add_common_flags(sub, invocations.back().second);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, opts] : invocations) {
    if (app.get_subcommand(name)->parsed()) {
      return run_command(name, opts);
    }
  }
  std::fprintf(stderr, "trajkit: no command given\n");
  return static_cast<int>(TK_ERR_USAGE);
}
