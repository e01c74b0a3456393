// Copyright 2026 The qstance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qstance: command-line entry point. Every subcommand reads the outputs of
// earlier stages from the output directory and writes its own; the stage
// summary is printed to stdout as JSON, errors to stderr as JSON.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qstance/cli/config.h"
#include "qstance/cli/stages.h"
#include "qstance/util/errors.h"
#include "qstance/util/logging.h"

namespace {

using qstance::Json;
using qstance::cli::ConfigKeys;
using qstance::cli::ConfigValues;
using qstance::cli::PipelineConfig;

std::string FlagName(std::string_view key) {
  std::string name(key);
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

bool IsBoolKey(std::string_view default_value) {
  return default_value == "false" || default_value == "true";
}

int ReportError(const std::string &command, const std::string &kind, int exit_code,
                const std::string &message) {
  const Json summary{{"status", "error"},
                     {"kind", kind},
                     {"exit_code", exit_code},
                     {"message", message},
                     {"command", command}};
  std::cerr << summary.dump() << std::endl;
  return exit_code;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"French interrogative-stance news toolkit", "qstance"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::vector<std::string> overrides;
  bool verbose = false, quiet = false;
  app.add_option("--config", config_file, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override a configuration key (KEY=VALUE)")
      ->type_name("KEY=VALUE");
  app.add_flag("-v,--verbose", verbose, "log progress");
  app.add_flag("-q,--quiet", quiet, "only log errors");

  // One flag per configuration key; values given on the command line win
  // over the environment, which wins over the config file.
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> flag_bools;
  auto *keys_group = app.add_option_group("Configuration");
  for (const auto &key : ConfigKeys()) {
    const std::string name(key.name);
    std::string help(key.help);
    if (!key.default_value.empty()) help += " [" + std::string(key.default_value) + "]";
    if (IsBoolKey(key.default_value)) {
      keys_group->add_flag(FlagName(name), flag_bools[name], help);
    } else {
      keys_group->add_option(FlagName(name), flag_values[name], help)
          ->type_name("VALUE")
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  const std::vector<std::pair<std::string, std::string>> stage_commands = {
      {"ingest", "validate articles and split them into sentences"},
      {"candidates", "flag candidate interrogative sentences"},
      {"pseudo-label", "label candidates with the teacher"},
      {"export-train", "write the student training set"},
      {"infer", "two-step student inference over every sentence"},
      {"answers", "search answer spans for each question"},
      {"entities", "named entities in questions and answers"},
      {"indices", "per-article question indices"},
      {"sample", "draw the annotation sample"},
      {"eval", "evaluate predictions and annotator agreement against gold units"},
      {"pipeline", "run every stage in order"},
  };
  std::map<std::string, CLI::App *> subcommands;
  for (const auto &[name, help] : stage_commands) subcommands[name] = app.add_subcommand(name, help);

  qstance::cli::ReportOptions report_options;
  auto *report = app.add_subcommand("report", "write report tables");
  report->add_option("--table", report_options.table, "print a single table to stdout")
      ->check(CLI::IsMember(qstance::cli::ReportTableNames()));
  report->add_option("--dimension", report_options.dimension, "aggregate dimension")
      ->capture_default_str();
  report->add_option("--metric", report_options.metric, "aggregate metric")
      ->capture_default_str();
  report->add_option("--weighting", report_options.weighting, "article or pooled")
      ->check(CLI::IsMember({"article", "pooled"}))
      ->capture_default_str();
  subcommands["report"] = report;

  std::string sweep_kind;
  auto *sweep = app.add_subcommand("sweep", "threshold sweep table to stdout");
  sweep->add_option("--kind", sweep_kind, "confidence or similarity")
      ->required()
      ->check(CLI::IsMember({"confidence", "similarity"}));
  subcommands["sweep"] = sweep;

  std::string audited;
  auto *spot = app.add_subcommand("spot-check", "draw or summarize the answer spot-check");
  spot->add_option("--audited", audited, "summarize an audited manifest instead of sampling");
  subcommands["spot-check"] = spot;

  subcommands["serve"] = app.add_subcommand("serve", "run the annotation server");
  subcommands["config"] = app.add_subcommand("config", "print the resolved configuration");

  std::string command = "qstance";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return ReportError(command, "config", static_cast<int>(qstance::ExitCode::kConfig), e.what());
  }
  for (const auto &[name, sub] : subcommands) {
    if (sub->parsed()) command = name;
  }

  qstance::SetLogLevel(quiet     ? qstance::LogLevel::kError
                       : verbose ? qstance::LogLevel::kInfo
                                 : qstance::LogLevel::kWarning);
  try {
    ConfigValues values;
    if (!config_file.empty()) values.MergeFile(config_file);
    values.MergeEnvironment([](const char *name) { return std::getenv(name); });
    for (const auto &key : ConfigKeys()) {
      const std::string name(key.name);
      if (IsBoolKey(key.default_value)) {
        if (flag_bools[name]) values.Set(name, "true", "flag");
      } else if (app.get_option(FlagName(name))->count() > 0) {
        values.Set(name, flag_values[name], "flag");
      }
    }
    for (const auto &assignment : overrides) {
      const auto eq = assignment.find('=');
      if (eq == std::string::npos) {
        throw qstance::ConfigError("--set expects KEY=VALUE, got \"" + assignment + "\"");
      }
      values.Set(assignment.substr(0, eq), assignment.substr(eq + 1), "flag");
    }
    const PipelineConfig config = PipelineConfig::Resolve(values);

    namespace cli = qstance::cli;
    Json summary;
    if (command == "config") {
      Json out = Json::object();
      for (const auto &key : ConfigKeys()) {
        const std::string name(key.name);
        out[name] = {{"value", values.Get(name)}, {"origin", values.Origin(name)}};
      }
      std::cout << out.dump(2) << std::endl;
      return 0;
    } else if (command == "ingest") {
      summary = cli::RunIngest(config);
    } else if (command == "candidates") {
      summary = cli::RunCandidates(config);
    } else if (command == "pseudo-label") {
      summary = cli::RunPseudoLabel(config);
    } else if (command == "export-train") {
      summary = cli::RunExportTrain(config);
    } else if (command == "infer") {
      summary = cli::RunInfer(config);
    } else if (command == "answers") {
      summary = cli::RunAnswers(config);
    } else if (command == "entities") {
      summary = cli::RunEntities(config);
    } else if (command == "indices") {
      summary = cli::RunIndices(config);
    } else if (command == "sample") {
      summary = cli::RunSample(config);
    } else if (command == "eval") {
      summary = cli::RunEval(config);
    } else if (command == "pipeline") {
      summary = cli::RunPipeline(config);
    } else if (command == "spot-check") {
      summary = cli::RunSpotCheck(config, audited);
    } else if (command == "sweep") {
      std::cout << cli::RunSweep(config, sweep_kind);
      return 0;
    } else if (command == "report") {
      const auto result = cli::RunReport(config, report_options);
      if (!report_options.table.empty()) {
        std::cout << result.csv;
        return 0;
      }
      summary = result.summary;
    } else if (command == "serve") {
      cli::RunServe(config);
      return 0;
    }
    summary["status"] = "ok";
    std::cout << summary.dump(2) << std::endl;
    return 0;
  } catch (const qstance::Error &e) {
    return ReportError(command, e.kind(), static_cast<int>(e.code()), e.what());
  } catch (const std::exception &e) {
    // Anything unexpected while reading stage files is treated as bad data.
    return ReportError(command, "data", static_cast<int>(qstance::ExitCode::kData), e.what());
  }
}
