// SPDX-License-Identifier: Apache-2.0
//
// ontaug: generate fixtures, run filter/augment/evaluate pipelines, serve the
// session API.
//
// Exit codes: 0 success, 2 config/usage, 3 environment, 4 data validation.

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ontaug/config.hpp"
#include "ontaug/error.hpp"
#include "ontaug/http_server.hpp"
#include "ontaug/pipeline.hpp"
#include "ontaug/session.hpp"
#include "ontaug/synthetic.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;
constexpr int kExitData = 4;

int exit_code_for(const ontaug::Error& e) {
  using ontaug::ErrorCode;
  switch (e.code()) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    case ErrorCode::kIoError:
      return kExitEnvironment;
    default:
      return kExitData;
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ontaug::Error(ontaug::ErrorCode::kInvalidConfig, "cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ontaug::Error(ontaug::ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ontaug::Error(ontaug::ErrorCode::kIoError, "cannot write " + path);
  out << text;
}

int cmd_generate(const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
  const auto config = ontaug::synth_config_from_json(read_json_file(config_path));
  const auto output = ontaug::generate_synthetic(config, seed);
  ontaug::write_data_dir(output, out_dir);
  // Validate by loading back what was written.
  const auto loaded = ontaug::load_data_dir(out_dir);
  std::cout << "wrote " << out_dir << ": " << output.edges.size() << " edges, " << loaded.dataset.visits.size()
            << " visits, " << loaded.graph.size() << " graph nodes\n";
  return 0;
}

struct RunArgs {
  std::string data;
  std::string filter;
  std::string augment;
  std::string task;
  std::string out;
  int folds = 3;
  std::uint64_t seed = 0;
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-3;
  std::vector<std::size_t> random_sizes;
  std::string export_dir;
};

int cmd_run(const RunArgs& args) {
  const auto data = ontaug::load_data_dir(args.data);
  ontaug::RunConfig config;
  config.filter = ontaug::filter_spec_from_json(read_json_file(args.filter));
  config.augments = ontaug::augments_from_json(read_json_file(args.augment), config.filter.selected_codes);
  config.task = ontaug::task_preset(args.task);
  config.folds = args.folds;
  config.seed = args.seed;
  config.logistic = {args.learning_rate, args.iterations, args.l2};
  config.random_sizes = args.random_sizes;

  const auto result = ontaug::run_pipeline(data, config);
  write_text(args.out, result.report.dump(2) + "\n");
  write_text(args.out + ".txt", result.table);
  std::cout << result.table;

  if (!args.export_dir.empty()) {
    for (std::size_t i = 0; i < result.augmented.size(); ++i) {
      const auto& r = result.augmented[i];
      const auto path = std::filesystem::path(args.export_dir) / ("augmented_" + std::to_string(i + 1) + ".jsonl");
      ontaug::export_cohort(ontaug::cohort_records(data.dataset, r.cohort_visit_ids), data.dataset.vocabulary,
                            ontaug::cohort_manifest(config.filter, &r), path);
    }
  }
  return 0;
}

ontaug::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& data_dir, const std::string& listen, std::size_t max_body) {
  ontaug::ListenAddress address;
  try {
    address = ontaug::parse_listen_address(listen);
  } catch (const ontaug::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnvironment;
  }
  ontaug::SessionService service({data_dir, {}});
  if (!data_dir.empty()) service.install(ontaug::load_data_dir(data_dir), data_dir);

  ontaug::HttpServer server(service, max_body);
  if (!server.bind(address)) {
    std::cerr << "error: cannot listen on " << listen << '\n';
    return kExitEnvironment;
  }
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "listening on " << address.host << ':' << server.port() << std::endl;
  server.serve();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-guided cohort augmentation"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Write a synthetic ontology + visit data directory");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  generate->add_option("--config", gen_config, "Synthetic generator config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--seed", gen_seed, "Generator seed")->required();
  generate->add_option("--out", gen_out, "Output directory")->required();

  auto* run = app.add_subcommand("run", "Filter, augment and evaluate; write a comparison report");
  RunArgs run_args;
  run->add_option("--data", run_args.data, "Data directory")->required()->check(CLI::ExistingDirectory);
  run->add_option("--filter", run_args.filter, "Filter spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--augment", run_args.augment, "Augment spec or array of specs (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--task", run_args.task, "Task: mortality, phenotyping, or a label key")->required();
  run->add_option("--out", run_args.out, "Report path (JSON); a .txt table is written alongside")->required();
  run->add_option("--folds", run_args.folds, "Cross-validation folds")->capture_default_str()->check(CLI::Range(2, 100));
  run->add_option("--seed", run_args.seed, "Seed for CV splits and random baselines")->capture_default_str();
  run->add_option("--learning-rate", run_args.learning_rate)->capture_default_str();
  run->add_option("--iterations", run_args.iterations)->capture_default_str();
  run->add_option("--l2", run_args.l2)->capture_default_str();
  run->add_option("--random-sizes", run_args.random_sizes, "Random baseline sizes (default: size-matched)")->delimiter(',');
  run->add_option("--export-dir", run_args.export_dir, "Also export each augmented cohort here");

  auto* serve = app.add_subcommand("serve", "Serve the session API");
  std::string serve_data, serve_listen = "127.0.0.1:8080";
  std::size_t max_body = 1 << 20;
  serve->add_option("--data", serve_data, "Data directory to preload")->check(CLI::ExistingDirectory);
  serve->add_option("--listen", serve_listen, "host:port")->capture_default_str();
  serve->add_option("--max-body", max_body, "Request body size limit in bytes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen_config, gen_seed, gen_out);
    if (*run) return cmd_run(run_args);
    if (*serve) return cmd_serve(serve_data, serve_listen, max_body);
  } catch (const ontaug::Error& e) {
    std::cerr << "error [" << ontaug::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnvironment;
  }
  return kExitUsage;
}
