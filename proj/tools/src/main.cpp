#include "lms_cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace lms::cli;
  CLI::App app{"Latent metric space experiments: simulate, embed, select dimension, TDA, geodesics, prediction."};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string out, target;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config,-c", config_path, "YAML run configuration (or a run manifest)");
    if (config_required) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out, "output directory (overrides 'out')");
    sub->add_option("--seed", seed, "master seed (overrides 'seed')");
    sub->add_option("--threads", threads, "worker threads (overrides 'threads' and LMS_THREADS)")->check(CLI::PositiveNumber);
  };

  std::vector<CLI::App*> kinds;
  for (const auto& kind : kKinds) {
    if (kind == "reproduce" || kind == "ingest") continue;
    auto* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    add_common(sub, true);
    kinds.push_back(sub);
  }
  auto* rep = app.add_subcommand("reproduce", "regenerate a figure's data at desk scale");
  add_common(rep, false);
  rep->add_option("--target,-t", target, "fig4 | fig5 | fig7 | fig8 | fig9 | fig10 | fig11 | fig12 | fig12c");
  kinds.push_back(rep);

  std::string input;
  auto* ingest = app.add_subcommand("ingest", "validate a numeric CSV and write it as Y.csv");
  add_common(ingest, false);
  ingest->add_option("input", input, "CSV file (alternative to a config with 'data')");
  kinds.push_back(ingest);

  auto* runner = app.add_subcommand("run", "run the experiment named by the config's 'kind'");
  add_common(runner, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  CLI::App* active = app.get_subcommands().front();
  if (active != runner) ov.kind = active->get_name();
  if (active->count("--out")) ov.out = out;
  if (active->count("--seed")) ov.seed = seed;
  if (active->count("--threads")) ov.threads = threads;
  if (!target.empty()) ov.target = target;

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path, ov);
    } else {
      YAML::Node doc(YAML::NodeType::Map);
      if (!input.empty()) doc["data"] = input;
      cfg = parse_config(doc, ov, std::filesystem::current_path());
    }
    if (!input.empty() && cfg.kind == "ingest") cfg.data = std::filesystem::absolute(input);
    return run(cfg, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lms::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const YAML::Exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
