// vbmot: simulate, track, evaluate and demo front end.

#include "CLI11.hpp"
#include "vbmot/cli.hpp"
#include "vbmot/config.hpp"
#include "vbmot/errors.hpp"
#include "vbmot/simulator.hpp"

#include <iostream>
#include <optional>

namespace {

struct Common {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
  std::vector<std::string> sets;
  std::string report_format = "text";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "key=value config file")->check(CLI::ExistingFile);
  app->add_option("--preset", c.preset, "scenario preset")->check(CLI::IsMember(vbmot::scenario_preset_names()));
  app->add_option("--seed", c.seed, "simulator seed (sim.seed)");
  app->add_option("--max-iters", c.max_iters, "VEM iteration cap (vem.max_iterations)")->check(CLI::PositiveNumber);
  app->add_option("--set", c.sets, "override a config key, key=value (repeatable)");
  app->add_option("--report-format", c.report_format, "evaluation report format")
      ->check(CLI::IsMember({"text", "structured"}));
}

vbmot::Config resolve(const Common& c) {
  vbmot::Config cfg = c.preset.empty() ? vbmot::Config{} : vbmot::preset_config(c.preset);
  if (!c.config_path.empty()) cfg = vbmot::load_config(c.config_path, cfg);
  for (const std::string& s : c.sets) cfg.apply(s);
  if (c.seed) cfg.sim.seed = *c.seed;
  if (c.max_iters) cfg.vem.max_iterations = *c.max_iters;
  return cfg;
}

vbmot::ReportFormat format_of(const Common& c) {
  return c.report_format == "structured" ? vbmot::ReportFormat::structured : vbmot::ReportFormat::text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-line variational multi-object tracker"};
  app.require_subcommand(1);

  Common common;
  std::string out_dir, detections, tracks_out, truth, tracks_in, report_out;
  bool quiet = false;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic scene");
  add_common(sim, common);
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* track = app.add_subcommand("track", "run the tracker on a detection file");
  add_common(track, common);
  track->add_option("--detections", detections, "detection file")->required()->check(CLI::ExistingFile);
  track->add_option("--out", tracks_out, "track file to write")->required();
  track->add_flag("--quiet", quiet, "suppress the per-frame progress log");

  auto* eval = app.add_subcommand("eval", "score a track file against ground truth");
  add_common(eval, common);
  eval->add_option("--truth", truth, "ground-truth file")->required()->check(CLI::ExistingFile);
  eval->add_option("--tracks", tracks_in, "track file")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", report_out, "report file (stdout when omitted)");

  auto* demo = app.add_subcommand("demo", "simulate, track and evaluate a preset");
  add_common(demo, common);
  demo->add_option("--out", out_dir, "output directory")->required();

  auto* config = app.add_subcommand("config", "print the resolved configuration");
  add_common(config, common);

  CLI11_PARSE(app, argc, argv);

  try {
    const vbmot::Config cfg = resolve(common);
    if (*sim) {
      vbmot::cmd_simulate(cfg, out_dir, std::cerr);
    } else if (*track) {
      vbmot::cmd_track(detections, cfg, tracks_out, std::cerr, !quiet);
    } else if (*eval) {
      vbmot::cmd_eval(truth, tracks_in, cfg, report_out, format_of(common), report_out.empty() ? std::cout : std::cerr);
    } else if (*demo) {
      if (common.preset.empty()) throw vbmot::ConfigError("demo requires --preset");
      vbmot::cmd_demo(cfg, out_dir, format_of(common), std::cout);
    } else if (*config) {
      std::cout << cfg.to_text();
    }
  } catch (const std::exception& e) {
    std::cerr << "vbmot: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
