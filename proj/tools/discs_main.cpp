// Command-line front end. Links only the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "discs/discs_capi.h"

namespace {

int fail(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, discs_last_error());
  return 1;
}

int run_train(const std::string& config_path, long long seed, bool seed_set,
              const std::string& out_dir, const std::string& resume_path,
              long long steps_override) {
  discs_trainer* trainer = nullptr;
  if (!resume_path.empty()) {
    if (discs_trainer_resume(resume_path.c_str(), out_dir.c_str(), &trainer) != DISCS_OK) {
      return fail("resume");
    }
  } else {
    discs_config* cfg = nullptr;
    if (discs_config_create(&cfg) != DISCS_OK) return fail("config");
    if (!config_path.empty() &&
        discs_config_load_file(cfg, config_path.c_str()) != DISCS_OK) {
      discs_config_destroy(cfg);
      return fail("config");
    }
    if (seed_set &&
        discs_config_set(cfg, "seed", std::to_string(seed).c_str()) != DISCS_OK) {
      discs_config_destroy(cfg);
      return fail("config");
    }
    const discs_status rc = discs_trainer_create(cfg, out_dir.c_str(), &trainer);
    discs_config_destroy(cfg);
    if (rc != DISCS_OK) return fail("trainer");
  }

  if (steps_override >= 0 &&
      discs_trainer_set_total_steps(trainer, steps_override) != DISCS_OK) {
    discs_trainer_destroy(trainer);
    return fail("steps");
  }

  const discs_status rc = discs_trainer_run(trainer);
  if (rc == DISCS_OK) {
    std::printf("trained to step %lld; artifacts in %s\n",
                static_cast<long long>(discs_trainer_step(trainer)), out_dir.c_str());
  }
  discs_trainer_destroy(trainer);
  return rc == DISCS_OK ? 0 : fail("train");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous skill discovery laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "run", ckpt_path, resume_path;
  long long seed = 0, steps_override = -1;
  int n_skills = 0;

  auto* train = app.add_subcommand("train", "Train from a config file");
  train->add_option("--config", config_path, "Config file (key = value lines)");
  auto* seed_opt = train->add_option("--seed", seed, "Override the config seed");
  train->add_option("--out", out_dir, "Artifact directory (curves, heatmaps, checkpoints)");
  train->add_option("--resume", resume_path, "Resume from a checkpoint instead");
  train->add_option("--steps", steps_override, "Override total_steps");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint with deterministic rollouts");
  eval->add_option("--ckpt", ckpt_path, "Checkpoint file")->required();
  eval->add_option("--skills", n_skills, "Number of rollouts (0 = config default)");
  eval->add_option("--out", out_dir, "Artifact directory");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in property suites");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    return run_train(config_path, seed, !seed_opt->empty(), out_dir, resume_path,
                     steps_override);
  }
  if (eval->parsed()) {
    int occupied = 0;
    if (discs_evaluate(ckpt_path.c_str(), n_skills, out_dir.c_str(), &occupied) != DISCS_OK) {
      return fail("eval");
    }
    std::printf("evaluated %s: occupied_cells=%d; artifacts in %s\n", ckpt_path.c_str(),
                occupied, out_dir.c_str());
    return 0;
  }
  if (selftest->parsed()) {
    return discs_selftest() == DISCS_OK ? 0 : 1;
  }
  return 0;
}
