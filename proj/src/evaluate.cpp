#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "discs/trainer.hpp"

namespace discs {

namespace {

int eval_thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  if (const char* env = std::getenv("DISCS_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) cap = std::min(cap, requested);
  }
  return cap;
}

std::string trajectory_name(int index) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "trajectories_%03d.csv", index);
  return buf;
}

}  // namespace

EvalSummary evaluate_checkpoint(const std::string& ckpt_path, int n_skills,
                                const std::string& out_dir) {
  auto ckpt = load_checkpoint(ckpt_path);
  auto cfg = RunConfig::parse(ckpt.config_text);
  if (n_skills <= 0) n_skills = cfg.eval_skills;
  const auto mode = method_from_string(cfg.method);
  const int cond_dim = mode == MethodMode::Diayn ? cfg.diayn_skills : cfg.m;

  // Rebuild the policy alone; evaluation needs nothing else.
  std::vector<int> sizes;
  sizes.push_back(PointMassEnv::kStateDim + cond_dim);
  for (int h : cfg.policy_hidden) sizes.push_back(h);
  sizes.push_back(2 * 2);
  Rng init_rng(0);
  auto policy = Mlp<float>::create(std::move(sizes), init_rng);
  for (int l = 0; l < policy.layer_count(); ++l) {
    policy.weights[l] = ckpt.require("policy/w" + std::to_string(l)).data;
    policy.biases[l] = ckpt.require("policy/b" + std::to_string(l)).data;
  }

  // Skill list: fixed derivation from the run seed, so re-evaluation of the
  // same checkpoint is byte-identical.
  std::vector<std::vector<float>> skills(n_skills, std::vector<float>(cond_dim, 0.0f));
  Rng skill_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < n_skills; ++i) {
    if (mode == MethodMode::Diayn) {
      skills[i][i % cfg.diayn_skills] = 1.0f;  // each skill executed repeatedly
    } else {
      auto w = sample_uniform_sphere(cfg.m, skill_rng);
      for (int d = 0; d < cfg.m; ++d) skills[i][d] = static_cast<float>(w.v[d]);
    }
  }

  std::vector<std::vector<double>> trajectories(n_skills);
  const int n_threads = std::min(eval_thread_cap(), std::max(1, n_skills));
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  for (int w = 0; w < n_threads; ++w) {
    workers.emplace_back([&]() {
      PointMassEnv env(arena_kind_from_string(cfg.env), [&] {
        EnvParams p;
        p.arena_half = cfg.arena_half;
        p.dt = cfg.env_dt;
        p.f_max = cfg.env_f_max;
        p.drag = cfg.env_drag;
        p.v_max = cfg.env_v_max;
        p.episode_length = cfg.episode_length;
        return p;
      }());
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_skills) break;
        trajectories[i] = rollout_deterministic(policy, env, skills[i], cfg.episode_length);
      }
    });
  }
  for (auto& t : workers) t.join();

  std::filesystem::create_directories(out_dir);
  OccupancyGrid grid(cfg.cell_size, cfg.arena_half);
  for (int i = 0; i < n_skills; ++i) {
    grid.add_trajectory(trajectories[i]);
    write_trajectory_csv(trajectories[i],
                         (std::filesystem::path(out_dir) / trajectory_name(i)).string());
  }
  write_heatmap_csv(grid, (std::filesystem::path(out_dir) / "heatmap_eval.csv").string());

  EvalSummary summary;
  summary.n_rollouts = n_skills;
  summary.occupied_cells = grid.occupied_cells();
  {
    std::ofstream f((std::filesystem::path(out_dir) / "eval_summary.csv").string(),
                    std::ios::binary);
    if (!f) throw std::runtime_error("cannot write eval summary in " + out_dir);
    f << "n_rollouts,occupied_cells,grid_cells\n"
      << summary.n_rollouts << ',' << summary.occupied_cells << ','
      << grid.side() * grid.side() << '\n';
  }
  return summary;
}

}  // namespace discs
