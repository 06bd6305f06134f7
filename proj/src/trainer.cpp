#include "discs/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace discs {

namespace {

constexpr int kStateDim = PointMassEnv::kStateDim;
constexpr int kActionDim = 2;

EnvParams env_params_from(const RunConfig& cfg) {
  EnvParams p;
  p.arena_half = cfg.arena_half;
  p.dt = cfg.env_dt;
  p.f_max = cfg.env_f_max;
  p.drag = cfg.env_drag;
  p.v_max = cfg.env_v_max;
  p.episode_length = cfg.episode_length;
  return p;
}

std::string heatmap_name(std::int64_t index) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "heatmap_%04lld.csv", static_cast<long long>(index));
  return buf;
}

void append_adam_tensors(const AdamState<float>& adam, const Mlp<float>& net,
                         const std::string& prefix, std::vector<NamedTensor>& out) {
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const std::vector<std::int64_t> wshape = {net.layer_sizes[l], net.layer_sizes[l + 1]};
    const std::vector<std::int64_t> bshape = {net.layer_sizes[l + 1]};
    const auto ls = std::to_string(l);
    out.push_back({prefix + "/w" + ls + "_m", Tensor(wshape, adam.m_w[l])});
    out.push_back({prefix + "/w" + ls + "_v", Tensor(wshape, adam.v_w[l])});
    out.push_back({prefix + "/b" + ls + "_m", Tensor(bshape, adam.m_b[l])});
    out.push_back({prefix + "/b" + ls + "_v", Tensor(bshape, adam.v_b[l])});
  }
}

void load_mlp_tensors(Mlp<float>& net, const Checkpoint& ckpt, const std::string& prefix) {
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = ckpt.require(prefix + "/w" + std::to_string(l));
    const auto& b = ckpt.require(prefix + "/b" + std::to_string(l));
    if (w.data.size() != net.weights[l].size() || b.data.size() != net.biases[l].size()) {
      throw std::runtime_error("checkpoint tensor shape mismatch at " + prefix);
    }
    net.weights[l] = w.data;
    net.biases[l] = b.data;
  }
}

void load_adam_tensors(AdamState<float>& adam, const Checkpoint& ckpt,
                       const std::string& prefix) {
  for (std::size_t l = 0; l < adam.m_w.size(); ++l) {
    const auto ls = std::to_string(l);
    adam.m_w[l] = ckpt.require(prefix + "/w" + ls + "_m").data;
    adam.v_w[l] = ckpt.require(prefix + "/w" + ls + "_v").data;
    adam.m_b[l] = ckpt.require(prefix + "/b" + ls + "_m").data;
    adam.v_b[l] = ckpt.require(prefix + "/b" + ls + "_v").data;
  }
}

}  // namespace

Trainer::Trainer(RunConfig cfg)
    : cfg_(std::move(cfg)),
      mode_(method_from_string(cfg_.method)),
      rng_(cfg_.seed),
      env_(arena_kind_from_string(cfg_.env), env_params_from(cfg_)),
      buffer_(cfg_.buffer_capacity, kStateDim, kActionDim,
              mode_ == MethodMode::Diayn ? cfg_.diayn_skills : cfg_.m),
      grid_(cfg_.cell_size, cfg_.arena_half) {
  cfg_.validate();
  cond_dim_ = mode_ == MethodMode::Diayn ? cfg_.diayn_skills : cfg_.m;
  reward_m_ = mode_ == MethodMode::Diayn ? 1 : cfg_.m;
  feature_dim_ = cfg_.xy_prior ? 2 : kStateDim;
  scalars_.next_disc_update = cfg_.disc_warmup;
  current_skill_.assign(cond_dim_, 0.0f);
}

Trainer::Trainer(RunConfig cfg, std::string out_dir) : Trainer(std::move(cfg)) {
  init_networks();
  sample_episode_skill();
  open_artifacts(std::move(out_dir));
}

void Trainer::init_networks() {
  auto with_hidden = [](int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes;
    sizes.push_back(in);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(out);
    return sizes;
  };

  policy_ = Mlp<float>::create(
      with_hidden(kStateDim + cond_dim_, cfg_.policy_hidden, 2 * kActionDim), rng_);
  q1_ = Mlp<float>::create(
      with_hidden(kStateDim + kActionDim + cond_dim_, cfg_.q_hidden, reward_m_ + 1), rng_);
  q2_ = Mlp<float>::create(
      with_hidden(kStateDim + kActionDim + cond_dim_, cfg_.q_hidden, reward_m_ + 1), rng_);
  q1_target_ = q1_;
  q2_target_ = q2_;
  adam_policy_ = AdamState<float>::like(policy_, static_cast<float>(cfg_.lr));
  adam_q1_ = AdamState<float>::like(q1_, static_cast<float>(cfg_.lr));
  adam_q2_ = AdamState<float>::like(q2_, static_cast<float>(cfg_.lr));

  if (mode_ == MethodMode::Discs || mode_ == MethodMode::Visr) {
    vmf_disc_ = VmfDiscriminator<float>::create(feature_dim_, cfg_.disc_hidden, cfg_.m,
                                                mode_ == MethodMode::Visr, rng_);
    vmf_disc_->kappa_min = cfg_.kappa_min;
    vmf_disc_->kappa_max = cfg_.kappa_max;
    adam_disc_ = AdamState<float>::like(vmf_disc_->net, static_cast<float>(cfg_.lr));
  } else if (mode_ == MethodMode::Diayn) {
    cat_disc_ = CategoricalDiscriminator<float>::create(feature_dim_, cfg_.disc_hidden,
                                                        cfg_.diayn_skills, rng_);
    adam_disc_ = AdamState<float>::like(cat_disc_->net, static_cast<float>(cfg_.lr));
  }
}

void Trainer::open_artifacts(std::string out_dir) {
  out_dir_ = std::move(out_dir);
  if (out_dir_.empty()) return;
  std::filesystem::create_directories(out_dir_);
  const auto path = std::filesystem::path(out_dir_) / "curves.csv";
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  curves_.open(path, std::ios::binary | std::ios::app);
  if (!curves_) throw std::runtime_error("cannot open " + path.string());
  if (fresh) curves_ << curve_header() << std::flush;
}

void Trainer::sample_episode_skill() {
  if (mode_ == MethodMode::Diayn) {
    const int z = static_cast<int>(rng_.uniform_int(cfg_.diayn_skills));
    scalars_.current_z = z;
    std::fill(current_skill_.begin(), current_skill_.end(), 0.0f);
    current_skill_[z] = 1.0f;
  } else {
    auto w = sample_uniform_sphere(cfg_.m, rng_);
    for (int d = 0; d < cfg_.m; ++d) current_skill_[d] = static_cast<float>(w.v[d]);
    scalars_.current_z = -1;
  }
}

std::vector<float> Trainer::features_of_states(const std::vector<float>& states, int n) const {
  std::vector<float> feats(static_cast<std::size_t>(n) * feature_dim_);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < feature_dim_; ++d) {
      feats[static_cast<std::size_t>(i) * feature_dim_ + d] =
          states[static_cast<std::size_t>(i) * kStateDim + d];
    }
  }
  return feats;
}

void Trainer::fill_pref_ext(Batch<float>& batch) const {
  const int ext = reward_m_ + 1;
  batch.m = reward_m_;
  batch.pref_ext.assign(static_cast<std::size_t>(batch.n) * ext, 1.0f);
  if (mode_ == MethodMode::Diayn) return;  // (1, 1) rows
  for (int i = 0; i < batch.n; ++i) {
    for (int d = 0; d < reward_m_; ++d) {
      batch.pref_ext[static_cast<std::size_t>(i) * ext + 1 + d] =
          batch.skill[static_cast<std::size_t>(i) * cond_dim_ + d];
    }
  }
}

void Trainer::fill_rewards(Batch<float>& batch, const std::vector<double>& reward_vecs) const {
  const int ext = reward_m_ + 1;
  const int k = cfg_.hipps_k;
  batch.reward.assign(static_cast<std::size_t>(batch.n) * ext, 0.0f);
  if (mode_ == MethodMode::SacOnly) return;

  std::vector<double> row(ext);
  std::vector<double> pref(ext);
  for (int i = 0; i < batch.n; ++i) {
    const int source = mode_ == MethodMode::Discs ? i / k : i;
    for (int c = 0; c < ext; ++c) {
      row[c] = reward_vecs[static_cast<std::size_t>(source) * ext + c];
      pref[c] = batch.pref_ext[static_cast<std::size_t>(i) * ext + c];
    }
    apply_reward_floor(row, pref, cfg_.log_floor);
    for (int c = 0; c < ext; ++c) {
      batch.reward[static_cast<std::size_t>(i) * ext + c] = static_cast<float>(row[c]);
    }
  }
}

void Trainer::collect_steps(int n) {
  std::vector<float> obs(kStateDim + cond_dim_);
  std::vector<float> s_before(kStateDim);
  std::vector<float> s_after(kStateDim);
  for (int i = 0; i < n; ++i) {
    env_.state_vector(s_before.data());
    std::copy(s_before.begin(), s_before.end(), obs.begin());
    std::copy(current_skill_.begin(), current_skill_.end(), obs.begin() + kStateDim);
    auto raw = mlp_forward<float>(policy_, obs, 1);
    auto sg = squashed_gaussian_sample<float>(raw, 1, kActionDim, rng_);

    const std::int32_t t_before = static_cast<std::int32_t>(env_.episode_step());
    const bool done = env_.step(sg.action[0], sg.action[1]);
    env_.state_vector(s_after.data());
    // Fixed-length episodes end by timeout, which is not a true absorbing
    // state; bootstrap through it.
    buffer_.push(current_skill_, s_before, sg.action, s_after, t_before, false);
    grid_.add(env_.state().x, env_.state().y);
    scalars_.global_step += 1;

    if (done) {
      env_.reset();
      sample_episode_skill();
    }

    if (scalars_.global_step % cfg_.log_every == 0) write_curve_row();
    if (scalars_.global_step % cfg_.heatmap_window == 0) finish_heatmap_window();
    if (cfg_.checkpoint_every > 0 && scalars_.global_step % cfg_.checkpoint_every == 0 &&
        !out_dir_.empty()) {
      save((std::filesystem::path(out_dir_) /
            ("ckpt_" + std::to_string(scalars_.global_step) + ".bin")).string());
    }
  }
}

void Trainer::maybe_update_discriminator() {
  if (mode_ == MethodMode::SacOnly) return;
  while (scalars_.next_disc_update <= scalars_.global_step) {
    if (buffer_.size() == 0) break;
    const auto variant = disc_variant_from_string(cfg_.disc_variant);
    std::vector<std::int64_t> idx =
        variant == DiscVariant::Recent
            ? buffer_.sample_recent_indices(cfg_.disc_batch_size, cfg_.recent_window, rng_)
            : buffer_.sample_indices(cfg_.disc_batch_size, rng_);
    if (disc_index_hook) {
      std::vector<std::int64_t> ages(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) ages[i] = buffer_.age_of(idx[i]);
      disc_index_hook(idx, ages);
    }
    auto rows = buffer_.gather(idx);
    auto feats = features_of_states(rows.state, rows.n);

    if (mode_ == MethodMode::Diayn) {
      DiaynBatch<float> db;
      db.n = rows.n;
      db.feature_dim = feature_dim_;
      db.features = std::move(feats);
      db.z.resize(rows.n);
      for (int i = 0; i < rows.n; ++i) {
        const float* skill = &rows.skill[static_cast<std::size_t>(i) * cond_dim_];
        db.z[i] = static_cast<std::int32_t>(
            std::max_element(skill, skill + cond_dim_) - skill);
      }
      auto result = diayn_disc_loss_grads<float>(*cat_disc_, db);
      adam_step(cat_disc_->net, result.grads, *adam_disc_);
      scalars_.last_disc_loss = result.loss;
    } else {
      DiscBatch<float> db;
      db.n = rows.n;
      db.m = cfg_.m;
      db.feature_dim = feature_dim_;
      db.features = std::move(feats);
      db.t = rows.t;
      db.w.resize(static_cast<std::size_t>(rows.n) * cfg_.m);
      for (int i = 0; i < rows.n; ++i) {
        for (int d = 0; d < cfg_.m; ++d) {
          db.w[static_cast<std::size_t>(i) * cfg_.m + d] =
              rows.skill[static_cast<std::size_t>(i) * cond_dim_ + d];
        }
      }
      auto result = disc_update<float>(*vmf_disc_, *adam_disc_, db, variant, cfg_.gamma,
                                       cfg_.log_floor);
      scalars_.last_disc_loss = result.loss_before;
    }
    scalars_.next_disc_update += cfg_.disc_update_period;
  }
}

void Trainer::gradient_step() {
  if (buffer_.size() == 0) return;
  const float alpha = static_cast<float>(cfg_.alpha);
  const float gamma = static_cast<float>(cfg_.gamma);

  Batch<float> batch;
  for (int rep = 0; rep < cfg_.q_updates_per_step; ++rep) {
    auto idx = buffer_.sample_indices(cfg_.batch_size, rng_);
    batch = buffer_.gather(idx);
    fill_pref_ext(batch);

    auto feats = features_of_states(batch.state, batch.n);
    std::vector<double> reward_vecs;
    if (mode_ == MethodMode::Discs || mode_ == MethodMode::Visr) {
      reward_vecs = reward_vectors<float>(*vmf_disc_, feats, batch.n);
    } else if (mode_ == MethodMode::Diayn) {
      auto lp = diayn_log_probs<float>(*cat_disc_, feats, batch.n);
      reward_vecs.assign(static_cast<std::size_t>(batch.n) * 2, 0.0);
      for (int i = 0; i < batch.n; ++i) {
        const float* skill = &batch.skill[static_cast<std::size_t>(i) * cond_dim_];
        const int z = static_cast<int>(std::max_element(skill, skill + cond_dim_) - skill);
        reward_vecs[static_cast<std::size_t>(i) * 2 + 1] = diayn_reward(
            {lp.data() + static_cast<std::size_t>(i) * cond_dim_,
             static_cast<std::size_t>(cond_dim_)},
            z, cfg_.log_floor);
      }
    }

    if (mode_ == MethodMode::Discs && cfg_.hipps_k > 1) {
      HippsConfig hc{cfg_.hipps_k, hipps_source_from_string(cfg_.hipps_source)};
      batch = hipps_augment<float>(batch, hc, vmf_disc_ ? &*vmf_disc_ : nullptr, feats, rng_);
    }
    fill_rewards(batch, reward_vecs);
    batch_stats_.rows = batch.n;
    batch_stats_.relabeled = 0;
    for (auto r : batch.relabeled) batch_stats_.relabeled += r;
    if (batch_hook) batch_hook(batch);

    // Bellman targets from the target critics at a fresh policy draw.
    const int pol_in = kStateDim + cond_dim_;
    std::vector<float> next_obs(static_cast<std::size_t>(batch.n) * pol_in);
    for (int i = 0; i < batch.n; ++i) {
      float* row = next_obs.data() + static_cast<std::size_t>(i) * pol_in;
      std::copy_n(&batch.next_state[static_cast<std::size_t>(i) * kStateDim], kStateDim, row);
      std::copy_n(&batch.skill[static_cast<std::size_t>(i) * cond_dim_], cond_dim_,
                  row + kStateDim);
    }
    auto next_raw = mlp_forward<float>(policy_, next_obs, batch.n);
    auto next_sg = squashed_gaussian_sample<float>(next_raw, batch.n, kActionDim, rng_);

    const int q_in = kStateDim + kActionDim + cond_dim_;
    std::vector<float> next_q_in(static_cast<std::size_t>(batch.n) * q_in);
    for (int i = 0; i < batch.n; ++i) {
      float* row = next_q_in.data() + static_cast<std::size_t>(i) * q_in;
      std::copy_n(&batch.next_state[static_cast<std::size_t>(i) * kStateDim], kStateDim, row);
      std::copy_n(&next_sg.action[static_cast<std::size_t>(i) * kActionDim], kActionDim,
                  row + kStateDim);
      std::copy_n(&batch.skill[static_cast<std::size_t>(i) * cond_dim_], cond_dim_,
                  row + kStateDim + kActionDim);
    }
    auto q1_next = mlp_forward<float>(q1_target_, next_q_in, batch.n);
    auto q2_next = mlp_forward<float>(q2_target_, next_q_in, batch.n);
    auto targets =
        combine_targets<float>(batch, q1_next, q2_next, next_sg.log_prob, alpha, gamma);

    auto c1 = critic_loss_grads<float>(q1_, batch, targets);
    adam_step(q1_, c1.grads, adam_q1_);
    auto c2 = critic_loss_grads<float>(q2_, batch, targets);
    adam_step(q2_, c2.grads, adam_q2_);
    scalars_.last_critic_loss = 0.5 * (static_cast<double>(c1.loss) + c2.loss);
    scalars_.last_avg_reward = average_reward(batch);
  }

  scalars_.grad_steps += 1;
  if (scalars_.grad_steps % cfg_.policy_update_period == 0) {
    auto ar = actor_loss_grads<float>(policy_, q1_, q2_, batch, alpha, rng_);
    adam_step(policy_, ar.grads, adam_policy_);
    scalars_.last_actor_loss = ar.loss;
  }
  if (scalars_.grad_steps % cfg_.target_update_period == 0) {
    polyak_update(q1_target_, q1_, static_cast<float>(cfg_.tau));
    polyak_update(q2_target_, q2_, static_cast<float>(cfg_.tau));
  }
}

void Trainer::write_curve_row() {
  if (!curves_.is_open()) return;
  CurveRow row;
  row.timestep = scalars_.global_step;
  row.occupied_cells = grid_.occupied_cells();
  row.disc_loss = scalars_.last_disc_loss;
  row.avg_reward = scalars_.last_avg_reward;
  row.critic_loss = scalars_.last_critic_loss;
  row.actor_loss = scalars_.last_actor_loss;
  curves_ << format_curve_row(row) << std::flush;
}

void Trainer::finish_heatmap_window() {
  if (!out_dir_.empty()) {
    write_heatmap_csv(grid_,
                      (std::filesystem::path(out_dir_) / heatmap_name(scalars_.heatmap_index))
                          .string());
  }
  grid_.reset();
  scalars_.heatmap_index += 1;
}

void Trainer::run() {
  try {
    while (scalars_.global_step < cfg_.total_steps) {
      const std::int64_t remaining = cfg_.total_steps - scalars_.global_step;
      const int collect =
          static_cast<int>(std::min<std::int64_t>(cfg_.data_collection_steps, remaining));
      collect_steps(collect);
      maybe_update_discriminator();
      const int updates = static_cast<int>(
          (static_cast<std::int64_t>(cfg_.update_steps) * collect) / cfg_.data_collection_steps);
      for (int u = 0; u < updates; ++u) gradient_step();
    }
  } catch (const std::runtime_error&) {
    // Nonfinite losses abort the run; leave a diagnostic checkpoint behind.
    if (!out_dir_.empty()) {
      save((std::filesystem::path(out_dir_) / "checkpoint_diagnostic.bin").string());
    }
    throw;
  }
  if (!out_dir_.empty()) {
    save((std::filesystem::path(out_dir_) / "checkpoint_final.bin").string());
  }
}

Checkpoint Trainer::make_checkpoint() const {
  Checkpoint ckpt;
  ckpt.config_text = cfg_.serialize();
  ckpt.scalars = scalars_;
  ckpt.scalars.env_x = env_.state().x;
  ckpt.scalars.env_y = env_.state().y;
  ckpt.scalars.env_vx = env_.state().vx;
  ckpt.scalars.env_vy = env_.state().vy;
  ckpt.scalars.episode_t = env_.episode_step();
  ckpt.scalars.rng_state = rng_.state();
  ckpt.scalars.grid_total = grid_.total_count();
  ckpt.scalars.buffer_size = buffer_.size();
  ckpt.scalars.buffer_cursor = buffer_.cursor();
  ckpt.scalars.buffer_total_pushed = buffer_.total_pushed();
  ckpt.scalars.adam_steps = {adam_policy_.step, adam_q1_.step, adam_q2_.step,
                             adam_disc_ ? adam_disc_->step : 0};

  auto& tensors = ckpt.tensors;
  append_mlp_tensors(policy_, "policy", tensors);
  append_mlp_tensors(q1_, "q1", tensors);
  append_mlp_tensors(q2_, "q2", tensors);
  append_mlp_tensors(q1_target_, "q1_target", tensors);
  append_mlp_tensors(q2_target_, "q2_target", tensors);
  append_adam_tensors(adam_policy_, policy_, "adam_policy", tensors);
  append_adam_tensors(adam_q1_, q1_, "adam_q1", tensors);
  append_adam_tensors(adam_q2_, q2_, "adam_q2", tensors);
  if (vmf_disc_) {
    append_mlp_tensors(vmf_disc_->net, "disc", tensors);
    append_adam_tensors(*adam_disc_, vmf_disc_->net, "adam_disc", tensors);
  } else if (cat_disc_) {
    append_mlp_tensors(cat_disc_->net, "disc", tensors);
    append_adam_tensors(*adam_disc_, cat_disc_->net, "adam_disc", tensors);
  }

  tensors.push_back({"episode/skill", Tensor({cond_dim_}, current_skill_)});

  // Replay ring: live slots only, in slot order.
  const std::int64_t n = buffer_.size();
  auto slot_slice = [&](const std::vector<float>& src, int dim) {
    return std::vector<float>(src.begin(), src.begin() + n * dim);
  };
  tensors.push_back({"buffer/skill", Tensor({n, cond_dim_},
                                            slot_slice(buffer_.raw_skill(), cond_dim_))});
  tensors.push_back({"buffer/state", Tensor({n, kStateDim},
                                            slot_slice(buffer_.raw_state(), kStateDim))});
  tensors.push_back({"buffer/action", Tensor({n, kActionDim},
                                             slot_slice(buffer_.raw_action(), kActionDim))});
  tensors.push_back({"buffer/next_state",
                     Tensor({n, kStateDim}, slot_slice(buffer_.raw_next_state(), kStateDim))});
  std::vector<float> t_f(n), term_f(n);
  for (std::int64_t i = 0; i < n; ++i) {
    t_f[i] = static_cast<float>(buffer_.raw_t()[i]);
    term_f[i] = static_cast<float>(buffer_.raw_terminal()[i]);
  }
  tensors.push_back({"buffer/t", Tensor({n}, std::move(t_f))});
  tensors.push_back({"buffer/terminal", Tensor({n}, std::move(term_f))});

  std::vector<float> grid_counts(grid_.counts().size());
  for (std::size_t i = 0; i < grid_counts.size(); ++i) {
    grid_counts[i] = static_cast<float>(grid_.counts()[i]);
  }
  tensors.push_back({"grid/counts", Tensor({grid_.side(), grid_.side()},
                                           std::move(grid_counts))});
  return ckpt;
}

void Trainer::save(const std::string& path) const {
  save_checkpoint(make_checkpoint(), path);
}

std::unique_ptr<Trainer> Trainer::from_checkpoint(const std::string& path,
                                                  std::string out_dir) {
  auto ckpt = load_checkpoint(path);
  auto cfg = RunConfig::parse(ckpt.config_text);
  std::unique_ptr<Trainer> tr(new Trainer(std::move(cfg)));
  tr->init_networks();

  load_mlp_tensors(tr->policy_, ckpt, "policy");
  load_mlp_tensors(tr->q1_, ckpt, "q1");
  load_mlp_tensors(tr->q2_, ckpt, "q2");
  load_mlp_tensors(tr->q1_target_, ckpt, "q1_target");
  load_mlp_tensors(tr->q2_target_, ckpt, "q2_target");
  load_adam_tensors(tr->adam_policy_, ckpt, "adam_policy");
  load_adam_tensors(tr->adam_q1_, ckpt, "adam_q1");
  load_adam_tensors(tr->adam_q2_, ckpt, "adam_q2");
  if (tr->vmf_disc_) {
    load_mlp_tensors(tr->vmf_disc_->net, ckpt, "disc");
    load_adam_tensors(*tr->adam_disc_, ckpt, "adam_disc");
  } else if (tr->cat_disc_) {
    load_mlp_tensors(tr->cat_disc_->net, ckpt, "disc");
    load_adam_tensors(*tr->adam_disc_, ckpt, "adam_disc");
  }

  const auto& s = ckpt.scalars;
  tr->scalars_ = s;
  tr->adam_policy_.step = s.adam_steps[0];
  tr->adam_q1_.step = s.adam_steps[1];
  tr->adam_q2_.step = s.adam_steps[2];
  if (tr->adam_disc_) tr->adam_disc_->step = s.adam_steps[3];
  tr->rng_.set_state(s.rng_state);
  tr->env_.restore(PointMassState{s.env_x, s.env_y, s.env_vx, s.env_vy}, s.episode_t);

  const auto& skill = ckpt.require("episode/skill");
  if (static_cast<int>(skill.data.size()) != tr->cond_dim_) {
    throw std::runtime_error("checkpoint episode skill width mismatch");
  }
  tr->current_skill_ = skill.data;

  const auto& bskill = ckpt.require("buffer/skill");
  const auto& bstate = ckpt.require("buffer/state");
  const auto& baction = ckpt.require("buffer/action");
  const auto& bnext = ckpt.require("buffer/next_state");
  const auto& bt = ckpt.require("buffer/t");
  const auto& bterm = ckpt.require("buffer/terminal");
  const std::int64_t n = s.buffer_size;
  if (bskill.element_count() != n * tr->cond_dim_ || bt.element_count() != n) {
    throw std::runtime_error("checkpoint buffer size mismatch");
  }
  for (std::int64_t i = 0; i < n; ++i) {
    tr->buffer_.restore_slot(
        i,
        {bskill.data.data() + i * tr->cond_dim_, static_cast<std::size_t>(tr->cond_dim_)},
        {bstate.data.data() + i * kStateDim, kStateDim},
        {baction.data.data() + i * kActionDim, kActionDim},
        {bnext.data.data() + i * kStateDim, kStateDim},
        static_cast<std::int32_t>(bt.data[i]), bterm.data[i] != 0.0f);
  }
  tr->buffer_.restore_counters(n, s.buffer_cursor, s.buffer_total_pushed);

  const auto& counts = ckpt.require("grid/counts");
  std::vector<std::int64_t> grid_counts(counts.data.size());
  for (std::size_t i = 0; i < grid_counts.size(); ++i) {
    grid_counts[i] = static_cast<std::int64_t>(counts.data[i]);
  }
  tr->grid_.set_counts(grid_counts, s.grid_total);

  tr->open_artifacts(std::move(out_dir));
  return tr;
}

}  // namespace discs
