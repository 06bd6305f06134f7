#include "discs/discs_capi.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "discs/config.hpp"
#include "discs/selftest.hpp"
#include "discs/trainer.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

discs_status classify(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const std::invalid_argument*>(&e)) return DISCS_ERR_INVALID_ARG;
  if (dynamic_cast<const std::domain_error*>(&e)) return DISCS_ERR_INVALID_ARG;
  if (dynamic_cast<const std::out_of_range*>(&e)) return DISCS_ERR_INVALID_ARG;
  const std::string what = e.what();
  if (what.find("nonfinite") != std::string::npos) return DISCS_ERR_NUMERIC;
  if (what.find("cannot open") != std::string::npos ||
      what.find("write failed") != std::string::npos ||
      what.find("truncated") != std::string::npos ||
      what.find("checkpoint") != std::string::npos) {
    return DISCS_ERR_IO;
  }
  return DISCS_ERR_INTERNAL;
}

template <typename F>
discs_status guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return classify(e);
  } catch (...) {
    set_error("unknown error");
    return DISCS_ERR_INTERNAL;
  }
}

}  // namespace

struct discs_config {
  discs::RunConfig cfg;
};

struct discs_trainer {
  std::unique_ptr<discs::Trainer> impl;
};

extern "C" {

const char* discs_version(void) { return "1.0.0"; }

const char* discs_last_error(void) { return g_last_error.c_str(); }

discs_status discs_config_create(discs_config** out) {
  if (!out) {
    set_error("null output pointer");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    *out = new discs_config();
    return DISCS_OK;
  });
}

discs_status discs_config_load_file(discs_config* cfg, const char* path) {
  if (!cfg || !path) {
    set_error("null config or path");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    cfg->cfg = discs::RunConfig::load_file(path);
    cfg->cfg.validate();
    return DISCS_OK;
  });
}

discs_status discs_config_set(discs_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) {
    set_error("null config, key, or value");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    cfg->cfg.set(key, value);
    return DISCS_OK;
  });
}

discs_status discs_config_serialize(const discs_config* cfg, char** out_text) {
  if (!cfg || !out_text) {
    set_error("null config or output");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    const std::string text = cfg->cfg.serialize();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) {
      set_error("allocation failed");
      return DISCS_ERR_INTERNAL;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
    return DISCS_OK;
  });
}

void discs_config_destroy(discs_config* cfg) { delete cfg; }

void discs_string_free(char* text) { std::free(text); }

discs_status discs_trainer_create(const discs_config* cfg, const char* out_dir,
                                  discs_trainer** out) {
  if (!cfg || !out) {
    set_error("null config or output pointer");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    auto trainer = std::make_unique<discs::Trainer>(cfg->cfg, out_dir ? out_dir : "");
    *out = new discs_trainer{std::move(trainer)};
    return DISCS_OK;
  });
}

discs_status discs_trainer_resume(const char* checkpoint_path, const char* out_dir,
                                  discs_trainer** out) {
  if (!checkpoint_path || !out) {
    set_error("null checkpoint path or output pointer");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    auto trainer = discs::Trainer::from_checkpoint(checkpoint_path, out_dir ? out_dir : "");
    *out = new discs_trainer{std::move(trainer)};
    return DISCS_OK;
  });
}

discs_status discs_trainer_run(discs_trainer* trainer) {
  if (!trainer) {
    set_error("null trainer");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    trainer->impl->run();
    return DISCS_OK;
  });
}

discs_status discs_trainer_set_total_steps(discs_trainer* trainer, int64_t total_steps) {
  if (!trainer || total_steps < 0) {
    set_error("null trainer or negative step count");
    return DISCS_ERR_INVALID_ARG;
  }
  trainer->impl->set_total_steps(total_steps);
  return DISCS_OK;
}

discs_status discs_trainer_save(const discs_trainer* trainer, const char* path) {
  if (!trainer || !path) {
    set_error("null trainer or path");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    trainer->impl->save(path);
    return DISCS_OK;
  });
}

int64_t discs_trainer_step(const discs_trainer* trainer) {
  return trainer ? trainer->impl->global_step() : -1;
}

void discs_trainer_destroy(discs_trainer* trainer) { delete trainer; }

discs_status discs_evaluate(const char* checkpoint_path, int n_skills, const char* out_dir,
                            int* out_occupied) {
  if (!checkpoint_path || !out_dir) {
    set_error("null checkpoint path or output directory");
    return DISCS_ERR_INVALID_ARG;
  }
  return guarded([&]() {
    const auto summary = discs::evaluate_checkpoint(checkpoint_path, n_skills, out_dir);
    if (out_occupied) *out_occupied = summary.occupied_cells;
    return DISCS_OK;
  });
}

discs_status discs_selftest(void) {
  return guarded([&]() {
    const auto results = discs::run_selftests();
    bool all_ok = true;
    for (const auto& r : results) {
      std::printf("%s %s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.detail.empty() ? "" : ": ", r.detail.c_str());
      all_ok = all_ok && r.passed;
    }
    std::fflush(stdout);
    if (!all_ok) {
      set_error("one or more self-test suites failed");
      return DISCS_ERR_INTERNAL;
    }
    return DISCS_OK;
  });
}

}  // extern "C"
