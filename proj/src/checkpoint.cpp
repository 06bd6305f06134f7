#include "discs/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace discs {

namespace {

// Explicit little-endian encoding, independent of host byte order.
void put_bytes(std::string& out, const void* data, std::size_t n) {
  out.append(static_cast<const char*>(data), n);
}

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  put_bytes(out, b, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  put_bytes(out, b, 8);
}

void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

void put_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) {
      throw std::runtime_error("checkpoint truncated: " + path_);
    }
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void raw(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, data_.data() + pos_, n);
    pos_ += n;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t.tensor;
  }
  return nullptr;
}

const Tensor& Checkpoint::require(const std::string& name) const {
  const Tensor* t = find(name);
  if (!t) throw std::runtime_error("checkpoint missing tensor '" + name + "'");
  return *t;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::string out;
  out.reserve(1024);
  put_bytes(out, kCheckpointMagic, sizeof(kCheckpointMagic) - 1);
  put_u32(out, ckpt.version);
  put_string(out, ckpt.config_text);

  const TrainerScalars& s = ckpt.scalars;
  put_i64(out, s.global_step);
  put_i64(out, s.grad_steps);
  put_i64(out, s.next_disc_update);
  put_i64(out, s.heatmap_index);
  put_i32(out, s.episode_t);
  put_i32(out, s.current_z);
  put_f64(out, s.env_x);
  put_f64(out, s.env_y);
  put_f64(out, s.env_vx);
  put_f64(out, s.env_vy);
  for (auto w : s.rng_state) put_u64(out, w);
  put_f64(out, s.last_disc_loss);
  put_f64(out, s.last_critic_loss);
  put_f64(out, s.last_actor_loss);
  put_f64(out, s.last_avg_reward);
  put_i64(out, s.grid_total);
  put_i64(out, s.buffer_size);
  put_i64(out, s.buffer_cursor);
  put_i64(out, s.buffer_total_pushed);
  for (auto a : s.adam_steps) put_i64(out, a);

  put_u32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& nt : ckpt.tensors) {
    put_string(out, nt.name);
    put_u32(out, static_cast<std::uint32_t>(nt.tensor.shape.size()));
    for (auto d : nt.tensor.shape) put_u64(out, static_cast<std::uint64_t>(d));
    for (float v : nt.tensor.data) put_f32(out, v);
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("checkpoint write failed: " + path);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  Reader r(data, path);
  char magic[sizeof(kCheckpointMagic) - 1];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a checkpoint file (bad magic): " + path);
  }

  Checkpoint ckpt;
  ckpt.version = r.u32();
  if (ckpt.version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint format version " + std::to_string(ckpt.version) +
                             " unsupported (expected " + std::to_string(kCheckpointVersion) +
                             "): " + path);
  }
  ckpt.config_text = r.str();

  TrainerScalars& s = ckpt.scalars;
  s.global_step = r.i64();
  s.grad_steps = r.i64();
  s.next_disc_update = r.i64();
  s.heatmap_index = r.i64();
  s.episode_t = r.i32();
  s.current_z = r.i32();
  s.env_x = r.f64();
  s.env_y = r.f64();
  s.env_vx = r.f64();
  s.env_vy = r.f64();
  for (auto& w : s.rng_state) w = r.u64();
  s.last_disc_loss = r.f64();
  s.last_critic_loss = r.f64();
  s.last_actor_loss = r.f64();
  s.last_avg_reward = r.f64();
  s.grid_total = r.i64();
  s.buffer_size = r.i64();
  s.buffer_cursor = r.i64();
  s.buffer_total_pushed = r.i64();
  for (auto& a : s.adam_steps) a = r.i64();

  const std::uint32_t n_tensors = r.u32();
  ckpt.tensors.reserve(n_tensors);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    NamedTensor nt;
    nt.name = r.str();
    const std::uint32_t rank = r.u32();
    std::int64_t count = 1;
    nt.tensor.shape.resize(rank);
    for (auto& d : nt.tensor.shape) {
      d = static_cast<std::int64_t>(r.u64());
      if (d < 0) throw std::runtime_error("checkpoint tensor has negative dim: " + path);
      count *= d;
    }
    r.need(static_cast<std::size_t>(count) * 4);
    nt.tensor.data.resize(static_cast<std::size_t>(count));
    for (auto& v : nt.tensor.data) v = r.f32();
    ckpt.tensors.push_back(std::move(nt));
  }
  if (!r.done()) {
    throw std::runtime_error("checkpoint has trailing bytes: " + path);
  }
  return ckpt;
}

}  // namespace discs
