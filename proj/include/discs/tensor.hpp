#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace discs {

/// Dense row-major 32-bit real buffer; the interchange type for checkpoints.
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<std::int64_t> s, std::vector<float> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (element_count() != static_cast<std::int64_t>(data.size())) {
      throw std::invalid_argument("Tensor: shape/data size mismatch");
    }
  }

  static Tensor zeros(std::vector<std::int64_t> s) {
    std::int64_t n = 1;
    for (auto d : s) {
      if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
      n *= d;
    }
    return Tensor(std::move(s), std::vector<float>(static_cast<std::size_t>(n), 0.0f));
  }

  std::int64_t element_count() const {
    std::int64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
};

/// A named tensor, the unit of checkpoint serialization.
struct NamedTensor {
  std::string name;
  Tensor tensor;
};

}  // namespace discs
