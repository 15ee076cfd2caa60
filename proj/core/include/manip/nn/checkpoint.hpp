#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "manip/nn/mlp.hpp"
#include "manip/nn/normalizer.hpp"

namespace manip::nn {

// Binary layout, little endian:
//   magic "MNPCKPT\0", u32 version (=1),
//   u32 network count, per network:
//     u32 name length, name bytes, u8 output activation, u32 size count, u32 sizes,
//     per layer: f64 weights row-major (out x in), f64 biases
//   u32 normalizer count, per normalizer:
//     u32 name length, name bytes, u32 dim, f64 count, f64 clip, f64 min_std, f64 mean[dim], f64 m2[dim]
struct Checkpoint {
  std::vector<std::pair<std::string, Mlp>> networks;
  std::vector<std::pair<std::string, Normalizer>> normalizers;

  const Mlp& network(const std::string& name) const;
  const Normalizer& normalizer(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace manip::nn
