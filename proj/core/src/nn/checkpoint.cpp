#include "manip/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace manip::nn {
namespace {

constexpr std::array<char, 8> kMagic{'M', 'N', 'P', 'C', 'K', 'P', 'T', '\0'};

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated input");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > (1u << 20)) throw std::runtime_error("checkpoint: implausible name length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw std::runtime_error("checkpoint: truncated input");
  return s;
}

void put_doubles(std::ostream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::istream& in, double* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated input");
}

}  // namespace

const Mlp& Checkpoint::network(const std::string& name) const {
  for (const auto& [n, net] : networks) {
    if (n == name) return net;
  }
  throw std::out_of_range("checkpoint has no network '" + name + "'");
}

const Normalizer& Checkpoint::normalizer(const std::string& name) const {
  for (const auto& [n, norm] : normalizers) {
    if (n == name) return norm;
  }
  throw std::out_of_range("checkpoint has no normalizer '" + name + "'");
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.networks.size()));
  for (const auto& [name, net] : ckpt.networks) {
    put_string(out, name);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(net.output_activation()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    for (int l = 0; l < net.num_layers(); ++l) {
      const auto& w = net.weights()[static_cast<std::size_t>(l)];
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = w;
      put_doubles(out, row_major.data(), static_cast<std::size_t>(row_major.size()));
      const auto& b = net.biases()[static_cast<std::size_t>(l)];
      put_doubles(out, b.data(), static_cast<std::size_t>(b.size()));
    }
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.normalizers.size()));
  for (const auto& [name, norm] : ckpt.normalizers) {
    put_string(out, name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(norm.dim()));
    put<double>(out, norm.count());
    put<double>(out, norm.clip());
    put<double>(out, norm.min_std());
    put_doubles(out, norm.mean().data(), static_cast<std::size_t>(norm.dim()));
    put_doubles(out, norm.m2().data(), static_cast<std::size_t>(norm.dim()));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const auto n_nets = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_nets; ++i) {
    std::string name = get_string(in);
    const auto act = get<std::uint8_t>(in);
    if (act > 1) throw std::runtime_error("checkpoint: bad activation tag");
    const auto n_sizes = get<std::uint32_t>(in);
    if (n_sizes < 2 || n_sizes > 64) throw std::runtime_error("checkpoint: bad layer count");
    std::vector<int> sizes;
    for (std::uint32_t s = 0; s < n_sizes; ++s) sizes.push_back(static_cast<int>(get<std::uint32_t>(in)));
    Rng rng(0);
    Mlp net(sizes, static_cast<Activation>(act), rng);
    for (int l = 0; l < net.num_layers(); ++l) {
      auto& w = net.weights()[static_cast<std::size_t>(l)];
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(w.rows(), w.cols());
      get_doubles(in, row_major.data(), static_cast<std::size_t>(row_major.size()));
      w = row_major;
      auto& b = net.biases()[static_cast<std::size_t>(l)];
      get_doubles(in, b.data(), static_cast<std::size_t>(b.size()));
    }
    ckpt.networks.emplace_back(std::move(name), std::move(net));
  }
  const auto n_norms = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_norms; ++i) {
    std::string name = get_string(in);
    const int dim = static_cast<int>(get<std::uint32_t>(in));
    const double count = get<double>(in);
    const double clip = get<double>(in);
    const double min_std = get<double>(in);
    Eigen::VectorXd mean(dim), m2(dim);
    get_doubles(in, mean.data(), static_cast<std::size_t>(dim));
    get_doubles(in, m2.data(), static_cast<std::size_t>(dim));
    Normalizer norm(dim, clip, min_std);
    norm.set_state(count, std::move(mean), std::move(m2));
    ckpt.normalizers.emplace_back(std::move(name), std::move(norm));
  }
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace manip::nn
