#include "dialrl/diffcore/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace dialrl::diffcore {

namespace {

constexpr std::uint32_t kNetMagic = 0x444c4e31;  // "DLN1"
constexpr std::uint32_t kBundleMagic = 0x444c4231;  // "DLB1"

void write_u32(std::ostream& o, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  o.write(reinterpret_cast<char*>(b), 4);
}

std::uint32_t read_u32(std::istream& i) {
  unsigned char b[4];
  i.read(reinterpret_cast<char*>(b), 4);
  if (!i) throw SerializeError("truncated stream");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

void write_f64(std::ostream& o, double v) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(v));
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
  o.write(reinterpret_cast<char*>(b), 8);
}

double read_f64(std::istream& i) {
  unsigned char b[8];
  i.read(reinterpret_cast<char*>(b), 8);
  if (!i) throw SerializeError("truncated stream");
  std::uint64_t u = 0;
  for (int k = 0; k < 8; ++k) u |= std::uint64_t(b[k]) << (8 * k);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

void write_string(std::ostream& o, const std::string& s) {
  write_u32(o, static_cast<std::uint32_t>(s.size()));
  o.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& i) {
  std::uint32_t n = read_u32(i);
  std::string s(n, '\0');
  i.read(s.data(), n);
  if (!i) throw SerializeError("truncated stream");
  return s;
}

}  // namespace

void save_net(std::ostream& out, const NetParams& p) {
  write_u32(out, kNetMagic);
  write_u32(out, static_cast<std::uint32_t>(p.spec.layer_sizes.size()));
  for (int s : p.spec.layer_sizes) write_u32(out, static_cast<std::uint32_t>(s));
  for (Activation a : p.spec.activations)
    write_u32(out, static_cast<std::uint32_t>(a));
  Vector theta = flatten(p);
  for (Eigen::Index i = 0; i < theta.size(); ++i) write_f64(out, theta[i]);
}

NetParams load_net(std::istream& in) {
  if (read_u32(in) != kNetMagic) throw SerializeError("bad net magic");
  std::uint32_t n = read_u32(in);
  NetSpec spec;
  for (std::uint32_t i = 0; i < n; ++i)
    spec.layer_sizes.push_back(static_cast<int>(read_u32(in)));
  for (std::uint32_t i = 0; i + 1 < n; ++i)
    spec.activations.push_back(static_cast<Activation>(read_u32(in)));
  spec.validate();
  NetParams p = NetParams::zeros(spec);
  Vector theta(p.param_count());
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = read_f64(in);
  unflatten(p, theta);
  return p;
}

void save_bundle(const std::string& path, const Bundle& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializeError("cannot open " + path);
  write_u32(out, kBundleMagic);
  write_u32(out, static_cast<std::uint32_t>(b.meta.size()));
  for (const auto& [k, v] : b.meta) {
    write_string(out, k);
    write_string(out, v);
  }
  write_u32(out, static_cast<std::uint32_t>(b.nets.size()));
  for (const auto& [name, net] : b.nets) {
    write_string(out, name);
    save_net(out, net);
  }
  if (!out) throw SerializeError("write failed: " + path);
}

Bundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializeError("cannot open " + path);
  if (read_u32(in) != kBundleMagic) throw SerializeError("bad bundle magic");
  Bundle b;
  std::uint32_t nm = read_u32(in);
  for (std::uint32_t i = 0; i < nm; ++i) {
    std::string k = read_string(in);
    b.meta[k] = read_string(in);
  }
  std::uint32_t nn = read_u32(in);
  for (std::uint32_t i = 0; i < nn; ++i) {
    std::string name = read_string(in);
    b.nets[name] = load_net(in);
  }
  return b;
}

}  // namespace dialrl::diffcore
