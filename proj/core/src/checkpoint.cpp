#include "umt/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace umt {

namespace {

constexpr std::array<char, 4> kMagic{'U', 'M', 'T', 'P'};
constexpr std::uint32_t kMaxRank = 8;
constexpr std::uint32_t kMaxName = 4096;

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), b.size());
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

void read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw CheckpointError(std::string("checkpoint truncated while reading ") + what);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> b{};
  read_exact(in, reinterpret_cast<char*>(b.data()), b.size(), what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in, const char* what) {
  std::array<unsigned char, 8> b{};
  read_exact(in, reinterpret_cast<char*>(b.data()), b.size(), what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

template <class Real>
void write_checkpoint(std::ostream& out, const CheckpointHeader& header,
                      const std::vector<NamedParameter<Real>>& params) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kCheckpointVersion);
  put_u32(out, header.vocab_size);
  put_u32(out, header.d_model);
  put_u32(out, header.layers);
  put_u32(out, header.heads);
  put_u32(out, header.ffn_dim);
  put_u32(out, header.max_len);
  put_u64(out, header.vocab_hash);
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put_u32(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    const Shape& shape = p.tensor.shape();
    put_u32(out, static_cast<std::uint32_t>(shape.size()));
    for (auto e : shape) put_u32(out, static_cast<std::uint32_t>(e));
    for (Real v : p.tensor.data()) put_f32(out, static_cast<float>(v));
  }
  if (!out) throw CheckpointError("failed writing checkpoint stream");
}

template <class Real>
void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const std::vector<NamedParameter<Real>>& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(out, header, params);
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  read_exact(in, magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw CheckpointError("not a checkpoint (bad magic)");
  const auto version = get_u32(in, "version");
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.header.vocab_size = get_u32(in, "header");
  ck.header.d_model = get_u32(in, "header");
  ck.header.layers = get_u32(in, "header");
  ck.header.heads = get_u32(in, "header");
  ck.header.ffn_dim = get_u32(in, "header");
  ck.header.max_len = get_u32(in, "header");
  ck.header.vocab_hash = get_u64(in, "header");
  const auto count = get_u32(in, "block count");
  for (std::uint32_t b = 0; b < count; ++b) {
    CheckpointBlock block;
    const auto name_len = get_u32(in, "name length");
    if (name_len > kMaxName) throw CheckpointError("implausible parameter name length");
    block.name.resize(name_len);
    read_exact(in, block.name.data(), name_len, "name");
    const auto rank = get_u32(in, "rank");
    if (rank == 0 || rank > kMaxRank)
      throw CheckpointError("implausible rank for block '" + block.name + "'");
    for (std::uint32_t r = 0; r < rank; ++r) {
      const auto e = get_u32(in, "extent");
      if (e == 0) throw CheckpointError("zero extent in block '" + block.name + "'");
      block.shape.push_back(e);
    }
    const std::size_t n = numel(block.shape);
    block.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      block.values[i] = std::bit_cast<float>(get_u32(in, "values"));
    ck.blocks.push_back(std::move(block));
  }
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());
  return read_checkpoint(in);
}

template <class Real>
void assign_parameters(const Checkpoint& checkpoint,
                       std::vector<NamedParameter<Real>>& params) {
  std::unordered_map<std::string, const CheckpointBlock*> by_name;
  for (const auto& b : checkpoint.blocks) by_name[b.name] = &b;
  if (by_name.size() != params.size())
    throw CheckpointError("checkpoint has " + std::to_string(by_name.size()) +
                          " blocks, model expects " + std::to_string(params.size()));
  for (auto& p : params) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw CheckpointError("checkpoint lacks parameter '" + p.name + "'");
    if (it->second->shape != p.tensor.shape())
      throw CheckpointError("shape mismatch for '" + p.name + "': checkpoint " +
                            shape_str(it->second->shape) + ", model " +
                            shape_str(p.tensor.shape()));
    auto dst = p.tensor.mutable_data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<Real>(it->second->values[i]);
  }
}

template void write_checkpoint(std::ostream&, const CheckpointHeader&,
                               const std::vector<NamedParameter<float>>&);
template void write_checkpoint(std::ostream&, const CheckpointHeader&,
                               const std::vector<NamedParameter<double>>&);
template void save_checkpoint(const std::filesystem::path&, const CheckpointHeader&,
                              const std::vector<NamedParameter<float>>&);
template void save_checkpoint(const std::filesystem::path&, const CheckpointHeader&,
                              const std::vector<NamedParameter<double>>&);
template void assign_parameters(const Checkpoint&, std::vector<NamedParameter<float>>&);
template void assign_parameters(const Checkpoint&, std::vector<NamedParameter<double>>&);

}  // namespace umt
