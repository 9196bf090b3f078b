#pragma once

// Binary parameter checkpoints.
//
// Layout (all integers little-endian):
//   "UMTP"                      4 bytes
//   u32 format version          (kCheckpointVersion)
//   u32 vocab_size, d_model, layers, heads, ffn_dim, max_len
//   u64 vocab_hash
//   u32 block count
//   per block: u32 name length, name bytes, u32 rank, u32 extents[rank],
//              float32 values (little-endian, row-major)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "umt/tensor.hpp"

namespace umt {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::uint32_t vocab_size = 0;
  std::uint32_t d_model = 0;
  std::uint32_t layers = 0;
  std::uint32_t heads = 0;
  std::uint32_t ffn_dim = 0;
  std::uint32_t max_len = 0;
  std::uint64_t vocab_hash = 0;

  bool operator==(const CheckpointHeader&) const = default;
};

struct CheckpointBlock {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

struct Checkpoint {
  CheckpointHeader header;
  std::vector<CheckpointBlock> blocks;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Real>
void write_checkpoint(std::ostream& out, const CheckpointHeader& header,
                      const std::vector<NamedParameter<Real>>& params);
template <class Real>
void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const std::vector<NamedParameter<Real>>& params);

Checkpoint read_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies checkpoint blocks into same-named parameters. Every parameter must
// be present with a matching shape; extra blocks are an error too.
template <class Real>
void assign_parameters(const Checkpoint& checkpoint,
                       std::vector<NamedParameter<Real>>& params);

}  // namespace umt
