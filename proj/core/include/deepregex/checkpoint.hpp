#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepregex/seq2seq.hpp"
#include "deepregex/vocab.hpp"

namespace deepregex {

class CheckpointError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class CheckpointVersionError : public CheckpointError {
  using CheckpointError::CheckpointError;
};
class CheckpointCorruptError : public CheckpointError {
  using CheckpointError::CheckpointError;
};

struct Checkpoint {
  TrainConfig train;
  Vocab source;
  Vocab target;
  ModelParams<float> params;  // params.config is the model config
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  std::string provenance = "{}";  // serialized JSON object
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Layout: 8 magic bytes "DRXCKPT\0", u32 version, u64 metadata length,
/// metadata JSON, u32 CRC32 of the metadata, u32 tensor count, then per
/// tensor: u32 name length, name, u8 dtype (1 = f32, 2 = f64), u32 rank (2),
/// u64 rows, u64 cols, row-major data, u32 CRC32 of the record. All integers
/// and floats little-endian.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
std::string serialize_checkpoint(const Checkpoint& checkpoint);

Checkpoint load_checkpoint(const std::filesystem::path& path);
Checkpoint parse_checkpoint(const std::string& bytes);

}  // namespace deepregex
