#ifndef FREDO_CHECKPOINT_HPP
#define FREDO_CHECKPOINT_HPP

#include <filesystem>

#include "fredo/model.hpp"
#include "fredo/nn.hpp"

namespace fredo {

/// Checkpoint file: versioned JSON of named tensors with shape headers plus
/// the configuration needed to rebuild the forecaster (documented in the
/// README). Doubles survive the round trip bit-exactly.
inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
    ForecasterConfig config;
    ModelParams params;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

/// Throws MissingFile / ConfigError on absent files, version or shape
/// mismatches.
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace fredo

#endif // FREDO_CHECKPOINT_HPP
