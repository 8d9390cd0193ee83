#pragma once

// Batch kernels over many independent secured frames.
//
// Each kernel exists twice: `serial::` is the plain loop kept as the
// reference, `omp::` splits the same per-item work across OpenMP threads.
// Randomness comes from mix64(seed, index), so both variants see identical
// inputs no matter how iterations are scheduled and must return identical
// results.

#include <cstdint>
#include <span>
#include <vector>

#include "toucan/keystore.hpp"
#include "toucan/protocol.hpp"

namespace toucan::kernels {

/// SplitMix64 finalizer over seed + index: a counter-based stream.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) noexcept;

/// A 128-bit key drawn from the counter stream (for per-trial keys).
Block128 key_from_stream(std::uint64_t seed, std::uint64_t index) noexcept;

struct TamperSweep {
  std::uint64_t frames = 0;
  std::uint64_t flips = 0;
  std::uint64_t rejected = 0;
  std::uint64_t accepted = 0;

  friend bool operator==(const TamperSweep&, const TamperSweep&) = default;
};

#define TOUCAN_KERNEL_DECLS                                                                        \
  /* Wire Data fields (big-endian u64) for each payload, all under identifier `id`. */             \
  void secure_send_batch(std::span<const std::uint64_t> payloads, std::uint16_t id,                \
                         const KeyRecord& keys, const SecOcProfile& profile,                       \
                         std::span<std::uint64_t> wire_out);                                        \
  void secure_receive_batch(std::span<const std::uint64_t> wire, std::uint16_t id,                 \
                            const KeyRecord& keys, const SecOcProfile& profile,                    \
                            std::span<Verdict> out);                                               \
  /* Random tag guesses for a fixed payload; returns how many verified. */                         \
  std::uint64_t forgery_trials(std::uint64_t trials, std::uint64_t payload, std::uint16_t id,      \
                               const KeyRecord& keys, const SecOcProfile& profile,                 \
                               std::uint64_t seed);                                                \
  /* Every single-bit flip of the 64-bit wire field on `frames` random secured frames. */          \
  TamperSweep tamper_sweep(std::uint64_t frames, std::uint16_t id, const KeyRecord& keys,          \
                           const SecOcProfile& profile, std::uint64_t seed);                       \
  /* Frames secured by `sender` checked by `receiver`; returns acceptances. */                      \
  std::uint64_t cross_key_trials(std::uint64_t trials, std::uint16_t id, const KeyRecord& sender,  \
                                 const KeyRecord& receiver, const SecOcProfile& profile,           \
                                 std::uint64_t seed);                                              \
  /* Per trial, a fresh key tags payloads 0,1,2,...; returns the 1-based index of the first tag    \
     equal to an earlier one. */                                                                   \
  std::vector<std::uint64_t> first_collision_indices(std::uint64_t trials,                         \
                                                     const SecOcProfile& profile,                  \
                                                     std::uint64_t seed);

namespace serial {
TOUCAN_KERNEL_DECLS
}  // namespace serial

namespace omp {
TOUCAN_KERNEL_DECLS
/// Worker threads the omp variants will use (1 when built without OpenMP).
int max_threads() noexcept;
}  // namespace omp

#undef TOUCAN_KERNEL_DECLS

}  // namespace toucan::kernels
