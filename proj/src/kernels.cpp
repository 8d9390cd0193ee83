#include "toucan/kernels.hpp"

#include <cstddef>
#include <stdexcept>

#ifdef TOUCAN_HAVE_OPENMP
#include <omp.h>
#endif

#include "toucan/aes128.hpp"
#include "toucan/errors.hpp"

namespace toucan::kernels {

std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Block128 key_from_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  Block128 k;
  const std::uint64_t a = mix64(seed, 2 * index);
  const std::uint64_t b = mix64(seed, 2 * index + 1);
  for (int i = 0; i < 8; ++i) {
    k[i] = static_cast<std::uint8_t>(a >> (8 * i));
    k[8 + i] = static_cast<std::uint8_t>(b >> (8 * i));
  }
  return k;
}

namespace {

// Per-item work shared by both drivers.

inline std::uint64_t mask_bits(unsigned bits) noexcept {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

inline std::uint64_t send_one(std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                              const SecOcProfile& profile) {
  const auto tag = compute_tag(keys, id, payload, profile);
  const std::uint64_t field = pack_data_field(payload, tag.value(), profile.mac_tx_len);
  return encrypt_data_field(keys.cipher(), keys.ctr_for(id), field);
}

inline bool accepts(std::uint64_t wire, std::uint16_t id, const KeyRecord& keys, const SecOcProfile& profile) {
  return secure_receive(CanFrame::data_frame_u64(id, wire), keys, profile).accepted;
}

inline bool forge_one(std::uint64_t i, std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                      const SecOcProfile& profile, std::uint64_t seed) {
  const std::uint64_t guess = mix64(seed, i) & mask_bits(profile.mac_tx_len);
  const std::uint64_t field = pack_data_field(payload, guess, profile.mac_tx_len);
  return accepts(encrypt_data_field(keys.cipher(), keys.ctr_for(id), field), id, keys, profile);
}

inline std::uint64_t sweep_one(std::uint64_t f, std::uint16_t id, const KeyRecord& keys,
                               const SecOcProfile& profile, std::uint64_t seed) {
  const std::uint64_t payload = mix64(seed, f) & mask_bits(profile.payload_bits());
  const std::uint64_t wire = send_one(payload, id, keys, profile);
  std::uint64_t rejected = 0;
  for (unsigned bit = 0; bit < 64; ++bit) {
    if (!accepts(wire ^ (std::uint64_t{1} << bit), id, keys, profile)) ++rejected;
  }
  return rejected;
}

inline bool cross_one(std::uint64_t i, std::uint16_t id, const KeyRecord& sender, const KeyRecord& receiver,
                      const SecOcProfile& profile, std::uint64_t seed) {
  const std::uint64_t payload = mix64(seed, i) & mask_bits(profile.payload_bits());
  return accepts(send_one(payload, id, sender, profile), id, receiver, profile);
}

inline std::uint64_t first_collision(std::uint64_t trial, const SecOcProfile& profile, std::uint64_t seed) {
  const KeyRecord keys(0, kMaxStandardId, key_from_stream(seed, 2 * trial), key_from_stream(seed, 2 * trial + 1));
  std::vector<std::uint8_t> seen(std::size_t{1} << profile.mac_tx_len, 0);
  const std::uint64_t limit = mask_bits(profile.payload_bits());
  for (std::uint64_t k = 0; k <= limit; ++k) {
    const std::uint64_t tag = compute_tag(keys, 0, k, profile).value();
    if (seen[tag]) return k + 1;
    seen[tag] = 1;
  }
  return 0;  // unreachable: payloads outnumber tags
}

void check_batch(std::size_t in, std::size_t out) {
  if (in != out) throw std::invalid_argument("batch input and output sizes differ");
}

void check_collision_width(const SecOcProfile& profile) {
  profile.validate();
  if (profile.mac_tx_len > 24) throw RangeError("collision search supports tags up to 24 bits");
}

}  // namespace

namespace serial {

void secure_send_batch(std::span<const std::uint64_t> payloads, std::uint16_t id, const KeyRecord& keys,
                       const SecOcProfile& profile, std::span<std::uint64_t> wire_out) {
  check_batch(payloads.size(), wire_out.size());
  profile.validate();
  for (std::size_t i = 0; i < payloads.size(); ++i) wire_out[i] = send_one(payloads[i], id, keys, profile);
}

void secure_receive_batch(std::span<const std::uint64_t> wire, std::uint16_t id, const KeyRecord& keys,
                          const SecOcProfile& profile, std::span<Verdict> out) {
  check_batch(wire.size(), out.size());
  for (std::size_t i = 0; i < wire.size(); ++i) {
    out[i] = secure_receive(CanFrame::data_frame_u64(id, wire[i]), keys, profile);
  }
}

std::uint64_t forgery_trials(std::uint64_t trials, std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                             const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) accepted += forge_one(i, payload, id, keys, profile, seed) ? 1 : 0;
  return accepted;
}

TamperSweep tamper_sweep(std::uint64_t frames, std::uint16_t id, const KeyRecord& keys,
                         const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  TamperSweep r{frames, frames * 64, 0, 0};
  for (std::uint64_t f = 0; f < frames; ++f) r.rejected += sweep_one(f, id, keys, profile, seed);
  r.accepted = r.flips - r.rejected;
  return r;
}

std::uint64_t cross_key_trials(std::uint64_t trials, std::uint16_t id, const KeyRecord& sender,
                               const KeyRecord& receiver, const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) accepted += cross_one(i, id, sender, receiver, profile, seed) ? 1 : 0;
  return accepted;
}

std::vector<std::uint64_t> first_collision_indices(std::uint64_t trials, const SecOcProfile& profile,
                                                   std::uint64_t seed) {
  check_collision_width(profile);
  std::vector<std::uint64_t> out(trials);
  for (std::uint64_t t = 0; t < trials; ++t) out[t] = first_collision(t, profile, seed);
  return out;
}

}  // namespace serial

namespace omp {

int max_threads() noexcept {
#ifdef TOUCAN_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void secure_send_batch(std::span<const std::uint64_t> payloads, std::uint16_t id, const KeyRecord& keys,
                       const SecOcProfile& profile, std::span<std::uint64_t> wire_out) {
  check_batch(payloads.size(), wire_out.size());
  profile.validate();
  // Range errors are checked up front: exceptions must not escape a parallel region.
  for (auto p : payloads) {
    if (p >> profile.payload_bits()) throw RangeError("payload exceeds profile width");
  }
  const auto n = static_cast<std::ptrdiff_t>(payloads.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) wire_out[i] = send_one(payloads[i], id, keys, profile);
}

void secure_receive_batch(std::span<const std::uint64_t> wire, std::uint16_t id, const KeyRecord& keys,
                          const SecOcProfile& profile, std::span<Verdict> out) {
  check_batch(wire.size(), out.size());
  profile.validate();
  const auto n = static_cast<std::ptrdiff_t>(wire.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = secure_receive(CanFrame::data_frame_u64(id, wire[i]), keys, profile);
  }
}

std::uint64_t forgery_trials(std::uint64_t trials, std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                             const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  if (payload >> profile.payload_bits()) throw RangeError("payload exceeds profile width");
  std::uint64_t accepted = 0;
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : accepted)
  for (std::int64_t i = 0; i < n; ++i) {
    accepted += forge_one(static_cast<std::uint64_t>(i), payload, id, keys, profile, seed) ? 1 : 0;
  }
  return accepted;
}

TamperSweep tamper_sweep(std::uint64_t frames, std::uint16_t id, const KeyRecord& keys,
                         const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  std::uint64_t rejected = 0;
  const auto n = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(static) reduction(+ : rejected)
  for (std::int64_t f = 0; f < n; ++f) rejected += sweep_one(static_cast<std::uint64_t>(f), id, keys, profile, seed);
  return {frames, frames * 64, rejected, frames * 64 - rejected};
}

std::uint64_t cross_key_trials(std::uint64_t trials, std::uint16_t id, const KeyRecord& sender,
                               const KeyRecord& receiver, const SecOcProfile& profile, std::uint64_t seed) {
  profile.validate();
  std::uint64_t accepted = 0;
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : accepted)
  for (std::int64_t i = 0; i < n; ++i) {
    accepted += cross_one(static_cast<std::uint64_t>(i), id, sender, receiver, profile, seed) ? 1 : 0;
  }
  return accepted;
}

std::vector<std::uint64_t> first_collision_indices(std::uint64_t trials, const SecOcProfile& profile,
                                                   std::uint64_t seed) {
  check_collision_width(profile);
  std::vector<std::uint64_t> out(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < n; ++t) out[t] = first_collision(static_cast<std::uint64_t>(t), profile, seed);
  return out;
}

}  // namespace omp

}  // namespace toucan::kernels
