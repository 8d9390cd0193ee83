/* Test-only Chaskey reference in the style of the original C code: byte
 * pointers, in-place round macro, no shared code with the library. */
#pragma once

#include <stdint.h>
#include <string.h>

namespace oracle {

#define ORACLE_ROTL(x, b) (uint32_t)(((x) >> (32 - (b))) | ((x) << (b)))

#define ORACLE_ROUND(v)                                                         \
  do {                                                                          \
    v[0] += v[1]; v[1] = ORACLE_ROTL(v[1], 5); v[1] ^= v[0];                    \
    v[0] = ORACLE_ROTL(v[0], 16);                                               \
    v[2] += v[3]; v[3] = ORACLE_ROTL(v[3], 8); v[3] ^= v[2];                    \
    v[0] += v[3]; v[3] = ORACLE_ROTL(v[3], 13); v[3] ^= v[0];                   \
    v[2] += v[1]; v[1] = ORACLE_ROTL(v[1], 7); v[1] ^= v[2];                    \
    v[2] = ORACLE_ROTL(v[2], 16);                                               \
  } while (0)

inline void ref_timestwo(uint32_t out[4], const uint32_t in[4]) {
  static const uint32_t C[2] = {0x00, 0x87};
  out[0] = (in[0] << 1) ^ C[in[3] >> 31];
  out[1] = (in[1] << 1) | (in[0] >> 31);
  out[2] = (in[2] << 1) | (in[1] >> 31);
  out[3] = (in[3] << 1) | (in[2] >> 31);
}

inline uint32_t ref_load32(const uint8_t* p) {
  return (uint32_t)p[0] | ((uint32_t)p[1] << 8) | ((uint32_t)p[2] << 16) | ((uint32_t)p[3] << 24);
}

inline void ref_subkeys(uint32_t k1[4], uint32_t k2[4], const uint32_t k[4]) {
  ref_timestwo(k1, k);
  ref_timestwo(k2, k1);
}

/* tag: 16 bytes out; key: 16 bytes. */
inline void ref_chaskey(uint8_t* tag, const uint8_t* m, size_t mlen, const uint8_t* key, int rounds) {
  uint32_t k[4], k1[4], k2[4], v[4];
  for (int i = 0; i < 4; ++i) k[i] = ref_load32(key + 4 * i);
  ref_subkeys(k1, k2, k);
  memcpy(v, k, sizeof v);

  const uint8_t* p = m;
  const uint8_t* end = m + mlen;
  if (mlen != 0) {
    const uint8_t* last_full = m + ((mlen - 1) / 16) * 16;
    for (; p != last_full; p += 16) {
      for (int i = 0; i < 4; ++i) v[i] ^= ref_load32(p + 4 * i);
      for (int r = 0; r < rounds; ++r) ORACLE_ROUND(v);
    }
  }
  const uint32_t* l;
  uint8_t lb[16];
  size_t rem = (size_t)(end - p);
  if (mlen != 0 && rem == 16) {
    l = k1;
    memcpy(lb, p, 16);
  } else {
    l = k2;
    memset(lb, 0, 16);
    memcpy(lb, p, rem);
    lb[rem] = 0x01;
  }
  for (int i = 0; i < 4; ++i) v[i] ^= ref_load32(lb + 4 * i) ^ l[i];
  for (int r = 0; r < rounds; ++r) ORACLE_ROUND(v);
  for (int i = 0; i < 4; ++i) v[i] ^= l[i];
  for (int i = 0; i < 4; ++i) {
    tag[4 * i] = (uint8_t)v[i];
    tag[4 * i + 1] = (uint8_t)(v[i] >> 8);
    tag[4 * i + 2] = (uint8_t)(v[i] >> 16);
    tag[4 * i + 3] = (uint8_t)(v[i] >> 24);
  }
}

#undef ORACLE_ROUND
#undef ORACLE_ROTL

}  // namespace oracle
