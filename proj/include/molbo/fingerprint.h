//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_FINGERPRINT_H_
#define MOLBO_FINGERPRINT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/molecule.h"

namespace molbo {

struct FingerprintParams {
  int n_bits = 2048;
  int max_path_len = 7;

  bool operator==(const FingerprintParams &) const = default;
};

class Fingerprint {
public:
  Fingerprint(int n_bits, int max_path_len);

  int n_bits() const { return n_bits_; }
  int max_path_len() const { return max_path_len_; }

  void set(std::size_t bit) { words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64); }
  bool test(std::size_t bit) const {
    return (words_[bit / 64] >> (bit % 64)) & 1U;
  }
  int popcount() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  bool operator==(const Fingerprint &) const = default;

private:
  int n_bits_;
  int max_path_len_;
  std::vector<std::uint64_t> words_;
};

/// 64-bit FNV-1a whose offset basis is XOR-ed with the fingerprint seed
/// 0x5EED. Pinned so fingerprints are bit-stable across runs and platforms.
std::uint64_t fingerprint_hash(std::string_view bytes);

/// Path descriptors (element symbols alternating with bond symbols, in the
/// lexicographically smaller direction) of every simple heavy-atom path with
/// 0..max_path_len bonds. Exposed for testing; contains duplicates.
std::vector<std::string> path_descriptors(const Molecule &mol, int max_path_len);

/// Requires n_bits to be a power of two >= 64 and 1 <= max_path_len <= 10.
Fingerprint path_fingerprint(const Molecule &mol, int n_bits = 2048,
                             int max_path_len = 7);

inline Fingerprint path_fingerprint(const Molecule &mol,
                                    const FingerprintParams &params) {
  return path_fingerprint(mol, params.n_bits, params.max_path_len);
}

/// |a & b| / |a | b|; 1 when both are empty. Throws kLengthMismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace molbo

#endif  // MOLBO_FINGERPRINT_H_
