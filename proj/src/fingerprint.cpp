//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/fingerprint.h"

#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

#include "molbo/error.h"

namespace molbo {
namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
constexpr std::uint64_t kSeed = 0x5EED;

class PathEnumerator {
public:
  PathEnumerator(const Molecule &mol, int max_len, std::vector<std::string> &out)
      : mol_(mol), max_len_(max_len), out_(out), on_path_(mol.size(), 0) { }

  void run() {
    for (int a = 0; a < mol_.size(); ++a) {
      if (mol_.element(a) == Element::kH)
        continue;
      atoms_ = { a };
      on_path_[a] = 1;
      extend();
      on_path_[a] = 0;
    }
  }

private:
  void record() {
    std::string fwd, rev;
    const std::size_t n = atoms_.size();
    for (std::size_t k = 0; k < n; ++k) {
      fwd += symbol(mol_.element(atoms_[k]));
      if (k + 1 < n)
        fwd += bond_symbol(orders_[k]);
    }
    for (std::size_t k = n; k-- > 0;) {
      rev += symbol(mol_.element(atoms_[k]));
      if (k > 0)
        rev += bond_symbol(orders_[k - 1]);
    }
    out_.push_back(std::min(fwd, rev));
  }

  void extend() {
    record();
    if (static_cast<int>(orders_.size()) == max_len_)
      return;
    for (const Neighbor &nb: mol_.neighbors(atoms_.back())) {
      if (on_path_[nb.atom] || mol_.element(nb.atom) == Element::kH)
        continue;
      on_path_[nb.atom] = 1;
      atoms_.push_back(nb.atom);
      orders_.push_back(nb.order);
      extend();
      orders_.pop_back();
      atoms_.pop_back();
      on_path_[nb.atom] = 0;
    }
  }

  const Molecule &mol_;
  int max_len_;
  std::vector<std::string> &out_;
  std::vector<char> on_path_;
  std::vector<int> atoms_;
  std::vector<BondOrder> orders_;
};
}  // namespace

Fingerprint::Fingerprint(int n_bits, int max_path_len)
    : n_bits_(n_bits), max_path_len_(max_path_len),
      words_((static_cast<std::size_t>(n_bits) + 63) / 64, 0) { }

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w: words_)
    n += std::popcount(w);
  return n;
}

std::uint64_t fingerprint_hash(std::string_view bytes) {
  std::uint64_t h = kFnvOffset ^ kSeed;
  for (unsigned char c: bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::vector<std::string> path_descriptors(const Molecule &mol, int max_path_len) {
  std::vector<std::string> out;
  PathEnumerator(mol, max_path_len, out).run();
  return out;
}

Fingerprint path_fingerprint(const Molecule &mol, int n_bits, int max_path_len) {
  if (n_bits < 64 || !std::has_single_bit(static_cast<unsigned>(n_bits)))
    throw std::invalid_argument("n_bits must be a power of two >= 64");
  if (max_path_len < 1 || max_path_len > 10)
    throw std::invalid_argument("max_path_len must be in [1, 10]");

  Fingerprint fp(n_bits, max_path_len);
  for (const std::string &d: path_descriptors(mol, max_path_len))
    fp.set(fingerprint_hash(d) % static_cast<std::uint64_t>(n_bits));
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.n_bits() != b.n_bits()) {
    throw Error(ErrorCode::kLengthMismatch,
                "fingerprints have " + std::to_string(a.n_bits()) + " and "
                    + std::to_string(b.n_bits()) + " bits");
  }
  int both = 0, either = 0;
  for (std::size_t k = 0; k < a.words().size(); ++k) {
    both += std::popcount(a.words()[k] & b.words()[k]);
    either += std::popcount(a.words()[k] | b.words()[k]);
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / either;
}

}  // namespace molbo
