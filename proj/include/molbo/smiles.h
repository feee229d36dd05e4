//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_SMILES_H_
#define MOLBO_SMILES_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "molbo/molecule.h"

namespace molbo {

/// Parses the supported SMILES subset into a heavy-atom graph.
///
/// Supported: organic-subset atoms (upper case and aromatic lower case),
/// bracket atoms without isotope, charge, chirality or atom class (a hydrogen
/// count inside the bracket is accepted and ignored, hydrogens are always
/// filled by valence), branches, ring closures `0-9` and `%nn`, and the bond
/// symbols `- = # :`. Explicit `[H]` atoms are folded into their neighbor.
///
/// Throws Error with kUnknownToken, kUnbalancedBranch, kUnclosedRing,
/// kValenceExceeded, kMultiFragmentInput or kInvalidStructure.
Molecule parse_smiles(std::string_view text);

/// Canonical SMILES over the heavy atoms; parse_smiles() of the result has
/// the same canonical form as `mol`.
std::string write_smiles(const Molecule &mol);

/// One SMILES per line; blank lines and lines starting with '#' are skipped.
/// Errors are rethrown with the offending line number in the message.
std::vector<Molecule> read_pool(std::istream &is);
std::vector<Molecule> read_pool_file(const std::filesystem::path &path);

}  // namespace molbo

#endif  // MOLBO_SMILES_H_
