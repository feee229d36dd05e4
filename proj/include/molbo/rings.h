//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_RINGS_H_
#define MOLBO_RINGS_H_

#include <vector>

#include "molbo/molecule.h"

namespace molbo {

/// Atom indices of one ring, in cycle order.
using Ring = std::vector<int>;

/// A minimum cycle basis of the heavy-atom graph (Horton candidates reduced
/// by GF(2) elimination). Its size is the cyclomatic number
/// bonds - atoms + 1; the multiset of ring sizes is basis independent.
std::vector<Ring> smallest_cycle_basis(const Molecule &mol);

}  // namespace molbo

#endif  // MOLBO_RINGS_H_
