#pragma once

#include "modelset/scheme.hpp"

namespace modelset {

/// Fibonacci chain: n = d = 1, D = 5, basis (1 | 1), (tau | tau'), W = [0, 1).
SchemeConfig preset_fibonacci();

/// Silver-mean chain: n = d = 1, D = 2, basis (1 | 1), (1+sqrt2 | 1-sqrt2), W = [0, 1).
SchemeConfig preset_silver_mean();

/// Ammann-Beenker: n = d = 2, D = 2, 8th-root lattice with the 3k star map,
/// window the regular octagon of edge length 1.
SchemeConfig preset_ammann_beenker();

/// Fibonacci with a redundant Z/2 internal factor: labels p mod 2, identical
/// windows on both labels. Reduces to the plain Fibonacci scheme.
SchemeConfig preset_redundant_k2();

SchemeConfig preset_by_name(const std::string& name);

}  // namespace modelset
