#pragma once

#include <string>

#include "anspde/field.hpp"

namespace anspde {

/// ANSF binary snapshot: header {magic "ANSF", version u32, N1 N2 N3 u32,
/// L1 L2 L3 f64} followed by three component blocks of half-spectrum
/// coefficients, each coefficient a little-endian (re, im) pair of f64, in
/// row-major (j1, j2, j3) order. See README for the full layout.
void write_snapshot(const std::string& path, const VectorField& f);

VectorField read_snapshot(const std::string& path);

}  // namespace anspde
