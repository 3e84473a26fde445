#pragma once

#include <filesystem>
#include <iosfwd>

#include "symkit/field.hpp"

namespace symkit {

// Line-oriented text format:
//   SYMKIT-FIELD 1        (SYMKIT-SET 1 for masks)
//   d
//   n_1 ... n_d
//   h                     shortest round-trip decimal
//   one value per line, row-major, last axis fastest
// Values are written in shortest round-trip form, so load(save(f)) is bit-exact.

void write_field(std::ostream &os, const ScalarField &f);
void write_set(std::ostream &os, const GridSet &a);
/// Throws ParseError naming the offending line.
ScalarField read_field(std::istream &is);
GridSet read_set(std::istream &is);

void save(const ScalarField &f, const std::filesystem::path &path);
void save(const GridSet &a, const std::filesystem::path &path);
ScalarField load_field(const std::filesystem::path &path);
GridSet load_set(const std::filesystem::path &path);

} // namespace symkit
