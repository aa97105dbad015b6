#pragma once

#include "frontlim/field.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace frontlim {

/// Text format:
///   frontlim-field v1 dim=<d> extents=<n1[,n2]> origin=<x1[,x2]> h=<h>
/// followed by one line per grid row of whitespace-separated values.
/// Values are printed with 17 significant digits so reading back is exact.
void write_field(std::ostream& os, const ScalarField& f);
ScalarField read_field(std::istream& is, Boundary boundary = Boundary::Neumann);

/// CSV with header `x,value` (1D) or `x,y,value` (2D).
void write_field_csv(std::ostream& os, const ScalarField& f);

/// Shortest round-trip decimal rendering used by every text writer.
std::string format_double(double v);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

void save_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField load_field(const std::filesystem::path& path, Boundary boundary = Boundary::Neumann);

}  // namespace frontlim
