#pragma once

// Plain-text matrix format shared by every command:
//
//   m n
//   re,im re,im ... (n entries)
//   ... (m rows)
//
// Entries are written with 17 significant digits so that a write/read cycle
// reproduces every double exactly. LF line endings, no comments.

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "commfact/matrix_core.hpp"

namespace commfact {

/// 17 significant digits, scientific notation.
std::string format_real(double x);

void write_matrix(std::ostream& os, const ComplexMatrix& m);
std::string matrix_to_string(const ComplexMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

/// Throws ParseError on any deviation from the format or on non-finite values.
ComplexMatrix read_matrix(std::istream& is);
ComplexMatrix matrix_from_string(const std::string& text);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);

/// Point sets travel as m x 1 matrices.
ComplexMatrix points_as_column(std::span<const Complex> points);
std::vector<Complex> column_as_points(const ComplexMatrix& column);

} // namespace commfact
