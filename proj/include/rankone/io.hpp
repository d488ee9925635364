#pragma once

#include "rankone/operators.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace rankone {

struct AtomicSpectralMeasure;

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_double(double value);

/// Locale-independent parse of a complete token; throws FormatError.
double parse_double(std::string_view token);

using Window = std::variant<JacobiWindow, CMVWindow>;

/// Plain-text window format.
///
///   jacobi n_min n_max
///   <site> <b_site>        one line per site, n_min..n_max
///   <site> <a_site>        one line per bond, n_min..n_max-1
///
///   cmv j_min j_max bl_re bl_im br_re br_im
///   <j> <re> <im>          one line per coefficient, j_min..j_max-1
void write_window(std::ostream& out, const JacobiWindow& w);
void write_window(std::ostream& out, const CMVWindow& w);
void write_window(std::ostream& out, const Window& w);

Window read_window(std::istream& in);
Window read_window_file(const std::filesystem::path& path);
void write_window_file(const std::filesystem::path& path, const Window& w);

/// CSV with a `# kind: real-line|unit-circle` header line, a column header,
/// then one `location_re,location_im,weight` row per atom.
void write_measure_csv(std::ostream& out, const AtomicSpectralMeasure& mu);
AtomicSpectralMeasure read_measure_csv(std::istream& in);

}  // namespace rankone
