#include "rankone/io.hpp"

#include "rankone/errors.hpp"
#include "rankone/spectral.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace rankone {
namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

long parse_long(std::string_view token) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw FormatError("expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

// Next non-blank line that is not a comment.
bool next_line(std::istream& in, std::vector<std::string>& fields, int& line_no) {
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    fields = tokens(line);
    if (!fields.empty()) return true;
  }
  return false;
}

void expect_fields(const std::vector<std::string>& fields, std::size_t count, int line_no) {
  if (fields.size() != count) {
    throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(count) + " fields, got " +
                      std::to_string(fields.size()));
  }
}

void expect_index(long got, long want, int line_no) {
  if (got != want) {
    throw FormatError("line " + std::to_string(line_no) + ": expected index " + std::to_string(want) + ", got " +
                      std::to_string(got));
  }
}

JacobiWindow read_jacobi_body(std::istream& in, const std::vector<std::string>& header, int& line_no) {
  expect_fields(header, 3, line_no);
  JacobiWindow w;
  w.n_min = parse_long(header[1]);
  w.n_max = parse_long(header[2]);
  if (w.n_max < w.n_min) throw FormatError("jacobi header needs n_min <= n_max");

  std::vector<std::string> f;
  for (Site n = w.n_min; n <= w.n_max; ++n) {
    if (!next_line(in, f, line_no)) throw FormatError("jacobi window truncated in the diagonal block");
    expect_fields(f, 2, line_no);
    expect_index(parse_long(f[0]), n, line_no);
    w.b.push_back(parse_double(f[1]));
  }
  for (Site n = w.n_min; n < w.n_max; ++n) {
    if (!next_line(in, f, line_no)) throw FormatError("jacobi window truncated in the off-diagonal block");
    expect_fields(f, 2, line_no);
    expect_index(parse_long(f[0]), n, line_no);
    w.a.push_back(parse_double(f[1]));
  }
  return w;
}

CMVWindow read_cmv_body(std::istream& in, const std::vector<std::string>& header, int& line_no) {
  expect_fields(header, 7, line_no);
  CMVWindow w;
  w.j_min = parse_long(header[1]);
  w.j_max = parse_long(header[2]);
  w.boundary_left = {parse_double(header[3]), parse_double(header[4])};
  w.boundary_right = {parse_double(header[5]), parse_double(header[6])};
  if (w.j_max <= w.j_min) throw FormatError("cmv header needs j_min < j_max");

  std::vector<std::string> f;
  for (Site j = w.j_min; j < w.j_max; ++j) {
    if (!next_line(in, f, line_no)) throw FormatError("cmv window truncated");
    expect_fields(f, 3, line_no);
    expect_index(parse_long(f[0]), j, line_no);
    w.alpha.emplace_back(parse_double(f[1]), parse_double(f[2]));
  }
  return w;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw FormatError("cannot format value");
  return std::string(buffer, ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw FormatError("expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

void write_window(std::ostream& out, const JacobiWindow& w) {
  out << "jacobi " << w.n_min << ' ' << w.n_max << '\n';
  for (std::size_t k = 0; k < w.b.size(); ++k) out << w.n_min + static_cast<Site>(k) << ' ' << format_double(w.b[k]) << '\n';
  for (std::size_t k = 0; k < w.a.size(); ++k) out << w.n_min + static_cast<Site>(k) << ' ' << format_double(w.a[k]) << '\n';
}

void write_window(std::ostream& out, const CMVWindow& w) {
  out << "cmv " << w.j_min << ' ' << w.j_max << ' ' << format_double(w.boundary_left.real()) << ' '
      << format_double(w.boundary_left.imag()) << ' ' << format_double(w.boundary_right.real()) << ' '
      << format_double(w.boundary_right.imag()) << '\n';
  for (std::size_t k = 0; k < w.alpha.size(); ++k) {
    out << w.j_min + static_cast<Site>(k) << ' ' << format_double(w.alpha[k].real()) << ' '
        << format_double(w.alpha[k].imag()) << '\n';
  }
}

void write_window(std::ostream& out, const Window& w) {
  std::visit([&out](const auto& window) { write_window(out, window); }, w);
}

Window read_window(std::istream& in) {
  int line_no = 0;
  std::vector<std::string> header;
  if (!next_line(in, header, line_no)) throw FormatError("window file is empty");
  Window w;
  if (header[0] == "jacobi") {
    w = read_jacobi_body(in, header, line_no);
  } else if (header[0] == "cmv") {
    w = read_cmv_body(in, header, line_no);
  } else {
    throw FormatError("unknown window type '" + header[0] + "'");
  }
  std::vector<std::string> trailing;
  if (next_line(in, trailing, line_no)) throw FormatError("line " + std::to_string(line_no) + ": trailing data");
  return w;
}

Window read_window_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open window file " + path.string());
  return read_window(in);
}

void write_window_file(const std::filesystem::path& path, const Window& w) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write window file " + path.string());
  write_window(out, w);
}

void write_measure_csv(std::ostream& out, const AtomicSpectralMeasure& mu) {
  out << "# kind: " << to_string(mu.kind) << '\n';
  out << "location_re,location_im,weight\n";
  for (const Atom& atom : mu.atoms) {
    out << format_double(atom.location.real()) << ',' << format_double(atom.location.imag()) << ','
        << format_double(atom.weight) << '\n';
  }
}

AtomicSpectralMeasure read_measure_csv(std::istream& in) {
  AtomicSpectralMeasure mu;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# kind: ", 0) != 0) throw FormatError("measure CSV needs a kind header");
  const std::string kind = line.substr(8);
  if (kind == "real-line") {
    mu.kind = SupportKind::real_line;
  } else if (kind == "unit-circle") {
    mu.kind = SupportKind::unit_circle;
  } else {
    throw FormatError("unknown measure kind '" + kind + "'");
  }
  if (!std::getline(in, line) || line != "location_re,location_im,weight") {
    throw FormatError("measure CSV needs the column header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) break;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 3) throw FormatError("measure CSV row needs three cells");
    mu.atoms.push_back({{parse_double(cells[0]), parse_double(cells[1])}, parse_double(cells[2])});
  }
  return mu;
}

}  // namespace rankone
