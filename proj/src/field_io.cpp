#include "symkit/field_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace symkit {
namespace {

constexpr std::string_view kFieldTag = "SYMKIT-FIELD 1";
constexpr std::string_view kSetTag = "SYMKIT-SET 1";

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

class LineReader {
public:
  explicit LineReader(std::istream &is) : is_(is) {}

  std::string next(const char *what) {
    std::string line;
    if (!std::getline(is_, line))
      throw ParseError(std::string("unexpected end of file, expected ") + what, line_ + 1);
    ++line_;
    return std::string(trim(line));
  }
  bool eof_after_whitespace() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      if (!trim(line).empty())
        return false;
    }
    return true;
  }
  std::size_t line() const { return line_; }

private:
  std::istream &is_;
  std::size_t line_ = 0;
};

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("malformed number '" + std::string(s) + "'", line);
  if (!std::isfinite(v))
    throw ParseError("non-finite value", line);
  return v;
}

long parse_int(std::string_view s, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("malformed integer '" + std::string(s) + "'", line);
  return v;
}

struct Header {
  Grid grid;
};

Header read_header(LineReader &in, std::string_view tag) {
  if (in.next("format tag") != tag)
    throw ParseError("expected format tag '" + std::string(tag) + "'", in.line());
  const long d = parse_int(in.next("dimension"), in.line());
  if (d < 1 || d > 3)
    throw ParseError("unsupported dimension " + std::to_string(d), in.line());

  std::istringstream ext(in.next("extents"));
  Index n{1, 1, 1};
  std::string tok;
  int k = 0;
  while (ext >> tok) {
    if (k >= d)
      throw ParseError("dimension mismatch: more extents than d", in.line());
    const long v = parse_int(tok, in.line());
    if (v < 1)
      throw ParseError("extents must be positive", in.line());
    n[k++] = int(v);
  }
  if (k != d)
    throw ParseError("dimension mismatch: " + std::to_string(k) + " extents for d=" +
                         std::to_string(d),
                     in.line());
  const double h = parse_double(in.next("spacing"), in.line());
  if (!(h > 0.0))
    throw ParseError("spacing must be positive", in.line());
  return {Grid(int(d), n, h)};
}

std::vector<double> read_values(LineReader &in, const Grid &g) {
  std::vector<double> v;
  v.reserve(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    std::string line;
    try {
      line = in.next("cell value");
    } catch (const ParseError &) {
      throw ParseError("cell-count mismatch: expected " + std::to_string(g.size()) +
                           " values, found " + std::to_string(c),
                       in.line() + 1);
    }
    v.push_back(parse_double(line, in.line()));
  }
  if (!in.eof_after_whitespace())
    throw ParseError("cell-count mismatch: trailing data after " + std::to_string(g.size()) +
                         " values",
                     in.line());
  return v;
}

void write_header(std::ostream &os, std::string_view tag, const Grid &g) {
  os << tag << '\n' << g.dim << '\n';
  for (int k = 0; k < g.dim; ++k)
    os << (k ? " " : "") << g.extents[k];
  os << '\n' << shortest(g.spacing) << '\n';
}

} // namespace

void write_field(std::ostream &os, const ScalarField &f) {
  write_header(os, kFieldTag, f.grid());
  for (double v : f.values())
    os << shortest(v) << '\n';
}

void write_set(std::ostream &os, const GridSet &a) {
  write_header(os, kSetTag, a.grid());
  for (auto m : a.mask())
    os << (m ? '1' : '0') << '\n';
}

ScalarField read_field(std::istream &is) {
  LineReader in(is);
  const auto hdr = read_header(in, kFieldTag);
  return ScalarField(hdr.grid, read_values(in, hdr.grid));
}

GridSet read_set(std::istream &is) {
  LineReader in(is);
  const auto hdr = read_header(in, kSetTag);
  std::vector<std::uint8_t> mask(hdr.grid.size());
  for (std::size_t c = 0; c < mask.size(); ++c) {
    std::string line;
    try {
      line = in.next("mask value");
    } catch (const ParseError &) {
      throw ParseError("cell-count mismatch: expected " + std::to_string(mask.size()) +
                           " values, found " + std::to_string(c),
                       in.line() + 1);
    }
    if (line == "0")
      mask[c] = 0;
    else if (line == "1")
      mask[c] = 1;
    else
      throw ParseError("set values must be 0 or 1", in.line());
  }
  if (!in.eof_after_whitespace())
    throw ParseError("cell-count mismatch: trailing data", in.line());
  return GridSet(hdr.grid, std::move(mask));
}

namespace {
template <class T, class W> void save_impl(const T &obj, const std::filesystem::path &path, W w) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  w(os, obj);
  if (!os)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}
std::ifstream open_in(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open '" + path.string() + "'");
  return is;
}
} // namespace

void save(const ScalarField &f, const std::filesystem::path &path) { save_impl(f, path, write_field); }
void save(const GridSet &a, const std::filesystem::path &path) { save_impl(a, path, write_set); }

ScalarField load_field(const std::filesystem::path &path) {
  auto is = open_in(path);
  return read_field(is);
}

GridSet load_set(const std::filesystem::path &path) {
  auto is = open_in(path);
  return read_set(is);
}

} // namespace symkit
