#include "frontlim/field_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace frontlim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw ConfigError("field header: bad number '" + item + "'");
  }
  return out;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << "frontlim-field v1 dim=" << g.dim() << " extents=" << g.nx();
  if (g.dim() == 2) os << ',' << g.ny();
  os << " origin=" << format_double(g.origin().x());
  if (g.dim() == 2) os << ',' << format_double(g.origin().y());
  os << " h=" << format_double(g.h()) << '\n';
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      if (i) os << ' ';
      os << format_double(f(i, j));
    }
    os << '\n';
  }
}

ScalarField read_field(std::istream& is, Boundary boundary) {
  std::string header;
  if (!std::getline(is, header)) throw ConfigError("field file: missing header");
  std::istringstream hs(header);
  std::string magic;
  std::string version;
  hs >> magic >> version;
  if (magic != "frontlim-field" || version != "v1") throw ConfigError("field file: bad magic line");
  int dim = 0;
  std::vector<double> extents;
  std::vector<double> origin;
  double h = 0.0;
  std::string kv;
  while (hs >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("field header: expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "dim") dim = std::stoi(val);
    else if (key == "extents") extents = parse_list(val);
    else if (key == "origin") origin = parse_list(val);
    else if (key == "h") h = std::stod(val);
    else throw ConfigError("field header: unknown key '" + key + "'");
  }
  if ((dim != 1 && dim != 2) || extents.size() != static_cast<std::size_t>(dim) ||
      origin.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("field header: inconsistent dim/extents/origin");
  }
  const Grid grid(dim, Point(origin[0], dim == 2 ? origin[1] : 0.0), h,
                  {static_cast<Index>(extents[0]), dim == 2 ? static_cast<Index>(extents[1]) : 1},
                  boundary);
  Eigen::ArrayXd values(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    std::string tok;
    if (!(is >> tok)) throw ConfigError("field file: too few values");
    std::size_t used = 0;
    values[k] = std::stod(tok, &used);
    if (used != tok.size()) throw ConfigError("field file: bad value '" + tok + "'");
  }
  return ScalarField(grid, std::move(values));
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << (g.dim() == 1 ? "x,value\n" : "x,y,value\n");
  for (Index k = 0; k < g.size(); ++k) {
    const Point p = g.node(k);
    os << format_double(p.x()) << ',';
    if (g.dim() == 2) os << format_double(p.y()) << ',';
    os << format_double(f[k]) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ostringstream os;
  write_field(os, f);
  write_file_atomic(path, os.str());
}

ScalarField load_field(const std::filesystem::path& path, Boundary boundary) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file " + path.string());
  return read_field(in, boundary);
}

}  // namespace frontlim
