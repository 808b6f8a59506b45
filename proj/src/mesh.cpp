#include "sldg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "sldg/errors.hpp"

namespace sldg {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

}  // namespace

ElementMetrics element_metrics(Vec2 a, Vec2 b, Vec2 c) {
  const double area = 0.5 * std::abs(orient2d(a, b, c));
  const double perimeter = distance(a, b) + distance(b, c) + distance(c, a);
  if (!(area > 1e-14 * perimeter * perimeter)) throw DegenerateError("element_metrics: zero-area triangle");
  return {area, perimeter, 2.0 * area / perimeter};
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)) {
  const int nv = static_cast<int>(vertices_.size());
  for (Vec2 p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw TopologyError("mesh: non-finite vertex");
    bbox_.expand(p);
  }
  elements_.resize(triangles.size());
  std::unordered_map<std::uint64_t, std::pair<int, int>> first_seen;
  std::unordered_map<std::uint64_t, int> use_count;
  r_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto tri = triangles[k];
    for (int v : tri)
      if (v < 0 || v >= nv) throw TopologyError("mesh: vertex index out of range in element " + std::to_string(k));
    if (orient2d(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) < 0.0) std::swap(tri[1], tri[2]);
    Element& e = elements_[k];
    e.id = static_cast<int>(k);
    e.corner_ids = tri;
    const Vec2 a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
    const ElementMetrics m = element_metrics(a, b, c);
    e.area = m.area;
    e.perimeter = m.perimeter;
    e.r = m.r;
    e.centroid = (a + b + c) / 3.0;
    e.diameter = std::max({distance(a, b), distance(b, c), distance(c, a)});
    e.bbox.expand(a);
    e.bbox.expand(b);
    e.bbox.expand(c);
    total_area_ += e.area;
    r_max_ = std::max(r_max_, e.r);
    r_min_ = std::min(r_min_, e.r);
    for (int i = 0; i < 3; ++i) {
      const auto key = edge_key(tri[i], tri[(i + 1) % 3]);
      const int count = ++use_count[key];
      if (count > 2) throw TopologyError("mesh: edge shared by more than two elements");
      if (count == 1) {
        first_seen[key] = {e.id, i};
      } else {
        auto [other, li] = first_seen[key];
        e.neighbor_ids[i] = other;
        elements_[other].neighbor_ids[li] = e.id;
        ++interior_edges_;
      }
    }
  }
  if (elements_.empty()) r_min_ = 0.0;
  for (const auto& e : elements_)
    for (int i = 0; i < 3; ++i)
      if (e.neighbor_ids[i] < 0) boundary_edges_.emplace_back(e.id, i);
}

std::array<Vec2, 3> Mesh::corners(int id) const {
  const auto& c = elements_[id].corner_ids;
  return {vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]};
}

bool Mesh::is_boundary_element(int id) const {
  const auto& n = elements_[id].neighbor_ids;
  return n[0] < 0 || n[1] < 0 || n[2] < 0;
}

Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  // Next non-blank line split into tokens.
  auto next = [&](const char* what) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw ParseError(std::string("unexpected end of file, expected ") + what, line_no + 1);
  };
  auto header = next("header");
  long nv = -1, ne = -1;
  if (!(header >> nv >> ne) || nv < 3 || ne < 1) throw ParseError("bad header, expected 'nv ne'", line_no);
  std::vector<Vec2> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    auto ls = next("vertex");
    Vec2 p;
    std::string extra;
    if (!(ls >> p.x >> p.y) || (ls >> extra)) throw ParseError("bad vertex line, expected 'x y'", line_no);
    verts.push_back(p);
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(ne);
  for (long i = 0; i < ne; ++i) {
    auto ls = next("element");
    long a, b, c;
    std::string extra;
    if (!(ls >> a >> b >> c) || (ls >> extra)) throw ParseError("bad element line, expected 'i0 i1 i2'", line_no);
    for (long v : {a, b, c})
      if (v < 0 || v >= nv) throw ParseError("vertex index out of range", line_no);
    if (a == b || b == c || a == c) throw ParseError("repeated vertex in element", line_no);
    tris.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }
  try {
    return Mesh(std::move(verts), std::move(tris));
  } catch (const DegenerateError& e) {
    throw ParseError(e.what(), line_no);
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open mesh file '" + path + "'", 0);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mesh(ss.str());
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write mesh file '" + path + "'");
  f << mesh.vertices().size() << ' ' << mesh.num_elements() << '\n' << std::setprecision(17);
  for (Vec2 p : mesh.vertices()) f << p.x << ' ' << p.y << '\n';
  for (const auto& e : mesh.elements())
    f << e.corner_ids[0] << ' ' << e.corner_ids[1] << ' ' << e.corner_ids[2] << '\n';
}

Mesh refine_midpoint(const Mesh& mesh, std::optional<double> snap_radius) {
  std::vector<Vec2> verts = mesh.vertices();
  std::unordered_map<std::uint64_t, int> mid_of;
  auto midpoint = [&](const Element& e, int i) {
    const int a = e.corner_ids[i], b = e.corner_ids[(i + 1) % 3];
    const auto key = edge_key(a, b);
    if (auto it = mid_of.find(key); it != mid_of.end()) return it->second;
    Vec2 m = 0.5 * (verts[a] + verts[b]);
    if (snap_radius && e.neighbor_ids[i] < 0) m = m * (*snap_radius / norm(m));
    verts.push_back(m);
    const int id = static_cast<int>(verts.size()) - 1;
    mid_of[key] = id;
    return id;
  };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.elements().size());
  for (const auto& e : mesh.elements()) {
    const auto& c = e.corner_ids;
    const int m01 = midpoint(e, 0), m12 = midpoint(e, 1), m20 = midpoint(e, 2);
    tris.push_back({c[0], m01, m20});
    tris.push_back({m01, c[1], m12});
    tris.push_back({m20, m12, c[2]});
    tris.push_back({m01, m12, m20});
  }
  return Mesh(std::move(verts), std::move(tris));
}

Mesh circle_fan_mesh(int level, double radius) {
  if (level < 0) throw ParameterError("circle_fan_mesh: negative level");
  if (!(radius > 0.0)) throw ParameterError("circle_fan_mesh: radius must be positive");
  std::vector<Vec2> verts{{0.0, 0.0}};
  std::vector<std::array<int, 3>> tris;
  for (int k = 0; k < 6; ++k) {
    const double th = k * std::numbers::pi / 3.0;
    verts.push_back({radius * std::cos(th), radius * std::sin(th)});
  }
  for (int k = 0; k < 6; ++k) tris.push_back({0, 1 + k, 1 + (k + 1) % 6});
  Mesh m(std::move(verts), std::move(tris));
  for (int l = 0; l < level; ++l) m = refine_midpoint(m, radius);
  return m;
}

Mesh load_or_generate(const std::string& spec, double radius) {
  if (spec.rfind("level:", 0) == 0) {
    int level = 0;
    try {
      level = std::stoi(spec.substr(6));
    } catch (const std::exception&) {
      throw ParameterError("bad mesh level in '" + spec + "'");
    }
    return circle_fan_mesh(level, radius);
  }
  return load_mesh(spec);
}

double default_bin_size(const Mesh& mesh) {
  double sum = 0.0;
  for (const auto& e : mesh.elements()) sum += e.diameter;
  return 2.0 * sum / std::max(1, mesh.num_elements());
}

AuxGrid build_aux_grid(const Mesh& mesh, double target_bin_size) {
  if (!(target_bin_size > 0.0)) throw ParameterError("build_aux_grid: bin size must be positive");
  if (mesh.num_elements() == 0) throw ParameterError("build_aux_grid: empty mesh");
  AuxGrid g;
  const BBox& box = mesh.bbox();
  const Vec2 ext = box.hi - box.lo;
  g.origin = box.lo;
  g.nx = std::max(1, static_cast<int>(std::ceil(ext.x / target_bin_size)));
  g.ny = std::max(1, static_cast<int>(std::ceil(ext.y / target_bin_size)));
  g.cell_dx = ext.x > 0.0 ? ext.x / g.nx : 1.0;
  g.cell_dy = ext.y > 0.0 ? ext.y / g.ny : 1.0;
  g.bins.assign(static_cast<std::size_t>(g.nx) * g.ny, {});
  for (const auto& e : mesh.elements()) {
    const int ix0 = std::clamp(static_cast<int>(std::floor((e.bbox.lo.x - g.origin.x) / g.cell_dx)), 0, g.nx - 1);
    const int ix1 = std::clamp(static_cast<int>(std::floor((e.bbox.hi.x - g.origin.x) / g.cell_dx)), 0, g.nx - 1);
    const int iy0 = std::clamp(static_cast<int>(std::floor((e.bbox.lo.y - g.origin.y) / g.cell_dy)), 0, g.ny - 1);
    const int iy1 = std::clamp(static_cast<int>(std::floor((e.bbox.hi.y - g.origin.y) / g.cell_dy)), 0, g.ny - 1);
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix) g.bins[static_cast<std::size_t>(iy) * g.nx + ix].push_back(e.id);
  }
  return g;
}

std::vector<int> AuxGrid::candidates_for_box(const BBox& box) const {
  std::vector<int> out;
  if (box.empty() || nx == 0) return out;
  const Vec2 hi{origin.x + nx * cell_dx, origin.y + ny * cell_dy};
  if (box.hi.x < origin.x || box.hi.y < origin.y || box.lo.x > hi.x || box.lo.y > hi.y) return out;
  const int ix0 = std::clamp(static_cast<int>(std::floor((box.lo.x - origin.x) / cell_dx)), 0, nx - 1);
  const int ix1 = std::clamp(static_cast<int>(std::floor((box.hi.x - origin.x) / cell_dx)), 0, nx - 1);
  const int iy0 = std::clamp(static_cast<int>(std::floor((box.lo.y - origin.y) / cell_dy)), 0, ny - 1);
  const int iy1 = std::clamp(static_cast<int>(std::floor((box.hi.y - origin.y) / cell_dy)), 0, ny - 1);
  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix) {
      const auto& bin = bins[static_cast<std::size_t>(iy) * nx + ix];
      out.insert(out.end(), bin.begin(), bin.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sldg
