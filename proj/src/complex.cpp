#include "pdlearn/complex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace pdlearn {

namespace {

double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Radius of the minimum enclosing ball of three planar points, by support
/// enumeration: the smallest valid diametral ball of a pair, else the
/// circumball.
double meb_radius3(const std::array<double, 3>& a, const std::array<double, 3>& b,
                   const std::array<double, 3>& c) {
  const std::array<const std::array<double, 3>*, 3> p = {&a, &b, &c};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const auto& u = *p[i];
    const auto& v = *p[(i + 1) % 3];
    const auto& w = *p[(i + 2) % 3];
    const std::array<double, 3> center = {(u[0] + v[0]) / 2, (u[1] + v[1]) / 2, (u[2] + v[2]) / 2};
    const double r = dist(u, v) / 2;
    if (dist(center, w) <= r * (1 + 1e-12) + 1e-300) best = std::min(best, r);
  }
  if (std::isfinite(best)) return best;

  // acute triangle: circumball
  const double d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
  if (d == 0.0) {
    // collinear fallback: the largest diametral ball encloses everything
    return std::max({dist(a, b), dist(b, c), dist(a, c)}) / 2;
  }
  const double a2 = a[0] * a[0] + a[1] * a[1];
  const double b2 = b[0] * b[0] + b[1] * b[1];
  const double c2 = c[0] * c[0] + c[1] * c[1];
  const double ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
  const double uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
  return dist({ux, uy, 0.0}, a);
}

struct ProtoSimplex {
  std::vector<int> verts;  // point indices, ascending
  double value;
};

void reject_duplicates(const PointCloud& pc, const char* who) {
  for (std::size_t i = 0; i < pc.points.size(); ++i)
    for (std::size_t j = i + 1; j < pc.points.size(); ++j)
      if (pc.points[i] == pc.points[j])
        throw std::invalid_argument(std::string(who) + ": duplicate points are not allowed");
}

FilteredComplex assemble_simplicial(const PointCloud& pc, std::vector<ProtoSimplex> protos) {
  std::sort(protos.begin(), protos.end(), [](const ProtoSimplex& a, const ProtoSimplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
    return a.verts < b.verts;
  });

  std::map<std::vector<int>, std::int64_t> ids;
  FilteredComplex fc;
  fc.cubical = false;
  fc.ambient_dim = pc.dim;
  fc.cells.reserve(protos.size());
  for (std::size_t i = 0; i < protos.size(); ++i) {
    const auto& ps = protos[i];
    FilteredCell cell;
    cell.dim = static_cast<int>(ps.verts.size()) - 1;
    cell.value = ps.value;
    for (int v : ps.verts) cell.vertices.push_back(pc.points[v]);
    if (ps.verts.size() > 1) {
      for (std::size_t drop = 0; drop < ps.verts.size(); ++drop) {
        std::vector<int> face;
        for (std::size_t k = 0; k < ps.verts.size(); ++k)
          if (k != drop) face.push_back(ps.verts[k]);
        cell.boundary.push_back(ids.at(face));
      }
      std::sort(cell.boundary.begin(), cell.boundary.end());
    }
    ids[ps.verts] = static_cast<std::int64_t>(i);
    fc.cells.push_back(std::move(cell));
  }
  return fc;
}

void enumerate_simplices(int m, int max_verts, const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> cur;
  // iterative depth-first enumeration of ascending index tuples
  std::function<void(int)> rec = [&](int start) {
    if (!cur.empty()) emit(cur);
    if (static_cast<int>(cur.size()) == max_verts) return;
    for (int v = start; v < m; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

void PointCloud::validate() const {
  if (points.empty()) throw std::invalid_argument("PointCloud: must contain at least one point");
  if (dim < 1 || dim > 3) throw std::invalid_argument("PointCloud: dimension must be 1..3");
}

FilteredComplex cech_filtration(const PointCloud& pc, int max_dim) {
  pc.validate();
  if (max_dim < 1) throw std::invalid_argument("cech_filtration: max_dim must be >= 1");
  if (pc.dim != 2)
    throw std::invalid_argument("cech_filtration: only planar point clouds (N=2) are supported");
  if (max_dim > 1)
    throw std::invalid_argument("cech_filtration: simplices above dimension 2 are not implemented");
  reject_duplicates(pc, "cech_filtration");

  const int m = static_cast<int>(pc.size());
  std::vector<ProtoSimplex> protos;
  enumerate_simplices(m, max_dim + 2, [&](const std::vector<int>& verts) {
    double value = 0.0;
    switch (verts.size()) {
      case 1:
        value = 0.0;
        break;
      case 2:
        value = dist(pc.points[verts[0]], pc.points[verts[1]]) / 2;
        break;
      default:
        value = meb_radius3(pc.points[verts[0]], pc.points[verts[1]], pc.points[verts[2]]);
        break;
    }
    protos.push_back({verts, value});
  });
  return assemble_simplicial(pc, std::move(protos));
}

FilteredComplex rips_filtration(const PointCloud& pc, int max_dim) {
  pc.validate();
  if (max_dim < 1) throw std::invalid_argument("rips_filtration: max_dim must be >= 1");
  reject_duplicates(pc, "rips_filtration");

  const int m = static_cast<int>(pc.size());
  std::vector<ProtoSimplex> protos;
  enumerate_simplices(m, max_dim + 2, [&](const std::vector<int>& verts) {
    double value = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        value = std::max(value, dist(pc.points[verts[i]], pc.points[verts[j]]) / 2);
    protos.push_back({verts, value});
  });
  return assemble_simplicial(pc, std::move(protos));
}

std::size_t CellFunction::cube_count() const {
  const std::size_t w = width, h = height;
  return (w + 1) * (h + 1) + w * (h + 1) + (w + 1) * h + w * h;
}

bool CellFunction::cube_valid(int x, int y, int type) const {
  const int xe = type & 1, ye = (type >> 1) & 1;
  return x >= 0 && y >= 0 && x <= width - xe && y <= height - ye && type >= 0 && type < 4;
}

std::size_t CellFunction::cube_index(int x, int y, int type) const {
  const std::size_t w = width, h = height;
  std::size_t base = 0;
  switch (type) {
    case 0:
      return base + static_cast<std::size_t>(y) * (w + 1) + x;
    case 1:
      base = (w + 1) * (h + 1);
      return base + static_cast<std::size_t>(y) * w + x;
    case 2:
      base = (w + 1) * (h + 1) + w * (h + 1);
      return base + static_cast<std::size_t>(y) * (w + 1) + x;
    default:
      base = (w + 1) * (h + 1) + w * (h + 1) + (w + 1) * h;
      return base + static_cast<std::size_t>(y) * w + x;
  }
}

CellFunction CellFunction::from_pixel_values(int width, int height,
                                             const std::vector<double>& pixel_values) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("CellFunction: dimensions must be positive");
  if (pixel_values.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("CellFunction: pixel value count does not match window");

  CellFunction f;
  f.width = width;
  f.height = height;
  f.values.assign(f.cube_count(), 0.0);
  f.source.assign(f.cube_count(), -1);
  for (int type = 0; type < 4; ++type) {
    const int xe = type & 1, ye = (type >> 1) & 1;
    for (int y = 0; y + ye <= height; ++y) {
      for (int x = 0; x + xe <= width; ++x) {
        double best = std::numeric_limits<double>::infinity();
        std::int32_t best_pixel = -1;
        for (int py = (ye ? y : y - 1); py <= y; ++py) {
          for (int px = (xe ? x : x - 1); px <= x; ++px) {
            if (px < 0 || px >= width || py < 0 || py >= height) continue;
            const std::int32_t flat = py * width + px;
            if (pixel_values[flat] < best) {
              best = pixel_values[flat];
              best_pixel = flat;
            }
          }
        }
        const std::size_t idx = f.cube_index(x, y, type);
        f.values[idx] = best;
        f.source[idx] = best_pixel;
      }
    }
  }
  return f;
}

void CellFunction::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("CellFunction: dimensions must be positive");
  if (values.size() != cube_count() || source.size() != cube_count())
    throw std::invalid_argument("CellFunction: value buffer does not match window");
  // every face must be bounded above by its cofaces
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double top = values[cube_index(x, y, 3)];
      const std::size_t faces[4] = {cube_index(x, y, 1), cube_index(x, y + 1, 1),
                                    cube_index(x, y, 2), cube_index(x + 1, y, 2)};
      for (std::size_t fidx : faces)
        if (values[fidx] > top)
          throw std::invalid_argument("CellFunction: face value exceeds coface value");
    }
  }
}

CellFunction signed_manhattan(const BinaryImage& img) {
  img.validate();
  const int w = img.width, h = img.height;
  const std::int64_t whites = img.count_white();
  if (whites == 0 || whites == static_cast<std::int64_t>(w) * h)
    throw std::invalid_argument("signed_manhattan: image must contain both colors");

  const int inf = w + h + 2;
  auto chamfer = [&](bool to_white) {
    std::vector<int> d(static_cast<std::size_t>(w) * h, inf);
    for (int i = 0; i < w * h; ++i)
      if ((img.pixels[i] != 0) == to_white) d[i] = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        int& v = d[static_cast<std::size_t>(y) * w + x];
        if (x > 0) v = std::min(v, d[static_cast<std::size_t>(y) * w + x - 1] + 1);
        if (y > 0) v = std::min(v, d[static_cast<std::size_t>(y - 1) * w + x] + 1);
      }
    for (int y = h - 1; y >= 0; --y)
      for (int x = w - 1; x >= 0; --x) {
        int& v = d[static_cast<std::size_t>(y) * w + x];
        if (x + 1 < w) v = std::min(v, d[static_cast<std::size_t>(y) * w + x + 1] + 1);
        if (y + 1 < h) v = std::min(v, d[static_cast<std::size_t>(y + 1) * w + x] + 1);
      }
    return d;
  };

  const std::vector<int> dist_to_black = chamfer(false);
  const std::vector<int> dist_to_white = chamfer(true);
  std::vector<double> pixel_values(static_cast<std::size_t>(w) * h);
  for (int i = 0; i < w * h; ++i)
    pixel_values[i] = img.pixels[i] ? -static_cast<double>(dist_to_black[i])
                                    : static_cast<double>(dist_to_white[i]);
  return CellFunction::from_pixel_values(w, h, pixel_values);
}

int FilteredComplex::max_cell_dim() const {
  int d = 0;
  for (const auto& c : cells) d = std::max(d, c.dim);
  return d;
}

void FilteredComplex::validate() const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (i > 0 && cells[i - 1].value > c.value)
      throw std::invalid_argument("FilteredComplex: values must be nondecreasing");
    const std::size_t expected = cubical ? 2 * static_cast<std::size_t>(c.dim)
                                         : static_cast<std::size_t>(c.dim) + (c.dim > 0 ? 1 : 0);
    if (c.dim > 0 && c.boundary.size() != expected)
      throw std::invalid_argument("FilteredComplex: boundary size does not match cell dimension");
    for (std::int64_t b : c.boundary) {
      if (b < 0 || static_cast<std::size_t>(b) >= i)
        throw std::invalid_argument("FilteredComplex: boundary cell does not precede its coface");
      if (cells[b].value > c.value)
        throw std::invalid_argument("FilteredComplex: face value exceeds coface value");
      if (cells[b].dim != c.dim - 1)
        throw std::invalid_argument("FilteredComplex: boundary entry is not a facet");
    }
  }
}

FilteredComplex cubical_filtration(const CellFunction& f) {
  f.validate();
  struct ProtoCube {
    double value;
    int dim;
    int x, y, type;
  };
  std::vector<ProtoCube> protos;
  protos.reserve(f.cube_count());
  for (int type = 0; type < 4; ++type) {
    const int xe = type & 1, ye = (type >> 1) & 1;
    const int dim = xe + ye;
    for (int y = 0; y + ye <= f.height; ++y)
      for (int x = 0; x + xe <= f.width; ++x)
        protos.push_back({f.values[f.cube_index(x, y, type)], dim, x, y, type});
  }
  std::sort(protos.begin(), protos.end(), [](const ProtoCube& a, const ProtoCube& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.type < b.type;
  });

  std::vector<std::int64_t> order_of(f.cube_count());
  for (std::size_t i = 0; i < protos.size(); ++i)
    order_of[f.cube_index(protos[i].x, protos[i].y, protos[i].type)] = static_cast<std::int64_t>(i);

  FilteredComplex fc;
  fc.cubical = true;
  fc.ambient_dim = 2;
  fc.cells.reserve(protos.size());
  for (const auto& p : protos) {
    FilteredCell cell;
    cell.dim = p.dim;
    cell.value = p.value;
    const std::int32_t src = f.source[f.cube_index(p.x, p.y, p.type)];
    cell.vertices.push_back({static_cast<double>(src % f.width), static_cast<double>(src / f.width), 0.0});
    switch (p.type) {
      case 1:
        cell.boundary = {order_of[f.cube_index(p.x, p.y, 0)], order_of[f.cube_index(p.x + 1, p.y, 0)]};
        break;
      case 2:
        cell.boundary = {order_of[f.cube_index(p.x, p.y, 0)], order_of[f.cube_index(p.x, p.y + 1, 0)]};
        break;
      case 3:
        cell.boundary = {order_of[f.cube_index(p.x, p.y, 1)], order_of[f.cube_index(p.x, p.y + 1, 1)],
                         order_of[f.cube_index(p.x, p.y, 2)], order_of[f.cube_index(p.x + 1, p.y, 2)]};
        break;
      default:
        break;
    }
    std::sort(cell.boundary.begin(), cell.boundary.end());
    fc.cells.push_back(std::move(cell));
  }
  return fc;
}

}  // namespace pdlearn
