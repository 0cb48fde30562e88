#include "nlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlab/util.hpp"

namespace nlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> parse_number_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) next = s.size();
    const std::string tok = s.substr(pos, next - pos);
    if (tok.empty()) throw std::invalid_argument("empty number in '" + s + "'");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw std::invalid_argument("bad number '" + tok + "'");
    out.push_back(v);
    pos = next + 1;
    if (next == s.size()) break;
  }
  return out;
}

double point_segment_distance(double px, double py, double ax, double ay,
                              double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = ax + t * dx - px, qy = ay + t * dy - py;
  return std::sqrt(qx * qx + qy * qy);
}

}  // namespace

// --- Shape -------------------------------------------------------------------

Shape Shape::rectangle(double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("rectangle: sides must be positive");
  Shape s;
  s.kind_ = Kind::Rectangle;
  s.params_ = {a, b, 0, 0};
  return s;
}

Shape Shape::disc(double r) {
  if (!(r > 0)) throw std::invalid_argument("disc: radius must be positive");
  Shape s;
  s.kind_ = Kind::Disc;
  s.params_ = {r, 0, 0, 0};
  return s;
}

Shape Shape::annulus(double r_inner, double r_outer) {
  if (!(0 < r_inner && r_inner < r_outer))
    throw std::invalid_argument("annulus: need 0 < r_inner < r_outer");
  Shape s;
  s.kind_ = Kind::Annulus;
  s.params_ = {r_inner, r_outer, 0, 0};
  return s;
}

Shape Shape::disc_with_holes(double r, std::vector<Hole> holes) {
  if (!(r > 0)) throw std::invalid_argument("disc: radius must be positive");
  for (const Hole& hole : holes)
    if (!(hole.r > 0))
      throw std::invalid_argument("hole radii must be positive");
  Shape s;
  s.kind_ = Kind::DiscWithHoles;
  s.params_ = {r, 0, 0, 0};
  s.holes_ = std::move(holes);
  return s;
}

Shape Shape::polygon(std::vector<std::array<double, 2>> vertices) {
  if (vertices.size() < 3)
    throw std::invalid_argument("polygon: need at least 3 vertices");
  Shape s;
  s.kind_ = Kind::Polygon;
  s.verts_ = std::move(vertices);
  return s;
}

Shape Shape::parse(const std::string& descriptor) {
  const std::size_t colon = descriptor.find(':');
  const std::string name = descriptor.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  try {
    if (name == "square") {
      if (!args.empty()) {
        auto v = parse_number_list(args, ',');
        if (v.size() != 1) throw std::invalid_argument("square takes one side");
        return rectangle(v[0], v[0]);
      }
      return rectangle(1, 1);
    }
    if (name == "rectangle") {
      auto v = parse_number_list(args, ',');
      if (v.size() != 2)
        throw std::invalid_argument("rectangle:A,B takes two sides");
      return rectangle(v[0], v[1]);
    }
    if (name == "disc") {
      auto v = parse_number_list(args, ',');
      if (v.size() != 1) throw std::invalid_argument("disc:R takes one radius");
      return disc(v[0]);
    }
    if (name == "annulus") {
      auto v = parse_number_list(args, ',');
      if (v.size() != 2)
        throw std::invalid_argument("annulus:RIN,ROUT takes two radii");
      return annulus(v[0], v[1]);
    }
    if (name == "disc-with-holes") {
      std::vector<std::string> groups;
      std::size_t pos = 0;
      while (pos <= args.size()) {
        std::size_t next = args.find(';', pos);
        if (next == std::string::npos) next = args.size();
        groups.push_back(args.substr(pos, next - pos));
        pos = next + 1;
        if (next == args.size()) break;
      }
      if (groups.empty())
        throw std::invalid_argument("disc-with-holes:R;CX,CY,HR;...");
      auto rv = parse_number_list(groups[0], ',');
      if (rv.size() != 1)
        throw std::invalid_argument("disc-with-holes: first group is R");
      std::vector<Hole> holes;
      for (std::size_t g = 1; g < groups.size(); ++g) {
        auto hv = parse_number_list(groups[g], ',');
        if (hv.size() != 3)
          throw std::invalid_argument("hole group must be CX,CY,HR");
        holes.push_back({hv[0], hv[1], hv[2]});
      }
      return disc_with_holes(rv[0], std::move(holes));
    }
    if (name == "polygon") {
      std::vector<std::array<double, 2>> verts;
      std::size_t pos = 0;
      while (pos <= args.size()) {
        std::size_t next = args.find(';', pos);
        if (next == std::string::npos) next = args.size();
        auto v = parse_number_list(args.substr(pos, next - pos), ',');
        if (v.size() != 2)
          throw std::invalid_argument("polygon vertex must be X,Y");
        verts.push_back({v[0], v[1]});
        pos = next + 1;
        if (next == args.size()) break;
      }
      return polygon(std::move(verts));
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("shape '" + descriptor + "': " + e.what());
  }
  throw std::invalid_argument(
      "unknown shape '" + name +
      "' (expected square, rectangle:A,B, disc:R, annulus:RIN,ROUT, "
      "disc-with-holes:R;CX,CY,HR;..., polygon:X1,Y1;X2,Y2;...)");
}

bool Shape::contains(double x, double y) const {
  // Fatten every boundary by a relative 1e-12 so that grid nodes whose
  // coordinates land on a wall up to floating-point rounding are classified
  // as wall nodes no matter which side the rounding fell on (see header).
  constexpr double kBoundaryEps = 1e-12;
  switch (kind_) {
    case Kind::Rectangle: {
      const double eps = kBoundaryEps * std::max(params_[0], params_[1]);
      return x > eps && x < params_[0] - eps && y > eps && y < params_[1] - eps;
    }
    case Kind::Disc: {
      const double r = params_[0] * (1 - kBoundaryEps);
      return x * x + y * y < r * r;
    }
    case Kind::Annulus: {
      const double rin = params_[0] * (1 + kBoundaryEps);
      const double rout = params_[1] * (1 - kBoundaryEps);
      const double d2 = x * x + y * y;
      return d2 > rin * rin && d2 < rout * rout;
    }
    case Kind::DiscWithHoles: {
      const double rout = params_[0] * (1 - kBoundaryEps);
      if (x * x + y * y >= rout * rout) return false;
      for (const Hole& hole : holes_) {
        const double dx = x - hole.cx, dy = y - hole.cy;
        const double hr = hole.r * (1 + kBoundaryEps);
        if (dx * dx + dy * dy <= hr * hr) return false;
      }
      return true;
    }
    case Kind::Polygon: {
      double scale = 1;
      for (const auto& v : verts_)
        scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
      const double eps = 1e-12 * scale;
      const std::size_t n = verts_.size();
      // Strict interior: points within eps of an edge count as boundary.
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (point_segment_distance(x, y, verts_[j][0], verts_[j][1],
                                   verts_[i][0], verts_[i][1]) <= eps)
          return false;
      }
      bool in = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double yi = verts_[i][1], yj = verts_[j][1];
        if ((yi > y) != (yj > y)) {
          const double xc = verts_[i][0] +
                            (y - yi) / (yj - yi) * (verts_[j][0] - verts_[i][0]);
          if (x < xc) in = !in;
        }
      }
      return in;
    }
  }
  return false;
}

std::array<double, 4> Shape::bounding_box() const {
  switch (kind_) {
    case Kind::Rectangle:
      return {0, params_[0], 0, params_[1]};
    case Kind::Disc:
    case Kind::DiscWithHoles:
      return {-params_[0], params_[0], -params_[0], params_[0]};
    case Kind::Annulus:
      return {-params_[1], params_[1], -params_[1], params_[1]};
    case Kind::Polygon: {
      double xmin = verts_[0][0], xmax = xmin, ymin = verts_[0][1], ymax = ymin;
      for (const auto& v : verts_) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
      }
      return {xmin, xmax, ymin, ymax};
    }
  }
  return {0, 0, 0, 0};
}

double Shape::analytic_area() const {
  switch (kind_) {
    case Kind::Rectangle:
      return params_[0] * params_[1];
    case Kind::Disc:
      return kPi * params_[0] * params_[0];
    case Kind::Annulus:
      return kPi * (params_[1] * params_[1] - params_[0] * params_[0]);
    case Kind::DiscWithHoles: {
      // Assumes holes are disjoint and strictly inside the disc.
      double a = kPi * params_[0] * params_[0];
      for (const Hole& hole : holes_) a -= kPi * hole.r * hole.r;
      return a;
    }
    case Kind::Polygon: {
      double twice = 0;
      const std::size_t n = verts_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        twice += verts_[j][0] * verts_[i][1] - verts_[i][0] * verts_[j][1];
      return std::abs(twice) / 2;
    }
  }
  return 0;
}

std::pair<double, double> Shape::rectangle_sides() const {
  if (kind_ != Kind::Rectangle)
    throw std::invalid_argument("rectangle_sides: shape is not a rectangle");
  return {params_[0], params_[1]};
}

std::string Shape::describe() const {
  auto f = [](double v) { return format_double(v); };
  switch (kind_) {
    case Kind::Rectangle:
      return "rectangle:" + f(params_[0]) + "," + f(params_[1]);
    case Kind::Disc:
      return "disc:" + f(params_[0]);
    case Kind::Annulus:
      return "annulus:" + f(params_[0]) + "," + f(params_[1]);
    case Kind::DiscWithHoles: {
      std::string s = "disc-with-holes:" + f(params_[0]);
      for (const Hole& hole : holes_)
        s += ";" + f(hole.cx) + "," + f(hole.cy) + "," + f(hole.r);
      return s;
    }
    case Kind::Polygon: {
      std::string s = "polygon:";
      for (std::size_t i = 0; i < verts_.size(); ++i) {
        if (i) s += ";";
        s += f(verts_[i][0]) + "," + f(verts_[i][1]);
      }
      return s;
    }
  }
  return "";
}

// --- DomainGrid ----------------------------------------------------------------

std::int64_t DomainGrid::interior_count() const {
  std::int64_t n = 0;
  for (std::uint8_t m : mask) n += m;
  return n;
}

double DomainGrid::area() const { return h * h * interior_count(); }

std::vector<std::uint8_t> DomainGrid::to_pgm_pixels() const {
  std::vector<std::uint8_t> px(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] ? 255 : 0;
  return px;
}

DomainGrid rasterize(const Shape& shape, double h) {
  if (!(h > 0)) throw std::invalid_argument("rasterize: h must be positive");
  const auto bb = shape.bounding_box();
  const double w = bb[1] - bb[0], ht = bb[3] - bb[2];
  // Node-aligned lattice: xmin itself is a cell center, so strict interior
  // tests exclude boundary-coincident nodes and axis-aligned walls land
  // exactly on the boundary. One-cell exterior pad on every side.
  const int ncx = static_cast<int>(std::floor(w / h + 1e-9)) + 1;
  const int ncy = static_cast<int>(std::floor(ht / h + 1e-9)) + 1;
  DomainGrid g;
  g.h = h;
  g.cols = ncx + 2;
  g.rows = ncy + 2;
  g.x0 = bb[0] - h;
  g.y0 = bb[2] - h;
  g.mask.assign(static_cast<std::size_t>(g.rows) * g.cols, 0);
  for (int i = 1; i + 1 < g.rows; ++i)
    for (int j = 1; j + 1 < g.cols; ++j)
      g.mask[g.idx(i, j)] = shape.contains(g.x(j), g.y(i)) ? 1 : 0;
  if (g.interior_count() == 0)
    throw std::invalid_argument(
        "rasterize: no interior cells (h too coarse for " + shape.describe() +
        ")");
  return g;
}

// --- Connected components --------------------------------------------------------

ComponentSet connected_components(const std::vector<std::uint8_t>& mask,
                                  int rows, int cols, double h) {
  if (mask.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("connected_components: mask size mismatch");
  ComponentSet cs;
  cs.rows = rows;
  cs.cols = cols;
  cs.h = h;
  cs.labels.assign(mask.size(), 0);
  std::vector<std::int64_t> stack;
  for (std::int64_t start = 0; start < static_cast<std::int64_t>(mask.size());
       ++start) {
    if (!mask[start] || cs.labels[start]) continue;
    const std::int32_t label = ++cs.count;
    std::int64_t cells = 0;
    stack.assign(1, start);
    cs.labels[start] = label;
    while (!stack.empty()) {
      const std::int64_t k = stack.back();
      stack.pop_back();
      ++cells;
      const int i = static_cast<int>(k / cols), j = static_cast<int>(k % cols);
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int d = 0; d < 4; ++d) {
        if (ni[d] < 0 || ni[d] >= rows || nj[d] < 0 || nj[d] >= cols) continue;
        const std::int64_t nk =
            static_cast<std::int64_t>(ni[d]) * cols + nj[d];
        if (mask[nk] && !cs.labels[nk]) {
          cs.labels[nk] = label;
          stack.push_back(nk);
        }
      }
    }
    cs.cell_count.push_back(cells);
  }
  return cs;
}

double ComponentSet::area(int label) const {
  if (label < 1 || label > count)
    throw std::out_of_range("ComponentSet::area: bad label");
  return h * h * static_cast<double>(cell_count[label - 1]);
}

// --- Distance transform -----------------------------------------------------------

namespace {

constexpr double kDtInf = 1e18;  // acts as +inf; real d^2 is < (rows+cols)^2

// 1-D squared-distance lower envelope (Felzenszwalb-Huttenlocher).
void dt_1d(const double* f, int n, double* d, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kDtInf;
  z[1] = kDtInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + static_cast<double>(q) * q) -
                (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + static_cast<double>(q) * q) -
           (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kDtInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(
    const std::vector<std::uint8_t>& sites, int rows, int cols) {
  if (sites.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("squared_distance_transform: size mismatch");
  std::vector<double> d2(sites.size());
  // Vertical sweeps: exact |row distance| to the nearest site in each column.
  const double far = static_cast<double>(rows) + static_cast<double>(cols);
  for (int j = 0; j < cols; ++j) {
    double dist = far;
    for (int i = 0; i < rows; ++i) {
      dist = sites[static_cast<std::size_t>(i) * cols + j] ? 0.0 : dist + 1.0;
      d2[static_cast<std::size_t>(i) * cols + j] = dist;
    }
    dist = far;
    for (int i = rows - 1; i >= 0; --i) {
      const std::size_t k = static_cast<std::size_t>(i) * cols + j;
      dist = sites[k] ? 0.0 : dist + 1.0;
      if (dist < d2[k]) d2[k] = dist;
    }
    for (int i = 0; i < rows; ++i) {
      std::size_t k = static_cast<std::size_t>(i) * cols + j;
      d2[k] = d2[k] >= far ? kDtInf : d2[k] * d2[k];
    }
  }
  // Horizontal lower envelopes complete the exact 2-D transform.
  std::vector<double> f(cols), drow(cols), z(cols + 1);
  std::vector<int> v(cols);
  for (int i = 0; i < rows; ++i) {
    double* row = d2.data() + static_cast<std::size_t>(i) * cols;
    std::copy(row, row + cols, f.begin());
    dt_1d(f.data(), cols, drow.data(), v.data(), z.data());
    std::copy(drow.begin(), drow.end(), row);
  }
  for (double& val : d2)
    if (val >= kDtInf * 0.5) val = std::numeric_limits<double>::infinity();
  return d2;
}

// --- Metrics ---------------------------------------------------------------------

namespace {

// Shared worker: metrics of the cells of `region` (a binary mask over a
// window whose one-cell border is guaranteed empty). `h` is the cell size.
DomainMetrics metrics_of_region(const std::vector<std::uint8_t>& region,
                                int rows, int cols, double h) {
  DomainMetrics m;
  std::int64_t cells = 0;
  for (std::uint8_t r : region) cells += r;
  if (cells == 0)
    throw std::invalid_argument("metrics: empty region");
  m.area = h * h * static_cast<double>(cells);
  m.r_0 = std::sqrt(m.area / kPi);

  std::vector<std::uint8_t> complement(region.size());
  for (std::size_t k = 0; k < region.size(); ++k)
    complement[k] = region[k] ? 0 : 1;

  const std::vector<double> d2 =
      squared_distance_transform(complement, rows, cols);
  double best = 0;
  for (std::size_t k = 0; k < region.size(); ++k)
    if (region[k] && d2[k] > best) best = d2[k];
  m.r_i = std::sqrt(best) * h - h / 2;

  // Bounded complement components: those not reaching the window border.
  // The border is entirely complement, and everything beyond the window is
  // complement too, so border-touching components are exactly the unbounded
  // ones.
  const ComponentSet cc = connected_components(complement, rows, cols, h);
  std::vector<std::uint8_t> unbounded(static_cast<std::size_t>(cc.count), 0);
  auto mark = [&](int i, int j) {
    const std::int32_t lab = cc.labels[static_cast<std::size_t>(i) * cols + j];
    if (lab > 0) unbounded[static_cast<std::size_t>(lab) - 1] = 1;
  };
  for (int j = 0; j < cols; ++j) {
    mark(0, j);
    mark(rows - 1, j);
  }
  for (int i = 0; i < rows; ++i) {
    mark(i, 0);
    mark(i, cols - 1);
  }
  m.gamma = kNoBoundedComplement;
  for (int lab = 1; lab <= cc.count; ++lab)
    if (!unbounded[static_cast<std::size_t>(lab) - 1])
      m.gamma = std::min(m.gamma, cc.area(lab));
  return m;
}

}  // namespace

DomainMetrics domain_metrics(const DomainGrid& grid) {
  return metrics_of_region(grid.mask, grid.rows, grid.cols, grid.h);
}

DomainMetrics component_metrics(const DomainGrid& grid,
                                const std::vector<std::int32_t>& labels,
                                std::int32_t label) {
  if (labels.size() != grid.mask.size())
    throw std::invalid_argument("component_metrics: label buffer mismatch");
  int imin = grid.rows, imax = -1, jmin = grid.cols, jmax = -1;
  for (int i = 0; i < grid.rows; ++i)
    for (int j = 0; j < grid.cols; ++j)
      if (labels[grid.idx(i, j)] == label) {
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
      }
  if (imax < 0)
    throw std::invalid_argument("component_metrics: label not present");
  return component_metrics(grid, labels, label, {imin, imax, jmin, jmax});
}

DomainMetrics component_metrics(const DomainGrid& grid,
                                const std::vector<std::int32_t>& labels,
                                std::int32_t label,
                                const std::array<int, 4>& bbox) {
  if (labels.size() != grid.mask.size())
    throw std::invalid_argument("component_metrics: label buffer mismatch");
  // Window = component bounding box + one empty ring. Labeled regions never
  // reach the grid's pad ring, so the expansion stays in range.
  const int imin = std::max(0, bbox[0] - 1);
  const int imax = std::min(grid.rows - 1, bbox[1] + 1);
  const int jmin = std::max(0, bbox[2] - 1);
  const int jmax = std::min(grid.cols - 1, bbox[3] + 1);
  const int wrows = imax - imin + 1, wcols = jmax - jmin + 1;
  if (wrows <= 0 || wcols <= 0)
    throw std::invalid_argument("component_metrics: empty bounding box");
  std::vector<std::uint8_t> region(static_cast<std::size_t>(wrows) * wcols, 0);
  for (int i = 0; i < wrows; ++i)
    for (int j = 0; j < wcols; ++j)
      region[static_cast<std::size_t>(i) * wcols + j] =
          labels[grid.idx(imin + i, jmin + j)] == label ? 1 : 0;
  return metrics_of_region(region, wrows, wcols, grid.h);
}

double inradius(const DomainGrid& grid) {
  std::vector<std::uint8_t> complement(grid.mask.size());
  for (std::size_t k = 0; k < grid.mask.size(); ++k)
    complement[k] = grid.mask[k] ? 0 : 1;
  const std::vector<double> d2 =
      squared_distance_transform(complement, grid.rows, grid.cols);
  double best = 0;
  for (std::size_t k = 0; k < grid.mask.size(); ++k)
    if (grid.mask[k] && d2[k] > best) best = d2[k];
  if (best == 0)
    throw std::invalid_argument("inradius: empty grid");
  return std::sqrt(best) * grid.h - grid.h / 2;
}

}  // namespace nlab
