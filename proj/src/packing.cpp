#include "nlab/packing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlab/io.hpp"
#include "nlab/util.hpp"

namespace nlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOverlapTol = 1e-12;

double wrap_delta(double d, double period) {
  d = std::abs(d);
  d = std::fmod(d, period);
  return std::min(d, period - d);
}

}  // namespace

double torus_distance(const Torus& t, double x1, double y1, double x2,
                      double y2) {
  const double dx = wrap_delta(x1 - x2, t.Lx);
  const double dy = wrap_delta(y1 - y2, t.Ly);
  return std::hypot(dx, dy);
}

double DiscPacking::region_area() const {
  if (torus) return torus->Lx * torus->Ly;
  if (grid) return grid->area();
  throw std::logic_error("DiscPacking: no region set");
}

double DiscPacking::distance(std::size_t i, std::size_t j) const {
  const Disc& a = discs[i];
  const Disc& b = discs[j];
  if (torus) return torus_distance(*torus, a.x, a.y, b.x, b.y);
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

// Spatial hash on the torus for packings beyond the O(k^2) comfort zone.
// Cell width >= 2 * max radius, so any overlapping pair shares a 3x3
// neighborhood of cells.
struct TorusHash {
  const Torus t;
  int nx, ny;
  double cw, ch;
  std::vector<std::vector<std::int64_t>> cells;

  TorusHash(const Torus& torus, double rmax, std::size_t expect)
      : t(torus) {
    nx = std::max(1, static_cast<int>(std::floor(t.Lx / (2 * rmax))));
    ny = std::max(1, static_cast<int>(std::floor(t.Ly / (2 * rmax))));
    // Avoid degenerate bucket counts for tiny packings.
    nx = std::min<int>(nx, static_cast<int>(expect) + 1);
    ny = std::min<int>(ny, static_cast<int>(expect) + 1);
    cw = t.Lx / nx;
    ch = t.Ly / ny;
    cells.resize(static_cast<std::size_t>(nx) * ny);
  }
  int cell_of(double x, double y) const {
    int cx = static_cast<int>(std::floor(x / cw)) % nx;
    int cy = static_cast<int>(std::floor(y / ch)) % ny;
    if (cx < 0) cx += nx;
    if (cy < 0) cy += ny;
    return cy * nx + cx;
  }
  void insert(std::int64_t id, double x, double y) {
    cells[static_cast<std::size_t>(cell_of(x, y))].push_back(id);
  }
  // Ascending, deduplicated candidate ids in the 3x3 wrap-around block.
  void neighbors(double x, double y, std::vector<std::int64_t>& out) const {
    out.clear();
    int cx = static_cast<int>(std::floor(x / cw)) % nx;
    int cy = static_cast<int>(std::floor(y / ch)) % ny;
    if (cx < 0) cx += nx;
    if (cy < 0) cy += ny;
    int seen[9];
    int nseen = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int ux = (cx + dx + nx) % nx;
        int uy = (cy + dy + ny) % ny;
        const int cell = uy * nx + ux;
        bool dup = false;
        for (int s = 0; s < nseen; ++s) dup |= seen[s] == cell;
        if (dup) continue;
        seen[nseen++] = cell;
        const auto& bucket = cells[static_cast<std::size_t>(cell)];
        out.insert(out.end(), bucket.begin(), bucket.end());
      }
    std::sort(out.begin(), out.end());
  }
};

PackingViolation check_pair(const DiscPacking& p, std::size_t i,
                            std::size_t j) {
  const double dist = p.distance(i, j);
  const double need = p.discs[i].r + p.discs[j].r;
  if (dist < need - kOverlapTol) {
    PackingViolation v;
    v.ok = false;
    v.kind = "overlap";
    v.i = static_cast<std::int64_t>(i);
    v.j = static_cast<std::int64_t>(j);
    v.dist = dist;
    v.required = need;
    return v;
  }
  return {};
}

}  // namespace

PackingViolation verify_packing(const DiscPacking& packing) {
  const std::size_t n = packing.discs.size();
  if (!packing.torus && !packing.grid)
    throw std::logic_error("verify_packing: no region set");

  // Containment first (torus: trivially inside). Grid region: the disc must
  // sit inside the rasterized domain, measured by the exact distance
  // transform with the h/2 wall convention.
  if (packing.grid) {
    const DomainGrid& g = *packing.grid;
    std::vector<std::uint8_t> complement(g.mask.size());
    for (std::size_t k = 0; k < g.mask.size(); ++k)
      complement[k] = g.mask[k] ? 0 : 1;
    const std::vector<double> d2 =
        squared_distance_transform(complement, g.rows, g.cols);
    for (std::size_t i = 0; i < n; ++i) {
      const Disc& d = packing.discs[i];
      const int cj = static_cast<int>(std::llround((d.x - g.x0) / g.h));
      const int ci = static_cast<int>(std::llround((d.y - g.y0) / g.h));
      double wall = -1;  // outside the grid entirely
      if (ci >= 0 && ci < g.rows && cj >= 0 && cj < g.cols &&
          g.mask[g.idx(ci, cj)])
        wall = std::sqrt(d2[g.idx(ci, cj)]) * g.h - g.h / 2;
      if (wall < d.r - kOverlapTol) {
        PackingViolation v;
        v.ok = false;
        v.kind = "outside";
        v.i = static_cast<std::int64_t>(i);
        v.dist = wall;
        v.required = d.r;
        return v;
      }
    }
  }

  if (n < 2) return {};
  if (n <= 10000 || !packing.torus) {
    // Pairwise, ascending (i, j): the first violation is well-defined.
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const PackingViolation v = check_pair(packing, i, j);
        if (!v.ok) return v;
      }
    return {};
  }
  // Spatial hash path (torus only).
  double rmax = 0;
  for (const Disc& d : packing.discs) rmax = std::max(rmax, d.r);
  TorusHash hash(*packing.torus, rmax, n);
  for (std::size_t i = 0; i < n; ++i)
    hash.insert(static_cast<std::int64_t>(i), packing.discs[i].x,
                packing.discs[i].y);
  std::vector<std::int64_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    hash.neighbors(packing.discs[i].x, packing.discs[i].y, cand);
    for (std::int64_t j : cand) {
      if (j <= static_cast<std::int64_t>(i)) continue;
      const PackingViolation v =
          check_pair(packing, i, static_cast<std::size_t>(j));
      if (!v.ok) return v;
    }
  }
  return {};
}

double packing_density(const DiscPacking& packing) {
  for (const Disc& d : packing.discs)
    if (!(d.r > 0))
      throw std::invalid_argument("packing_density: nonpositive radius");
  const PackingViolation v = verify_packing(packing);
  if (!v.ok)
    throw std::invalid_argument(
        "packing_density: packing invalid (" + v.kind + " at discs " +
        std::to_string(v.i) + "," + std::to_string(v.j) + ")");
  double sum = 0;
  for (const Disc& d : packing.discs) sum += kPi * d.r * d.r;
  return sum / packing.region_area();
}

double radius_ratio(const DiscPacking& packing) {
  if (packing.discs.empty())
    throw std::invalid_argument("radius_ratio: empty packing");
  double lo = packing.discs[0].r, hi = lo;
  for (const Disc& d : packing.discs) {
    lo = std::min(lo, d.r);
    hi = std::max(hi, d.r);
  }
  return lo / hi;
}

BlindReport blind_bound_check(const DiscPacking& packing, double p) {
  BlindReport rep;
  rep.density = packing_density(packing);  // verifies as a precondition
  rep.ratio = radius_ratio(packing);
  rep.hypothesis_met = rep.ratio >= p;
  if (rep.hypothesis_met)
    rep.bound_respected = rep.density <= kPi / std::sqrt(12.0) + 1e-9;
  return rep;
}

DiscPacking hexagonal_lattice(int k, int m, double r) {
  if (k < 1 || m < 1 || !(r > 0))
    throw std::invalid_argument("hexagonal_lattice: need k,m >= 1 and r > 0");
  DiscPacking p;
  const double root3 = std::sqrt(3.0);
  p.torus = Torus{2.0 * r * k, 2.0 * root3 * r * m};
  for (int row = 0; row < 2 * m; ++row)
    for (int col = 0; col < k; ++col)
      p.discs.push_back(
          {2.0 * r * col + (row % 2 ? r : 0.0), root3 * r * row, r});
  return p;
}

DiscPacking square_lattice(int k, int m, double r) {
  if (k < 1 || m < 1 || !(r > 0))
    throw std::invalid_argument("square_lattice: need k,m >= 1 and r > 0");
  DiscPacking p;
  p.torus = Torus{2.0 * r * k, 2.0 * r * m};
  for (int row = 0; row < m; ++row)
    for (int col = 0; col < k; ++col)
      p.discs.push_back({2.0 * r * col + r, 2.0 * r * row + r, r});
  return p;
}

DiscPacking greedy_pack(const Torus& torus, const RadiiLaw& law,
                        std::int64_t attempts, std::uint64_t seed) {
  if (!(torus.Lx > 0) || !(torus.Ly > 0))
    throw std::invalid_argument("greedy_pack: torus sides must be positive");
  if (!(law.r_lo > 0) || law.r_hi < law.r_lo)
    throw std::invalid_argument("greedy_pack: need 0 < r_lo <= r_hi");
  if (attempts < 1) throw std::invalid_argument("greedy_pack: attempts >= 1");
  DiscPacking p;
  p.torus = torus;
  std::mt19937_64 rng(seed);
  TorusHash hash(torus, law.r_hi, 4096);
  std::vector<std::int64_t> cand;
  for (std::int64_t a = 0; a < attempts; ++a) {
    // Three draws per attempt regardless of acceptance keeps the stream
    // aligned across radii laws.
    const double x = uniform01(rng) * torus.Lx;
    const double y = uniform01(rng) * torus.Ly;
    const double r = law.r_lo + uniform01(rng) * (law.r_hi - law.r_lo);
    hash.neighbors(x, y, cand);
    bool free = true;
    for (std::int64_t jc : cand) {
      const Disc& d = p.discs[static_cast<std::size_t>(jc)];
      if (torus_distance(torus, x, y, d.x, d.y) < r + d.r - kOverlapTol) {
        free = false;
        break;
      }
    }
    if (free) {
      p.discs.push_back({x, y, r});
      hash.insert(static_cast<std::int64_t>(p.discs.size()) - 1, x, y);
    }
  }
  return p;
}

DiscPacking inscribed_disc_packing(const DomainGrid& grid,
                                   const NodalDecomposition& decomposition) {
  DiscPacking p;
  p.grid = std::make_shared<const DomainGrid>(grid);

  // Per-domain exact EDT on the domain's padded bounding-box window; sites
  // are every cell not carrying the domain's label.
  for (const NodalDomain& dom : decomposition.domains) {
    const int imin = std::max(0, dom.bbox[0] - 1);
    const int imax = std::min(grid.rows - 1, dom.bbox[1] + 1);
    const int jmin = std::max(0, dom.bbox[2] - 1);
    const int jmax = std::min(grid.cols - 1, dom.bbox[3] + 1);
    const int wr = imax - imin + 1, wc = jmax - jmin + 1;
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(wr) * wc, 1);
    for (int i = 0; i < wr; ++i)
      for (int j = 0; j < wc; ++j)
        if (decomposition.labels[grid.idx(imin + i, jmin + j)] == dom.label)
          sites[static_cast<std::size_t>(i) * wc + j] = 0;
    const std::vector<double> d2 =
        squared_distance_transform(sites, wr, wc);
    double best = 0;
    int bi = -1, bj = -1;
    for (int i = 0; i < wr; ++i)
      for (int j = 0; j < wc; ++j) {
        const double v = d2[static_cast<std::size_t>(i) * wc + j];
        if (v > best) {  // first maximum in row-major order
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) continue;
    const double radius = (std::sqrt(best) - std::sqrt(2.0) / 2) * grid.h;
    if (radius <= 0) continue;
    p.discs.push_back(
        {grid.x(jmin + bj), grid.y(imin + bi), radius});
  }
  return p;
}

void save_packing_csv(const std::string& path, const DiscPacking& packing) {
  std::string out;
  if (packing.torus) {
    out += "# region=torus lx=" + format_double(packing.torus->Lx) +
           " ly=" + format_double(packing.torus->Ly) + "\n";
  } else if (packing.grid) {
    out += "# region=grid rows=" + std::to_string(packing.grid->rows) +
           " cols=" + std::to_string(packing.grid->cols) +
           " h=" + format_double(packing.grid->h) +
           " area=" + format_double(packing.grid->area()) + "\n";
  } else {
    throw std::logic_error("save_packing_csv: no region set");
  }
  out += "x,y,r\n";
  for (const Disc& d : packing.discs)
    out += format_double(d.x) + "," + format_double(d.y) + "," +
           format_double(d.r) + "\n";
  write_text_file(path, out);
}

DiscPacking load_packing_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error("empty packing file: " + path);
  DiscPacking p;
  double lx = 0, ly = 0;
  if (std::sscanf(line.c_str(), "# region=torus lx=%lf ly=%lf", &lx, &ly) == 2) {
    p.torus = Torus{lx, ly};
  } else if (line.rfind("# region=grid", 0) == 0) {
    throw std::runtime_error(
        "grid-region packings cannot be loaded from CSV (mask not "
        "serialized); re-export from the pipeline");
  } else {
    throw std::runtime_error("missing region header in " + path);
  }
  if (!std::getline(f, line) || line != "x,y,r")
    throw std::runtime_error("missing x,y,r header in " + path);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    Disc d;
    char* end = nullptr;
    d.x = std::strtod(line.c_str(), &end);
    if (*end != ',') throw std::runtime_error("bad row in " + path);
    char* end2 = nullptr;
    d.y = std::strtod(end + 1, &end2);
    if (*end2 != ',') throw std::runtime_error("bad row in " + path);
    d.r = std::strtod(end2 + 1, &end);
    p.discs.push_back(d);
  }
  return p;
}

}  // namespace nlab
