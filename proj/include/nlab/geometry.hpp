#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace nlab {

// Sentinel for "the complement has no bounded component" (simply connected
// domains): gamma = +inf so that min(..., 2*sqrt(gamma)/r0) saturates.
inline constexpr double kNoBoundedComplement =
    std::numeric_limits<double>::infinity();

struct Hole {
  double cx = 0, cy = 0, r = 0;
};

// Planar test domains. All membership tests are strict-interior: points on
// the boundary are outside, and points within a relative tolerance of
// 1e-12 (scaled by the shape size) of the boundary also count as outside.
// The fattened boundary makes rasterization insensitive to the last-ulp
// placement of grid nodes: a node that lands on a wall up to rounding error
// is classified as a wall node regardless of which side the rounding fell
// on. Shapes are placed in fixed positions (rectangle anchored at the
// origin, discs/annuli centered at the origin) so descriptors need only
// intrinsic parameters.
class Shape {
 public:
  enum class Kind { Rectangle, Disc, Annulus, DiscWithHoles, Polygon };

  static Shape rectangle(double a, double b);
  static Shape disc(double r);
  static Shape annulus(double r_inner, double r_outer);
  static Shape disc_with_holes(double r, std::vector<Hole> holes);
  static Shape polygon(std::vector<std::array<double, 2>> vertices);

  // Descriptor grammar (used by the CLI and config files):
  //   square                    unit square
  //   rectangle:A,B             (0,A) x (0,B)
  //   disc:R
  //   annulus:RIN,ROUT
  //   disc-with-holes:R;CX,CY,HR;CX,CY,HR;...
  //   polygon:X1,Y1;X2,Y2;...   (>= 3 vertices, simple, CCW or CW)
  // Throws std::invalid_argument with a usage message on malformed input.
  static Shape parse(const std::string& descriptor);

  Kind kind() const { return kind_; }
  bool contains(double x, double y) const;  // strict interior
  std::array<double, 4> bounding_box() const;  // {xmin, xmax, ymin, ymax}
  double analytic_area() const;
  std::string describe() const;
  // Sides (a, b) of a Rectangle shape; throws for other kinds.
  std::pair<double, double> rectangle_sides() const;

 private:
  Shape() = default;
  Kind kind_ = Kind::Rectangle;
  std::array<double, 4> params_{};             // kind-specific scalars
  std::vector<Hole> holes_;
  std::vector<std::array<double, 2>> verts_;
};

// Boolean interior mask on a uniform grid. Cell (i, j) has center
// (x0 + j*h, y0 + i*h); centers are aligned so that the shape's bounding box
// corners land exactly on grid nodes, and the mask carries a one-cell
// all-exterior pad ring. The alignment makes discrete Dirichlet walls
// coincide with axis-aligned analytic boundaries (boundary nodes fail the
// strict interior test), which is what gives O(h^2) eigenvalue convergence
// on rectangles.
struct DomainGrid {
  int rows = 0, cols = 0;
  double h = 0;
  double x0 = 0, y0 = 0;  // center of cell (0, 0)
  std::vector<std::uint8_t> mask;  // row-major, 1 = interior

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols + j;
  }
  bool inside(int i, int j) const {
    return i >= 0 && i < rows && j >= 0 && j < cols && mask[idx(i, j)] != 0;
  }
  double x(int j) const { return x0 + j * h; }
  double y(int i) const { return y0 + i * h; }
  std::int64_t interior_count() const;
  double area() const;  // h^2 * interior_count
  std::vector<std::uint8_t> to_pgm_pixels() const;  // 255 interior, 0 outside
};

// Throws std::invalid_argument if h <= 0 or the rasterization is empty.
DomainGrid rasterize(const Shape& shape, double h);

// 4-connected components of a binary mask. Labels are 1..count assigned in
// row-major order of each component's first cell; 0 = background.
struct ComponentSet {
  int rows = 0, cols = 0;
  double h = 0;
  int count = 0;
  std::vector<std::int32_t> labels;      // row-major, size rows*cols
  std::vector<std::int64_t> cell_count;  // per label, size count
  double area(int label) const;          // h^2 * cell_count[label-1]
};

ComponentSet connected_components(const std::vector<std::uint8_t>& mask,
                                  int rows, int cols, double h);

// Exact squared Euclidean distance transform (Felzenszwalb–Huttenlocher,
// per-dimension lower envelopes). Returns, for every cell, the squared
// distance in cell units to the nearest cell where `sites` is nonzero.
// Cells unreachable from any site get +inf (only possible if no sites).
std::vector<double> squared_distance_transform(
    const std::vector<std::uint8_t>& sites, int rows, int cols);

struct DomainMetrics {
  double area = 0;
  double r_i = 0;                        // inradius
  double r_0 = 0;                        // equal-area radius sqrt(area/pi)
  double gamma = kNoBoundedComplement;   // smallest bounded complement area
};

// Metrics of the whole interior mask.
DomainMetrics domain_metrics(const DomainGrid& grid);

// Metrics of one labeled component (label in 1..comps.count) of an arbitrary
// labeling over the same grid; the complement used for gamma is everything
// that is not this component (including other components).
DomainMetrics component_metrics(const DomainGrid& grid,
                                const std::vector<std::int32_t>& labels,
                                std::int32_t label);

// Same, with the component's bounding box {imin, imax, jmin, jmax} already
// known; skips the full-grid scan.
DomainMetrics component_metrics(const DomainGrid& grid,
                                const std::vector<std::int32_t>& labels,
                                std::int32_t label,
                                const std::array<int, 4>& bbox);

// Inradius of the interior mask: max over interior cells of
// (distance to nearest exterior cell) - h/2, distances in world units.
double inradius(const DomainGrid& grid);

}  // namespace nlab
