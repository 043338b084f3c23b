#include "amcf/grid.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace amcf {

std::string boundary_name(const BoundaryPolicy& policy) {
  switch (policy.index()) {
    case 0: return "periodic";
    case 1: return "cone";
    case 2: return "dirichlet";
    default: return "linear";
  }
}

GraphGrid::GraphGrid(int dim, double h, std::array<int, 2> counts, Point origin,
                     BoundaryPolicy policy)
    : dim_(dim), h_(h), counts_(counts), origin_(origin), policy_(std::move(policy)) {
  require(dim_ == 1 || dim_ == 2, ErrorKind::Usage, "grids are 1-D or 2-D");
  require(h_ > 0.0 && std::isfinite(h_), ErrorKind::Usage, "grid spacing must be positive");
  if (dim_ == 1) {
    counts_[1] = 1;
    origin_[1] = 0.0;
  }
  for (int a = 0; a < dim_; ++a) {
    require(counts_[a] >= 8, ErrorKind::Usage, "grids need at least 8 nodes per axis");
  }
  if (const auto* p = std::get_if<boundary::Periodic>(&policy_)) {
    for (int a = 0; a < dim_; ++a) {
      require(std::abs(p->period[a] - counts_[a] * h_) <= 1e-9 * p->period[a], ErrorKind::Usage,
              "periodic grid: period must equal node count times h");
    }
  }
  if (const auto* c = std::get_if<boundary::ConeExtension>(&policy_)) {
    require(c->cone.dimension() == dim_, ErrorKind::Usage, "cone and grid dimensions differ");
  }
  if (const auto* d = std::get_if<boundary::DirichletExact>(&policy_)) {
    require(static_cast<bool>(d->exact), ErrorKind::Usage, "Dirichlet policy needs a closed form");
  }
}

GraphGrid GraphGrid::centered(int dim, double h, double half_width, BoundaryPolicy policy) {
  const int half = static_cast<int>(std::lround(half_width / h));
  require(std::abs(half * h - half_width) <= 1e-9 * half_width, ErrorKind::Usage,
          "half width must be a multiple of h");
  const int n = 2 * half + 1;
  return GraphGrid(dim, h, {n, n}, {-half * h, -half * h}, std::move(policy));
}

GraphGrid GraphGrid::with_apex(int dim, double h, int count, BoundaryPolicy policy) {
  const double start = -(count / 2) * h;
  return GraphGrid(dim, h, {count, count}, {start, start}, std::move(policy));
}

GraphGrid GraphGrid::periodic(int dim, double h, double period, double start) {
  const int n = static_cast<int>(std::lround(period / h));
  require(std::abs(n * h - period) <= 1e-9 * period, ErrorKind::Usage,
          "period must be a multiple of h");
  return GraphGrid(dim, h, {n, n}, {start, start}, boundary::Periodic{{period, period}});
}

std::size_t GraphGrid::node_at(const Point& x) const {
  int idx[2] = {0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double s = (x[a] - origin_[a]) / h_;
    idx[a] = static_cast<int>(std::lround(s));
    if (std::abs(s - idx[a]) > 1e-6 || idx[a] < 0 || idx[a] >= counts_[a]) {
      fail(ErrorKind::Usage, "point is not a grid node");
    }
  }
  return index(idx[0], idx[1]);
}

double GraphGrid::inner_half_width() const {
  double r = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim_; ++a) {
    r = std::min({r, -origin_[a], origin_[a] + h_ * (counts_[a] - 1)});
  }
  return r;
}

bool GraphGrid::same_layout(const GraphGrid& other) const {
  return dim_ == other.dim_ && h_ == other.h_ && counts_ == other.counts_ &&
         origin_ == other.origin_;
}

GraphGrid GraphGrid::with_boundary(BoundaryPolicy policy) const {
  return GraphGrid(dim_, h_, counts_, origin_, std::move(policy));
}

// ---------------------------------------------------------------------------

GraphField::GraphField(GridPtr g, std::vector<double> v, double t)
    : grid(std::move(g)), values(std::move(v)), time(t) {
  require(grid != nullptr, ErrorKind::Usage, "field needs a grid");
  require(values.size() == grid->size(), ErrorKind::Usage, "field size does not match its grid");
}

GraphField GraphField::zeros(GridPtr g, double t) {
  const auto n = g->size();
  return GraphField(std::move(g), std::vector<double>(n, 0.0), t);
}

GraphField GraphField::from_function(GridPtr g, const std::function<double(const Point&)>& f,
                                     double t) {
  std::vector<double> v(g->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(g->node(k));
  return GraphField(std::move(g), std::move(v), t);
}

bool GraphField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double lipschitz_constant(const GraphField& u) {
  const GraphGrid& g = *u.grid;
  const int nx = g.count(0), ny = g.dim() == 2 ? g.count(1) : 1;
  const bool wrap = g.is_periodic();
  const double* v = u.values.data();
  double lip = 0.0;
  for (int j = 0; j < ny; ++j) {
    const double* row = v + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i + 1 < nx; ++i) lip = std::max(lip, std::abs(row[i + 1] - row[i]));
    if (wrap) lip = std::max(lip, std::abs(row[0] - row[nx - 1]));
  }
  if (g.dim() == 2) {
    for (int j = 0; j < ny; ++j) {
      if (j + 1 == ny && !wrap) break;
      const double* row = v + static_cast<std::size_t>(j) * nx;
      const double* next = v + static_cast<std::size_t>((j + 1) % ny) * nx;
      for (int i = 0; i < nx; ++i) lip = std::max(lip, std::abs(next[i] - row[i]));
    }
  }
  return lip / g.h();
}

// ---------------------------------------------------------------------------

PaddedValues::PaddedValues(const GraphGrid& grid)
    : stride_(grid.count(0) + 2),
      pad_j_(grid.dim() == 2 ? 1 : 0),
      data_(static_cast<std::size_t>(grid.count(0) + 2) *
            static_cast<std::size_t>(grid.dim() == 2 ? grid.count(1) + 2 : 1)) {}

void apply_boundary(const GraphField& u, PaddedValues& out) {
  const GraphGrid& g = *u.grid;
  const int nx = g.count(0);
  const int ny = g.dim() == 2 ? g.count(1) : 1;
  const int jlo = g.dim() == 2 ? -1 : 0;
  const int jhi = g.dim() == 2 ? ny : ny - 1;

  for (int j = 0; j < ny; ++j) {
    const double* src = u.values.data() + g.index(0, j);
    std::copy(src, src + nx, &out(0, j));
  }

  auto is_ghost = [&](int i, int j) { return i < 0 || i >= nx || j < 0 || j >= ny; };

  std::visit(
      [&](const auto& policy) {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, boundary::Periodic>) {
          for (int j = jlo; j <= jhi; ++j) {
            for (int i = -1; i <= nx; ++i) {
              if (is_ghost(i, j)) out(i, j) = u.at((i + nx) % nx, (j + ny) % ny);
            }
          }
        } else if constexpr (std::is_same_v<P, boundary::ConeExtension>) {
          for (int j = jlo; j <= jhi; ++j) {
            for (int i = -1; i <= nx; ++i) {
              if (!is_ghost(i, j)) continue;
              const int ie = std::clamp(i, 0, nx - 1), je = std::clamp(j, 0, ny - 1);
              out(i, j) = policy.cone(g.coord(i, j)) + (u.at(ie, je) - policy.cone(g.coord(ie, je)));
            }
          }
        } else if constexpr (std::is_same_v<P, boundary::DirichletExact>) {
          for (int j = jlo; j <= jhi; ++j) {
            for (int i = -1; i <= nx; ++i) {
              if (is_ghost(i, j)) out(i, j) = policy.exact(g.coord(i, j), u.time);
            }
          }
        } else {
          for (int j = 0; j < ny; ++j) {
            out(-1, j) = 2.0 * out(0, j) - out(1, j);
            out(nx, j) = 2.0 * out(nx - 1, j) - out(nx - 2, j);
          }
          if (g.dim() == 2) {
            for (int i = -1; i <= nx; ++i) {
              out(i, -1) = 2.0 * out(i, 0) - out(i, 1);
              out(i, ny) = 2.0 * out(i, ny - 1) - out(i, ny - 2);
            }
          }
        }
      },
      g.boundary());
}

PaddedValues apply_boundary(const GraphField& u) {
  PaddedValues out(*u.grid);
  apply_boundary(u, out);
  return out;
}

namespace {

// (bi)linear interpolation with cell index clamped to the node box, so points
// outside are linearly extrapolated from the edge cell.
double interpolate_clamped(const GraphField& u, const Point& x) {
  const GraphGrid& g = *u.grid;
  int cell[2] = {0, 0};
  double s[2] = {0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const double r = (x[a] - g.origin()[a]) / g.h();
    cell[a] = std::clamp(static_cast<int>(std::floor(r)), 0, g.count(a) - 2);
    s[a] = r - cell[a];
  }
  if (g.dim() == 1) {
    return (1.0 - s[0]) * u.at(cell[0]) + s[0] * u.at(cell[0] + 1);
  }
  const double v00 = u.at(cell[0], cell[1]), v10 = u.at(cell[0] + 1, cell[1]);
  const double v01 = u.at(cell[0], cell[1] + 1), v11 = u.at(cell[0] + 1, cell[1] + 1);
  return (1 - s[0]) * (1 - s[1]) * v00 + s[0] * (1 - s[1]) * v10 + (1 - s[0]) * s[1] * v01 +
         s[0] * s[1] * v11;
}

}  // namespace

double sample(const GraphField& u, const Point& x) {
  const GraphGrid& g = *u.grid;
  if (g.is_periodic()) {
    int cell[2] = {0, 0};
    double s[2] = {0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) {
      double r = std::fmod((x[a] - g.origin()[a]) / g.h(), static_cast<double>(g.count(a)));
      if (r < 0) r += g.count(a);
      cell[a] = std::min(static_cast<int>(std::floor(r)), g.count(a) - 1);
      s[a] = r - cell[a];
    }
    const int nx = g.count(0), ny = g.count(1);
    if (g.dim() == 1) return (1 - s[0]) * u.at(cell[0]) + s[0] * u.at((cell[0] + 1) % nx);
    const int i1 = (cell[0] + 1) % nx, j1 = (cell[1] + 1) % ny;
    return (1 - s[0]) * (1 - s[1]) * u.at(cell[0], cell[1]) + s[0] * (1 - s[1]) * u.at(i1, cell[1]) +
           (1 - s[0]) * s[1] * u.at(cell[0], j1) + s[0] * s[1] * u.at(i1, j1);
  }

  Point clamped = x;
  bool outside = false;
  for (int a = 0; a < g.dim(); ++a) {
    const double lo = g.origin()[a], hi = lo + g.h() * (g.count(a) - 1);
    if (x[a] < lo || x[a] > hi) outside = true;
    clamped[a] = std::clamp(x[a], lo, hi);
  }
  if (!outside) return interpolate_clamped(u, x);

  if (const auto* c = std::get_if<boundary::ConeExtension>(&g.boundary())) {
    return c->cone(x) + (interpolate_clamped(u, clamped) - c->cone(clamped));
  }
  if (const auto* d = std::get_if<boundary::DirichletExact>(&g.boundary())) {
    return d->exact(x, u.time);
  }
  return interpolate_clamped(u, x);
}

// ---------------------------------------------------------------------------

void write_snapshot(std::ostream& out, const GraphField& u,
                    const std::vector<std::pair<std::string, double>>& extra) {
  const GraphGrid& g = *u.grid;
  out << "N " << g.dim() << '\n';
  out << "h " << format_double(g.h()) << '\n';
  out << "shape " << g.count(0);
  if (g.dim() == 2) out << ' ' << g.count(1);
  out << '\n';
  out << "t " << format_double(u.time) << '\n';
  for (const auto& [key, value] : extra) out << key << ' ' << format_double(value) << '\n';
  for (double v : u.values) out << format_double(v) << '\n';
}

SnapshotData read_snapshot(std::istream& in) {
  SnapshotData data;
  bool seen[4] = {false, false, false, false};
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty()) continue;
    const char first = text.front();
    const bool numeric = std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
                         first == '+' || first == '.' || text == "nan" || text == "inf";
    if (numeric) {
      data.values.push_back(parse_double(text));
      continue;
    }
    require(data.values.empty(), ErrorKind::Parse, "snapshot header after values");
    std::istringstream fields{std::string(text)};
    std::string key;
    fields >> key;
    std::string rest;
    std::getline(fields, rest);
    if (key == "N") {
      data.dim = static_cast<int>(parse_long(rest));
      seen[0] = true;
    } else if (key == "h") {
      data.h = parse_double(rest);
      seen[1] = true;
    } else if (key == "shape") {
      std::istringstream dims(rest);
      std::string a, b;
      dims >> a >> b;
      data.shape[0] = static_cast<int>(parse_long(a));
      data.shape[1] = b.empty() ? 1 : static_cast<int>(parse_long(b));
      seen[2] = true;
    } else if (key == "t") {
      data.time = parse_double(rest);
      seen[3] = true;
    } else {
      data.extra.emplace_back(key, parse_double(rest));
    }
  }
  require(seen[0] && seen[1] && seen[2] && seen[3], ErrorKind::Parse,
          "snapshot is missing one of the N/h/shape/t header lines");
  require(data.values.size() ==
              static_cast<std::size_t>(data.shape[0]) * static_cast<std::size_t>(data.shape[1]),
          ErrorKind::Parse, "snapshot value count does not match its shape");
  return data;
}

}  // namespace amcf
