#include "chl/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "chl/format.hpp"
#include "chl/kernels.hpp"
#include "chl/limit_model.hpp"

namespace chl {

namespace {

void require_2d(const Field& f) {
  if (f.params.d != 2)
    throw std::invalid_argument("shape: only d = 2 is supported");
}

inline int wrap(int i, int n) { return i == n ? 0 : i; }

// Contour length of the s-level set of the bilinear interpolant over one dual
// row of the periodic node lattice.
double march_row(const double* v, int n, double s, int iy) {
  const int iyp = wrap(iy + 1, n);
  double len = 0.0;
  for (int ix = 0; ix < n; ++ix) {
    const int ixp = wrap(ix + 1, n);
    const double a = v[static_cast<std::size_t>(iy) * n + ix];    // (0,0)
    const double b = v[static_cast<std::size_t>(iy) * n + ixp];   // (1,0)
    const double c = v[static_cast<std::size_t>(iyp) * n + ixp];  // (1,1)
    const double d = v[static_cast<std::size_t>(iyp) * n + ix];   // (0,1)
    const int code = (a > s ? 1 : 0) | (b > s ? 2 : 0) | (c > s ? 4 : 0) | (d > s ? 8 : 0);
    if (code == 0 || code == 15) continue;
    const auto cross = [s](double v0, double v1) { return (s - v0) / (v1 - v0); };
    const double tb = (a > s) != (b > s) ? cross(a, b) : -1.0;  // bottom
    const double tr = (b > s) != (c > s) ? cross(b, c) : -1.0;  // right
    const double tt = (d > s) != (c > s) ? cross(d, c) : -1.0;  // top
    const double tl = (a > s) != (d > s) ? cross(a, d) : -1.0;  // left
    const auto seg = [&len](double x0, double y0, double x1, double y1) {
      len += std::hypot(x1 - x0, y1 - y0);
    };
    switch (code) {
      case 1: case 14: seg(tb, 0.0, 0.0, tl); break;
      case 2: case 13: seg(tb, 0.0, 1.0, tr); break;
      case 4: case 11: seg(1.0, tr, tt, 1.0); break;
      case 8: case 7:  seg(0.0, tl, tt, 1.0); break;
      case 3: case 12: seg(0.0, tl, 1.0, tr); break;
      case 6: case 9:  seg(tb, 0.0, tt, 1.0); break;
      case 5: case 10: {
        // saddle: connect according to the dual-cell center value
        const double center = 0.25 * (a + b + c + d);
        const bool center_in = center > s;
        const bool diag_a = code == 5;  // inside corners on the a-c diagonal
        if (diag_a == center_in) {
          seg(tb, 0.0, 1.0, tr);
          seg(0.0, tl, tt, 1.0);
        } else {
          seg(tb, 0.0, 0.0, tl);
          seg(1.0, tr, tt, 1.0);
        }
        break;
      }
      default: break;
    }
  }
  return len;
}

double march_all(const double* v, int n, double h, double s) {
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < n; ++iy) rows[iy] = march_row(v, n, s, iy);
  return h * pairwise_sum(rows);
}

// Offsets of the rasterized ball, ordered by (distance, dy, dx); used as a
// nested family: the first k offsets form the canonical k-cell ball.
struct BallOffsets {
  std::vector<std::array<int, 2>> off;  // {dx, dy}
  std::vector<long long> d2;
};

BallOffsets sorted_offsets(int n) {
  BallOffsets b;
  b.off.reserve(static_cast<std::size_t>(n) * n);
  for (int dy = -n / 2; dy < n / 2; ++dy)
    for (int dx = -n / 2; dx < n / 2; ++dx) b.off.push_back({dx, dy});
  std::sort(b.off.begin(), b.off.end(), [](const auto& p, const auto& q) {
    const long long dp = static_cast<long long>(p[0]) * p[0] + static_cast<long long>(p[1]) * p[1];
    const long long dq = static_cast<long long>(q[0]) * q[0] + static_cast<long long>(q[1]) * q[1];
    if (dp != dq) return dp < dq;
    if (p[1] != q[1]) return p[1] < q[1];
    return p[0] < q[0];
  });
  b.d2.resize(b.off.size());
  for (std::size_t i = 0; i < b.off.size(); ++i)
    b.d2[i] = static_cast<long long>(b.off[i][0]) * b.off[i][0] +
              static_cast<long long>(b.off[i][1]) * b.off[i][1];
  return b;
}

struct FraenkelSearch {
  const Mask& m;
  std::vector<std::array<int, 2>> ball;

  FraenkelSearch(const Mask& mask) : m(mask) {
    if (mask.count == 0)
      throw std::invalid_argument("fraenkel_asymmetry: empty mask");
    BallOffsets b = sorted_offsets(mask.n);
    if (mask.count > b.off.size())
      throw std::invalid_argument("fraenkel_asymmetry: mask covers the torus");
    // equal-area ball must fit in the torus (radius <= ell/2)
    const long long rad2 = b.d2[mask.count - 1];
    const long long half = static_cast<long long>(mask.n / 2) * (mask.n / 2);
    if (rad2 > half)
      throw std::invalid_argument("fraenkel_asymmetry: equal-area ball does not fit");
    ball.assign(b.off.begin(), b.off.begin() + static_cast<std::ptrdiff_t>(mask.count));
  }

  // |A symdiff B(center)| / |A| = 2 (count - |A picked by B|) / count
  double lambda_at(int cx, int cy) const {
    const int n = m.n;
    std::size_t inter = 0;
    for (const auto& o : ball) {
      const int x = (cx + o[0] % n + n) % n;
      const int y = (cy + o[1] % n + n) % n;
      inter += m.cells[static_cast<std::size_t>(y) * n + x];
    }
    return 2.0 * static_cast<double>(m.count - inter) / static_cast<double>(m.count);
  }
};

}  // namespace

Mask superlevel_mask(const Field& f, double s) {
  require_2d(f);
  Mask m;
  m.n = f.n;
  m.h = f.spacing();
  m.cells.resize(f.size());
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    m.cells[i] = f.values[i] > s ? 1 : 0;
    cnt += m.cells[i];
  }
  m.count = cnt;
  return m;
}

double perimeter(const Field& f, double s) {
  require_2d(f);
  return march_all(f.values.data(), f.n, f.spacing(), s);
}

double mask_perimeter(const Mask& m) {
  std::vector<double> v(m.cells.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.cells[i] ? 1.0 : -1.0;
  return march_all(v.data(), m.n, m.h, 0.0);
}

double p_e(double area, int d) {
  if (area < 0.0) throw std::domain_error("p_e: negative area");
  const double dd = d;
  return std::pow(surface_area_unit_sphere(d), 1.0 / dd) *
         std::pow(dd, (dd - 1.0) / dd) * std::pow(area, (dd - 1.0) / dd);
}

double fraenkel_asymmetry(const Mask& m) {
  FraenkelSearch fs(m);
  const int n = m.n;
  const int step = 8;  // coarse scan on the n/8 sublattice, then local refine
  double best = std::numeric_limits<double>::infinity();
  int bx = 0, by = 0;
  for (int cy = 0; cy < n; cy += step)
    for (int cx = 0; cx < n; cx += step) {
      const double v = fs.lambda_at(cx, cy);
      if (v < best) {
        best = v;
        bx = cx;
        by = cy;
      }
    }
  for (int cy = by - step; cy <= by + step; ++cy)
    for (int cx = bx - step; cx <= bx + step; ++cx) {
      const double v = fs.lambda_at((cx + n) % n, (cy + n) % n);
      if (v < best) best = v;
    }
  return best;
}

double fraenkel_asymmetry_brute(const Mask& m) {
  FraenkelSearch fs(m);
  double best = std::numeric_limits<double>::infinity();
  for (int cy = 0; cy < m.n; ++cy)
    for (int cx = 0; cx < m.n; ++cx) best = std::min(best, fs.lambda_at(cx, cy));
  return best;
}

double isoperimetric_defect(const Field& f, int levels) {
  require_2d(f);
  if (levels < 3) throw std::invalid_argument("isoperimetric_defect: need >= 3 levels");
  const double k = f.params.kappa();
  const double a = -1.0 + 2.0 * k, b = 1.0 - 2.0 * k;
  const double dt = (b - a) / (levels - 1);
  std::vector<double> g(levels);
  for (int i = 0; i < levels; ++i) {
    const double t = a + i * dt;
    const Mask m = superlevel_mask(f, t);
    const double excess = perimeter(f, t) - p_e(m.area(), 2);
    g[i] = std::sqrt(2.0 * potential(t)) * excess;
  }
  double sum = 0.5 * (g.front() + g.back());
  for (int i = 1; i + 1 < levels; ++i) sum += g[i];
  return sum * dt;
}

IsopCheck check_isoperimetric(const Mask& m, bool sharp) {
  IsopCheck out;
  out.sharp = sharp;
  const double torus = m.side() * m.side();
  if (m.count == 0 || m.area() > 0.05 * torus) {
    out.status = IsopCheck::Status::inconclusive;
    return out;
  }
  const double per = mask_perimeter(m);
  const double pe = p_e(m.area(), 2);
  double rhs = pe;
  if (sharp) {
    out.lambda = fraenkel_asymmetry(m);
    rhs += 0.1 * out.lambda * out.lambda * pe - 8.0 * m.area() / m.side();
  }
  out.margin = per - rhs;
  out.status = out.margin >= 0.0 ? IsopCheck::Status::holds : IsopCheck::Status::fails;
  return out;
}

namespace {

// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher),
// distance to the nearest zero cell; run on the recentred, non-wrapping grid.
std::vector<double> edt_sq(const std::vector<std::uint8_t>& inside, int n) {
  const double kInf = 1e18;
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  // vertical pass: per column, distance in cells to nearest outside cell
  for (int x = 0; x < n; ++x) {
    double d = kInf;
    for (int y = 0; y < n; ++y) {
      d = inside[static_cast<std::size_t>(y) * n + x] ? d + 1.0 : 0.0;
      g[static_cast<std::size_t>(y) * n + x] = d;
    }
    d = g[static_cast<std::size_t>(n - 1) * n + x];
    for (int y = n - 1; y >= 0; --y) {
      d = inside[static_cast<std::size_t>(y) * n + x] ? std::min(g[static_cast<std::size_t>(y) * n + x], d + 1.0) : 0.0;
      g[static_cast<std::size_t>(y) * n + x] = d;
    }
  }
  // horizontal pass: lower envelope of parabolas over squared column distances
  std::vector<double> out(g.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1), fval(n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double gv = g[static_cast<std::size_t>(y) * n + x];
      fval[x] = gv >= kInf ? kInf : gv * gv;
    }
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
      double s;
      while (true) {
        const int p = v[k];
        s = ((fval[q] + q * q) - (fval[p] + p * p)) / (2.0 * q - 2.0 * p);
        if (s <= z[k]) {
          --k;
        } else {
          break;
        }
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
      while (z[k + 1] < q) ++k;
      const int p = v[k];
      out[static_cast<std::size_t>(y) * n + q] =
          static_cast<double>(q - p) * (q - p) + fval[p];
    }
  }
  return out;
}

struct Circle {
  double x = 0, y = 0, r2 = -1;
  bool contains(double px, double py) const {
    const double dx = px - x, dy = py - y;
    return dx * dx + dy * dy <= r2 * (1.0 + 1e-12) + 1e-12;
  }
};

Circle circle_two(double ax, double ay, double bx, double by) {
  Circle c;
  c.x = 0.5 * (ax + bx);
  c.y = 0.5 * (ay + by);
  const double dx = ax - c.x, dy = ay - c.y;
  c.r2 = dx * dx + dy * dy;
  return c;
}

Circle circle_three(double ax, double ay, double bx, double by, double cx, double cy) {
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::fabs(d) < 1e-30) {
    // collinear: widest pair
    Circle best = circle_two(ax, ay, bx, by);
    const Circle c2 = circle_two(ax, ay, cx, cy);
    if (c2.r2 > best.r2) best = c2;
    const Circle c3 = circle_two(bx, by, cx, cy);
    if (c3.r2 > best.r2) best = c3;
    return best;
  }
  const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  Circle c;
  c.x = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  c.y = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  const double dx = ax - c.x, dy = ay - c.y;
  c.r2 = dx * dx + dy * dy;
  return c;
}

// Welzl's minimal enclosing circle with a fixed deterministic shuffle.
Circle min_enclosing_circle(std::vector<std::array<double, 2>> pts) {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  const auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  for (std::size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[next() % i]);

  Circle c;
  c.r2 = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (c.r2 >= 0.0 && c.contains(pts[i][0], pts[i][1])) continue;
    c = Circle{pts[i][0], pts[i][1], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(pts[j][0], pts[j][1])) continue;
      c = circle_two(pts[i][0], pts[i][1], pts[j][0], pts[j][1]);
      for (std::size_t k = 0; k < j; ++k) {
        if (c.contains(pts[k][0], pts[k][1])) continue;
        c = circle_three(pts[i][0], pts[i][1], pts[j][0], pts[j][1], pts[k][0], pts[k][1]);
      }
    }
  }
  return c;
}

}  // namespace

BonnesenRadii bonnesen_radii(const Mask& m) {
  if (m.count == 0) throw std::invalid_argument("bonnesen_radii: empty mask");
  const int n = m.n;
  // periodic centroid per axis (circular mean)
  double sx = 0, cxs = 0, sy = 0, cys = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (m.at(x, y)) {
        const double ax = 2.0 * M_PI * (x + 0.5) / n;
        const double ay = 2.0 * M_PI * (y + 0.5) / n;
        sx += std::sin(ax);
        cxs += std::cos(ax);
        sy += std::sin(ay);
        cys += std::cos(ay);
      }
  const auto center_index = [n](double s, double c) {
    double ang = std::atan2(s, c);
    if (ang < 0) ang += 2.0 * M_PI;
    return ang / (2.0 * M_PI) * n - 0.5;
  };
  const int shift_x = n / 2 - static_cast<int>(std::lround(center_index(sx, cxs)));
  const int shift_y = n / 2 - static_cast<int>(std::lround(center_index(sy, cys)));

  std::vector<std::uint8_t> rec(static_cast<std::size_t>(n) * n, 0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (m.at(x, y)) {
        const int nx = ((x + shift_x) % n + n) % n;
        const int ny = ((y + shift_y) % n + n) % n;
        rec[static_cast<std::size_t>(ny) * n + nx] = 1;
      }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (rec[static_cast<std::size_t>(y) * n + x] &&
          (x <= n / 4 || x >= 3 * n / 4 - 1 || y <= n / 4 || y >= 3 * n / 4 - 1))
        throw std::invalid_argument("bonnesen_radii: set too large for Euclidean radii");

  BonnesenRadii out;
  out.rho = std::sqrt(m.area() / M_PI);

  const std::vector<double> d2 = edt_sq(rec, n);
  double best = 0.0;
  for (std::size_t i = 0; i < d2.size(); ++i)
    if (rec[i]) best = std::max(best, d2[i]);
  out.rho_in = std::sqrt(best) * m.h;

  std::vector<std::array<double, 2>> boundary;
  for (int y = 1; y + 1 < n; ++y)
    for (int x = 1; x + 1 < n; ++x)
      if (rec[static_cast<std::size_t>(y) * n + x] &&
          (!rec[static_cast<std::size_t>(y) * n + x - 1] ||
           !rec[static_cast<std::size_t>(y) * n + x + 1] ||
           !rec[static_cast<std::size_t>(y - 1) * n + x] ||
           !rec[static_cast<std::size_t>(y + 1) * n + x]))
        boundary.push_back({(x + 0.5) * m.h, (y + 0.5) * m.h});
  const Circle mec = min_enclosing_circle(std::move(boundary));
  out.rho_out = std::sqrt(std::max(mec.r2, 0.0));
  return out;
}

ShapeReport diagnose(const Field& f, int levels) {
  require_2d(f);
  if (levels < 3) throw std::invalid_argument("diagnose: need >= 3 levels");
  const double k = f.params.kappa();
  const double a = -1.0 + 2.0 * k, b = 1.0 - 2.0 * k;
  const double dt = (b - a) / (levels - 1);
  ShapeReport rep;
  rep.rows.reserve(levels);
  std::vector<double> g(levels);
  for (int i = 0; i < levels; ++i) {
    const double t = a + i * dt;
    const Mask m = superlevel_mask(f, t);
    ShapeReport::Row row;
    row.s = t;
    row.area = m.area();
    row.perimeter = perimeter(f, t);
    row.p_e = p_e(row.area, 2);
    try {
      row.fraenkel = fraenkel_asymmetry(m);
    } catch (const std::invalid_argument&) {
      row.fraenkel = std::nullopt;
    }
    g[i] = std::sqrt(2.0 * potential(t)) * (row.perimeter - row.p_e);
    rep.rows.push_back(row);
  }
  double sum = 0.5 * (g.front() + g.back());
  for (int i = 1; i + 1 < levels; ++i) sum += g[i];
  rep.defect = sum * dt;
  try {
    rep.radii = bonnesen_radii(superlevel_mask(f, 0.0));
  } catch (const std::invalid_argument&) {
    rep.radii = std::nullopt;
  }
  return rep;
}

void write_csv(const ShapeReport& r, std::ostream& os) {
  os << "s,area,perimeter,p_e,fraenkel\n";
  for (const auto& row : r.rows) {
    os << format_double(row.s) << ',' << format_double(row.area) << ','
       << format_double(row.perimeter) << ',' << format_double(row.p_e) << ',';
    if (row.fraenkel) os << format_double(*row.fraenkel);
    os << '\n';
  }
  os << "# defect=" << format_double(r.defect) << '\n';
  if (r.radii) {
    os << "# rho_in=" << format_double(r.radii->rho_in) << '\n';
    os << "# rho_out=" << format_double(r.radii->rho_out) << '\n';
    os << "# rho=" << format_double(r.radii->rho) << '\n';
  }
}

}  // namespace chl
