#include "c1k/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace c1k {

void SampledJet::validate() const {
  require(dim == 1 || dim == 2, "jet dimension must be 1 or 2");
  require(!sites.empty(), "jet needs at least one site");
  require(f.size() == sites.size() && df.size() == sites.size(),
          "jet value and derivative arrays must match the site count");
  require(isolated.empty() || isolated.size() == sites.size(), "isolated flags size mismatch");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    require(std::isfinite(sites[i].x) && std::isfinite(sites[i].y) && std::isfinite(f[i]) &&
                std::isfinite(df[i].x) && std::isfinite(df[i].y),
            "jet entries must be finite");
    if (dim == 1) require(sites[i].y == 0.0 && df[i].y == 0.0, "1-D jet with a y component");
  }
}

SampledJet sample_jet(const std::vector<Point2>& sites, const ScalarField& f,
                      const VectorField& df, int dim) {
  SampledJet jet;
  jet.dim = dim;
  jet.sites = sites;
  for (const auto& p : sites) {
    jet.f.push_back(f(p));
    jet.df.push_back(df(p));
  }
  return jet;
}

SampledJet sample_jet(const RasterSet2D& set, const ScalarField& f, const VectorField& df) {
  std::vector<Point2> sites;
  for (int idx : set.occupied_cells()) sites.push_back(set.center(idx));
  return sample_jet(sites, f, df, 2);
}

SiteIndex::SiteIndex(const std::vector<Point2>& sites, double cell) : sites_(&sites), cell_(cell) {
  require(cell > 0.0 && std::isfinite(cell), "index cell must be positive");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto bi = static_cast<std::int64_t>(std::floor(sites[i].x / cell));
    const auto bj = static_cast<std::int64_t>(std::floor(sites[i].y / cell));
    buckets_[key(bi, bj)].push_back(i);
  }
}

void SiteIndex::for_each_within(Point2 p, double r,
                                const std::function<void(std::size_t)>& fn) const {
  const auto& s = *sites_;
  const double k = std::ceil(r / cell_);
  if ((2 * k + 1) * (2 * k + 1) > static_cast<double>(buckets_.size())) {
    for (std::size_t j = 0; j < s.size(); ++j)
      if (distance(s[j], p) <= r) fn(j);
    return;
  }
  const auto bi = static_cast<std::int64_t>(std::floor(p.x / cell_));
  const auto bj = static_cast<std::int64_t>(std::floor(p.y / cell_));
  const auto kk = static_cast<std::int64_t>(k);
  for (std::int64_t di = -kk; di <= kk; ++di) {
    for (std::int64_t dj = -kk; dj <= kk; ++dj) {
      auto it = buckets_.find(key(bi + di, bj + dj));
      if (it == buckets_.end()) continue;
      for (std::size_t j : it->second)
        if (distance(s[j], p) <= r) fn(j);
    }
  }
}

long SiteIndex::find(Point2 p, double tol) const {
  long found = -1;
  double best = kInf;
  for_each_within(p, tol, [&](std::size_t j) {
    const double d = distance((*sites_)[j], p);
    if (d < best) {
      best = d;
      found = static_cast<long>(j);
    }
  });
  return found;
}

namespace {

double quotient(const SampledJet& jet, std::size_t x, std::size_t y) {
  const Point2 d = jet.sites[y] - jet.sites[x];
  return std::abs(jet.f[y] - jet.f[x] - dot(jet.df[x], d)) / norm(d);
}

}  // namespace

double diff_residual(const SampledJet& jet, std::size_t x, double delta) {
  double r = 0.0;
  for (std::size_t y = 0; y < jet.size(); ++y) {
    if (y == x) continue;
    const double d = distance(jet.sites[x], jet.sites[y]);
    if (d > 0.0 && d <= delta) r = std::max(r, quotient(jet, x, y));
  }
  return r;
}

std::vector<double> diff_residual_ladder(const SampledJet& jet, std::size_t x,
                                         const std::vector<double>& ladder) {
  std::vector<double> out(ladder.size(), 0.0);
  for (std::size_t y = 0; y < jet.size(); ++y) {
    if (y == x) continue;
    const double d = distance(jet.sites[x], jet.sites[y]);
    if (!(d > 0.0)) continue;
    double q = -1.0;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      if (d > ladder[k]) continue;
      if (q < 0.0) q = quotient(jet, x, y);
      out[k] = std::max(out[k], q);
    }
  }
  return out;
}

double uniform_residual(const SampledJet& jet, double delta) {
  require(delta > 0.0, "delta must be positive");
  SiteIndex index(jet.sites, delta);
  double r = 0.0;
  for (std::size_t x = 0; x < jet.size(); ++x) {
    index.for_each_within(jet.sites[x], delta, [&](std::size_t y) {
      if (y != x && !(jet.sites[y] == jet.sites[x])) r = std::max(r, quotient(jet, x, y));
    });
  }
  return r;
}

double site_diameter(const SampledJet& jet) {
  double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
  for (const auto& p : jet.sites) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

std::vector<double> default_ladder(double diam, int count) {
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(std::ldexp(diam, -k));
  return out;
}

namespace {

void fill_sup_terms(const SampledJet& jet, NormReport& r) {
  double sup_df_nonisolated = 0.0;
  for (std::size_t i = 0; i < jet.size(); ++i) {
    r.sup_f = std::max(r.sup_f, std::abs(jet.f[i]));
    const double g = norm(jet.df[i]);
    r.sup_df = std::max(r.sup_df, g);
    if (!jet.is_isolated(i)) sup_df_nonisolated = std::max(sup_df_nonisolated, g);
  }
  r.j1 = r.sup_f + r.sup_df;
  r.c1_upper = r.sup_f + sup_df_nonisolated;
}

void consider(const SampledJet& jet, std::size_t i, std::size_t j, NormReport& r) {
  const double d = distance(jet.sites[i], jet.sites[j]);
  if (!(d > 0.0)) return;
  const double q = std::abs(jet.f[i] - jet.f[j]) / d;
  const long a = static_cast<long>(std::min(i, j));
  const long b = static_cast<long>(std::max(i, j));
  if (q > r.lip || (q == r.lip && r.lip_i >= 0 && std::make_pair(a, b) < std::make_pair(r.lip_i, r.lip_j))) {
    r.lip = q;
    r.lip_i = a;
    r.lip_j = b;
  }
}

}  // namespace

NormReport lipschitz_bruteforce(const SampledJet& jet) {
  NormReport r;
  fill_sup_terms(jet, r);
  for (std::size_t i = 0; i < jet.size(); ++i)
    for (std::size_t j = i + 1; j < jet.size(); ++j) consider(jet, i, j, r);
  r.e1 = r.j1 + r.lip;
  return r;
}

NormReport norms(const SampledJet& jet) {
  jet.validate();
  NormReport r;
  fill_sup_terms(jet, r);
  const std::size_t n = jet.size();
  if (n >= 2) {
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (jet.f[i] > jet.f[imax]) imax = i;
      if (jet.f[i] < jet.f[imin]) imin = i;
    }
    const double range = jet.f[imax] - jet.f[imin];
    if (range > 0.0) {
      // Lower bound from the extreme pair and from near neighbors; any pair
      // beating it must be closer than range / bound.
      consider(jet, imax, imin, r);
      const double diam = site_diameter(jet);
      const double near = diam > 0.0 ? 2.0 * diam / std::sqrt(static_cast<double>(n)) : 1.0;
      {
        SiteIndex index(jet.sites, near);
        for (std::size_t i = 0; i < n; ++i)
          index.for_each_within(jet.sites[i], near, [&](std::size_t j) {
            if (j > i) consider(jet, i, j, r);
          });
      }
      const double radius = range / r.lip;
      if (radius > near) {
        SiteIndex index(jet.sites, radius);
        for (std::size_t i = 0; i < n; ++i)
          index.for_each_within(jet.sites[i], radius, [&](std::size_t j) {
            if (j > i) consider(jet, i, j, r);
          });
      }
    }
  }
  r.e1 = r.j1 + r.lip;
  return r;
}

namespace {

struct SquareKey {
  long a, b;
  friend bool operator<(const SquareKey& x, const SquareKey& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  }
};

double psi(double u) { return smoothstep(u + 0.5) - smoothstep(u - 0.5); }
double dpsi(double u) { return smoothstep_deriv(u + 0.5) - smoothstep_deriv(u - 0.5); }

class PartitionExtension : public Extension {
 public:
  PartitionExtension(const SampledJet& jet, Point2 origin, double rho)
      : origin_(origin), rho_(rho) {
    require(rho > 0.0 && std::isfinite(rho), "mesh size must be positive");
    jet.validate();
    for (std::size_t i = 0; i < jet.size(); ++i) {
      const Point2 p = jet.sites[i];
      const SquareKey k{static_cast<long>(std::floor((p.x - origin.x) / rho)),
                        static_cast<long>(std::floor((p.y - origin.y) / rho))};
      const Point2 c{origin.x + (k.a + 0.5) * rho, origin.y + (k.b + 0.5) * rho};
      auto it = chosen_.find(k);
      if (it == chosen_.end()) {
        chosen_.emplace(k, Local{p, jet.f[i], jet.df[i], distance(p, c)});
        continue;
      }
      const double d = distance(p, c);
      const Local& cur = it->second;
      if (d < cur.dist || (d == cur.dist && std::tie(p.x, p.y) < std::tie(cur.site.x, cur.site.y)))
        it->second = Local{p, jet.f[i], jet.df[i], d};
    }
    report.squares = chosen_.size();
    for (std::size_t i = 0; i < jet.size(); ++i) {
      report.sup_f_error = std::max(report.sup_f_error, std::abs(value(jet.sites[i]) - jet.f[i]));
      report.sup_df_error =
          std::max(report.sup_df_error, norm(gradient(jet.sites[i]) - jet.df[i]));
    }
  }

  double value(Point2 p) const override { return eval(p).v; }
  Point2 gradient(Point2 p) const override { return eval(p).g; }

  double weight_sum(Point2 p) const override {
    const double u = (p.x - origin_.x) / rho_;
    const double v = (p.y - origin_.y) / rho_;
    double s = 0.0;
    for (long a = static_cast<long>(std::floor(u - 1.5)); a <= static_cast<long>(std::floor(u + 0.5)); ++a)
      for (long b = static_cast<long>(std::floor(v - 1.5)); b <= static_cast<long>(std::floor(v + 0.5)); ++b)
        s += psi(u - a) * psi(v - b);
    return s;
  }

 private:
  struct Local {
    Point2 site;
    double f;
    Point2 df;
    double dist;
  };
  struct Eval {
    double v;
    Point2 g;
  };

  Eval eval(Point2 p) const {
    const double u = (p.x - origin_.x) / rho_;
    const double v = (p.y - origin_.y) / rho_;
    double num = 0.0, den = 0.0;
    Point2 dnum, dden;
    for (long a = static_cast<long>(std::floor(u - 1.5)); a <= static_cast<long>(std::floor(u + 0.5)); ++a) {
      for (long b = static_cast<long>(std::floor(v - 1.5)); b <= static_cast<long>(std::floor(v + 0.5)); ++b) {
        auto it = chosen_.find({a, b});
        if (it == chosen_.end()) continue;
        const double pa = psi(u - a), pb = psi(v - b);
        const double w = pa * pb;
        if (w == 0.0) continue;
        const Point2 dw{dpsi(u - a) * pb / rho_, pa * dpsi(v - b) / rho_};
        const Local& L = it->second;
        const double lin = L.f + dot(L.df, p - L.site);
        num += w * lin;
        den += w;
        dnum = dnum + lin * dw + w * L.df;
        dden = dden + dw;
      }
    }
    require(den > 0.0, "point outside the support of the partition of unity");
    const double val = num / den;
    return {val, (1.0 / den) * (dnum - val * dden)};
  }

  Point2 origin_;
  double rho_;
  std::map<SquareKey, Local> chosen_;
};

class BlowupExtension : public Extension {
 public:
  BlowupExtension(const SampledJet& jet, const RasterSet2D& set, double r, Point2 c)
      : set_(set), r_(r), c_(c), values_(set.size(), 0.0), known_(set.size(), 0) {
    require(r > 1.0 && std::isfinite(r), "blow-up factor must exceed 1");
    jet.validate();
    const double tol = 1e-9 * set.h();
    for (std::size_t i = 0; i < jet.size(); ++i) {
      const int idx = set.cell_of(jet.sites[i]);
      require(idx >= 0 && set.occupied(idx) && distance(set.center(idx), jet.sites[i]) <= tol,
              "blow-up needs jet sites on occupied cell centers");
      values_[idx] = jet.f[i];
      known_[idx] = 1;
    }
    for (int idx : set.occupied_cells()) {
      const Point2 q = c_ + (1.0 / r_) * (set.center(idx) - c_);
      const int cell = set.cell_of(q);
      require(cell >= 0 && set.interior(cell),
              "inclusion K in r*interior(K) fails for this center and factor");
    }
    for (std::size_t i = 0; i < jet.size(); ++i) {
      report.sup_f_error = std::max(report.sup_f_error, std::abs(value(jet.sites[i]) - jet.f[i]));
      report.sup_df_error =
          std::max(report.sup_df_error, norm(gradient(jet.sites[i]) - jet.df[i]));
    }
  }

  double value(Point2 p) const override { return eval(p).v; }
  Point2 gradient(Point2 p) const override { return eval(p).g; }

 private:
  struct Eval {
    double v;
    Point2 g;
  };

  Eval eval(Point2 p) const {
    const Point2 q = c_ + (1.0 / r_) * (p - c_);
    const double h = set_.h();
    const double fx = (q.x - set_.origin().x) / h - 0.5;
    const double fy = (q.y - set_.origin().y) / h - 0.5;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const double tx = fx - i0, ty = fy - j0;
    double v[2][2];
    for (int dj = 0; dj < 2; ++dj) {
      for (int di = 0; di < 2; ++di) {
        require(set_.in_grid(i0 + di, j0 + dj), "interpolation stencil leaves the grid");
        const int idx = set_.index(i0 + di, j0 + dj);
        require(known_[idx] != 0, "interpolation stencil incomplete");
        v[dj][di] = values_[idx];
      }
    }
    const double val = (1 - ty) * ((1 - tx) * v[0][0] + tx * v[0][1]) +
                       ty * ((1 - tx) * v[1][0] + tx * v[1][1]);
    const double gx = ((1 - ty) * (v[0][1] - v[0][0]) + ty * (v[1][1] - v[1][0])) / h;
    const double gy = ((1 - tx) * (v[1][0] - v[0][0]) + tx * (v[1][1] - v[0][1])) / h;
    return {val, {gx / r_, gy / r_}};
  }

  const RasterSet2D& set_;
  double r_;
  Point2 c_;
  std::vector<double> values_;
  std::vector<std::uint8_t> known_;
};

}  // namespace

std::unique_ptr<Extension> extend_partition_unity(const SampledJet& jet, Point2 origin, double rho) {
  return std::make_unique<PartitionExtension>(jet, origin, rho);
}

std::unique_ptr<Extension> extend_blowup(const SampledJet& jet, const RasterSet2D& set, double r,
                                         Point2 c) {
  return std::make_unique<BlowupExtension>(jet, set, r, c);
}

double jet_ftc_residual(const SampledJet& jet, const Polyline& path, int levels, double tol) {
  require(levels >= 1, "levels must be >= 1");
  const double scale = std::max(1.0, site_diameter(jet));
  SiteIndex index(jet.sites, scale * 1e-6);
  std::vector<std::size_t> ids;
  for (const auto& p : path.vertices()) {
    const long k = index.find(p, scale * 1e-9);
    require(k >= 0, "path vertex is not a jet site");
    ids.push_back(static_cast<std::size_t>(k));
  }
  const auto& v = path.vertices();
  auto level_sum = [&](int level) {
    const std::int64_t pieces = std::int64_t{1} << level;
    double sum = 0.0;
    for (std::size_t j = 1; j < v.size(); ++j) {
      const Point2 d = v[j] - v[j - 1];
      const Point2 ga = jet.df[ids[j - 1]], gb = jet.df[ids[j]];
      const Point2 step = (1.0 / static_cast<double>(pieces)) * d;
      for (std::int64_t k = 0; k < pieces; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(pieces);
        sum += dot((1.0 - t) * ga + t * gb, step);
      }
    }
    return sum;
  };
  double value = level_sum(0);
  for (int l = 1; l < levels; ++l) {
    const double cur = level_sum(l);
    const double delta = std::abs(cur - value);
    value = cur;
    if (delta < tol) break;
  }
  return std::abs(value - (jet.f[ids.back()] - jet.f[ids.front()]));
}

}  // namespace c1k
