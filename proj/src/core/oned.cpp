#include "c1k/oned.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace c1k {

std::string to_string(SigmaKind k) {
  switch (k) {
    case SigmaKind::Finite: return "Finite";
    case SigmaKind::Infinite: return "Infinite";
    case SigmaKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(EqualityKind k) {
  switch (k) {
    case EqualityKind::Equal: return "Equal";
    case EqualityKind::NotEqual: return "NotEqual";
    case EqualityKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

constexpr std::int64_t kMaxIndex = std::int64_t{1} << 62;

// Smallest k in [lo, hi] with pred(k) true, for pred monotone false..true; hi + 1 if none.
std::int64_t first_true(std::int64_t lo, std::int64_t hi, const std::function<bool(std::int64_t)>& pred) {
  if (lo > hi || !pred(hi)) return hi + 1;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// Max of fn over [lo, hi]: exhaustive when small, else evenly spaced samples plus endpoints.
double sampled_max(std::int64_t lo, std::int64_t hi, const std::function<double(std::int64_t)>& fn,
                   std::int64_t exhaustive = 4096) {
  double best = 0.0;
  if (hi - lo + 1 <= exhaustive) {
    for (std::int64_t k = lo; k <= hi; ++k) best = std::max(best, fn(k));
    return best;
  }
  const double span = static_cast<double>(hi - lo);
  for (std::int64_t s = 0; s <= exhaustive; ++s) {
    const auto k = lo + static_cast<std::int64_t>(std::floor(span * static_cast<double>(s) / exhaustive));
    best = std::max(best, fn(std::min(k, hi)));
  }
  return best;
}

// Tail sup of the closed-form ratio over dyadic windows [2^m, 2^(m+1)).
std::vector<double> sequence_windows(const GapRule& r, int max_window) {
  std::vector<double> out;
  for (int m = 0; m < max_window; ++m) {
    const std::int64_t lo = std::max<std::int64_t>(r.start, std::int64_t{1} << m);
    const std::int64_t hi = (std::int64_t{1} << (m + 1)) - 1;
    if (lo > hi) continue;
    out.push_back(sampled_max(lo, hi, [&](std::int64_t k) { return r.gap_ratio(k); }));
  }
  return out;
}

// Sup over rule gaps contained in (xi - eps, xi + eps) of the farthest-point ratio.
double sequence_rule_sup(const GapRule& r, double xi, double eps, const SigmaPolicy& policy) {
  const double acc = r.accumulation;
  const double wlo = xi - eps, whi = xi + eps;
  if (acc > wlo && acc < whi && acc != xi) return kInf;
  double best = 0.0;
  for (int sgn : {1, -1}) {
    if (sgn == 1 && !r.has_right()) continue;
    if (sgn == -1 && !r.has_left()) continue;
    // Far endpoint B_k = acc + sgn x_k, near endpoint A_k = acc + sgn (x_{k+1} + w_{k+1}).
    auto far = [&](std::int64_t k) { return acc + sgn * r.offset(k); };
    auto nearp = [&](std::int64_t k) { return acc + sgn * (r.offset(k + 1) + r.element_width(k + 1)); };
    auto far_in = [&](std::int64_t k) { return sgn == 1 ? far(k) <= whi : far(k) >= wlo; };
    auto near_in = [&](std::int64_t k) { return sgn == 1 ? nearp(k) >= wlo : nearp(k) <= whi; };
    const std::int64_t k_lo = first_true(r.start, kMaxIndex, far_in);
    if (k_lo > kMaxIndex) continue;
    const bool unbounded = sgn == 1 ? acc >= wlo : acc <= whi;
    if (unbounded) {
      if (acc != xi) return kInf;
      // Ratios are the closed-form gap ratios from k_lo on.
      std::vector<double> sups;
      for (int m = 0; m < policy.max_window; ++m) {
        const std::int64_t lo = std::max<std::int64_t>(k_lo, std::int64_t{1} << m);
        const std::int64_t hi = (std::int64_t{1} << (m + 1)) - 1;
        if (lo > hi) continue;
        sups.push_back(sampled_max(lo, hi, [&](std::int64_t k) { return r.gap_ratio(k); }));
      }
      if (sups.empty()) continue;
      const auto v = classify_windows(sups, policy);
      if (v.kind == SigmaKind::Infinite) return kInf;
      best = std::max(best, *std::max_element(sups.begin(), sups.end()));
      continue;
    }
    const std::int64_t k_hi = first_true(r.start, kMaxIndex, [&](std::int64_t k) { return !near_in(k); }) - 1;
    if (k_hi < k_lo) continue;
    best = std::max(best, sampled_max(k_lo, k_hi, [&](std::int64_t k) {
      const double len = r.gap_length(k);
      return std::max(std::abs(far(k) - xi), std::abs(nearp(k) - xi)) / len;
    }, std::int64_t{1} << 20));
  }
  return best;
}

// Cantor gaps of generation <= max_gen inside the window (xi - eps, xi + eps).
double cantor_window_sup(double lo, double hi, double xi, double eps, int max_gen) {
  double best = 0.0;
  std::function<void(double, double, int)> walk = [&](double u, double v, int gen) {
    if (v <= xi - eps || u >= xi + eps || gen >= max_gen) return;
    const double third = (v - u) / 3.0;
    const double a = u + third, b = v - third;
    if (a >= xi - eps && b <= xi + eps)
      best = std::max(best, std::max(std::abs(a - xi), std::abs(b - xi)) / (b - a));
    walk(u, a, gen + 1);
    walk(b, v, gen + 1);
  };
  walk(lo, hi, 0);
  return best;
}

bool sequence_contains(const GapRule& r, double x) {
  const double d = std::abs(x - r.accumulation);
  if (d == 0.0) return true;
  if (x > r.accumulation ? !r.has_right() : !r.has_left()) return false;
  if (r.kind == GapRuleKind::ExplicitList)
    return std::find(r.offsets.begin(), r.offsets.end(), d) != r.offsets.end();
  // Largest n whose offset is still >= d.
  const std::int64_t n = first_true(r.start, kMaxIndex, [&](std::int64_t k) { return r.offset(k) < d; }) - 1;
  if (n < r.start) return false;
  const double x_n = r.offset(n);
  return d >= x_n && d <= x_n + r.element_width(n);
}

}  // namespace

bool contains_point(const CompactSet1D& set, double x) {
  for (const auto& iv : set.explicit_intervals())
    if (iv.contains(x)) return true;
  for (const auto& r : set.rules()) {
    if (r.is_cantor()) {
      if (cantor_contains(x, r.span_lo, r.span_hi)) return true;
    } else if (sequence_contains(r, x)) {
      return true;
    }
  }
  return false;
}

SigmaVerdict classify_windows(const std::vector<double>& s, const SigmaPolicy& policy) {
  SigmaVerdict v;
  v.policy = policy;
  const int w = policy.windows;
  for (std::size_t i = 0; i + w <= s.size(); ++i) {
    bool run = true;
    for (int k = 0; k < w && run; ++k) {
      if (!(s[i + k] > policy.threshold)) run = false;
      if (k > 0 && !(s[i + k] >= policy.growth * s[i + k - 1])) run = false;
    }
    if (run) {
      v.kind = SigmaKind::Infinite;
      return v;
    }
  }
  if (s.size() >= 3) {
    const std::size_t n = s.size();
    bool stable = true;
    for (std::size_t k = n - 2; k < n; ++k)
      if (!(std::abs(s[k] - s[k - 1]) <= policy.stabilization * std::abs(s[k]))) stable = false;
    if (stable) {
      v.kind = SigmaKind::Finite;
      v.upper = std::max({s[n - 1], s[n - 2], s[n - 3]});
      v.lower = s[n - 1];
    }
  }
  return v;
}

double sigma_eps(const CompactSet1D& set, double xi, double eps, const SigmaPolicy& policy) {
  require(eps > 0.0, "epsilon must be positive");
  require(contains_point(set, xi), "xi is not in the set");
  double best = 0.0;
  for (const auto& g : gaps_in(set, {xi - eps, xi + eps}).gaps)
    best = std::max(best, std::max(std::abs(g.lo - xi), std::abs(g.hi - xi)) / g.length());
  for (const auto& r : set.rules()) {
    if (r.is_cantor()) {
      if (cantor_meets(xi - eps, xi + eps, r.span_lo, r.span_hi)) {
        // Other Cantor points in the window carry gaps of every small size.
        return kInf;
      }
    } else if (r.kind == GapRuleKind::ExplicitList) {
      continue;  // materialized in full
    } else {
      best = std::max(best, sequence_rule_sup(r, xi, eps, policy));
      if (std::isinf(best)) return best;
    }
  }
  return best;
}

SigmaResult sigma(const CompactSet1D& set, double xi, const SigmaPolicy& policy) {
  require(contains_point(set, xi), "xi is not in the set");
  SigmaResult res;
  res.verdict.policy = policy;
  auto& prof = res.profile;
  prof.xi = xi;
  const Interval1D hull = set.hull();
  const double scale = std::max(hull.length(), 1.0);
  for (int k = 1; k <= 30; ++k) {
    const double eps = std::ldexp(scale, -k);
    prof.eps_ladder.push_back(eps);
    prof.sigma_eps.push_back(sigma_eps(set, xi, eps, policy));
  }

  std::vector<double> windows;
  for (const auto& r : set.rules()) {
    if (!r.is_sequence() || r.accumulation != xi) continue;
    const auto w = sequence_windows(r, policy.max_window);
    if (windows.size() < w.size()) windows.resize(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) windows[i] = std::max(windows[i], w[i]);
    prof.source = "sequence_rule";
  }
  if (prof.source.empty()) {
    for (const auto& r : set.rules()) {
      if (!r.is_cantor() || !cantor_contains(xi, r.span_lo, r.span_hi)) continue;
      const double len = r.span_hi - r.span_lo;
      std::vector<double> w;
      for (int g = 1; g <= policy.max_generation; ++g)
        w.push_back(cantor_window_sup(r.span_lo, r.span_hi, xi, len * std::pow(3.0, -g), 2 * g));
      if (windows.size() < w.size()) windows.resize(w.size(), 0.0);
      for (std::size_t i = 0; i < w.size(); ++i) windows[i] = std::max(windows[i], w[i]);
      prof.source = "cantor_rule";
    }
  }
  if (!prof.source.empty()) {
    prof.tail_window_sups = windows;
    res.verdict = classify_windows(windows, policy);
    return res;
  }
  // Not an accumulation point of gaps: sigma is the limit of the eps ladder.
  prof.source = "finite_gaps";
  res.verdict.kind = SigmaKind::Finite;
  res.verdict.upper = res.verdict.lower = prof.sigma_eps.back();
  return res;
}

std::vector<double> relevant_sites(const CompactSet1D& set) {
  std::vector<double> sites;
  for (const auto& r : set.rules()) {
    if (r.is_cantor()) {
      const double L = r.span_hi - r.span_lo;
      for (double t : {0.0, 1.0 / 9, 2.0 / 9, 1.0 / 4, 1.0 / 3, 2.0 / 3, 3.0 / 4, 7.0 / 9, 8.0 / 9, 1.0})
        sites.push_back(r.span_lo + t * L);
    } else {
      sites.push_back(r.accumulation);
    }
  }
  std::vector<double> ends;
  for (const auto& iv : set.explicit_intervals()) {
    ends.push_back(iv.lo);
    ends.push_back(iv.hi);
  }
  for (const auto& g : gaps_in(set, set.hull()).gaps)
    for (double e : {g.lo, g.hi})
      if (std::find(ends.begin(), ends.end(), e) != ends.end()) sites.push_back(e);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

EqualityResult equality_c1_restriction(const CompactSet1D& set, const SigmaPolicy& policy) {
  EqualityResult out;
  bool inconclusive = false;
  bool found = false;
  for (double xi : relevant_sites(set)) {
    auto s = sigma(set, xi, policy);
    out.sites.push_back({xi, s.verdict});
    if (s.verdict.kind == SigmaKind::Infinite && !found) {
      found = true;
      out.witness = xi;
    }
    if (s.verdict.kind == SigmaKind::Inconclusive) inconclusive = true;
  }
  out.kind = found ? EqualityKind::NotEqual
                   : (inconclusive ? EqualityKind::Inconclusive : EqualityKind::Equal);
  return out;
}

std::vector<double> whitney_1d_test(const SampledJet& jet, double xi,
                                    const std::vector<double>& ladder) {
  require(jet.dim == 1, "whitney_1d_test needs a 1-D jet");
  require(!ladder.empty(), "delta ladder must be nonempty");
  long at = -1;
  for (std::size_t i = 0; i < jet.size(); ++i)
    if (std::abs(jet.sites[i].x - xi) <= 1e-12 * std::max(1.0, std::abs(xi))) at = static_cast<long>(i);
  require(at >= 0, "xi must be a jet site");
  const double slope = jet.df[at].x;
  std::vector<std::size_t> order(jet.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return jet.sites[a].x < jet.sites[b].x; });
  std::vector<double> out;
  const double dmin = *std::min_element(ladder.begin(), ladder.end());
  for (double delta : ladder) {
    std::vector<std::size_t> w;
    for (std::size_t i : order)
      if (std::abs(jet.sites[i].x - xi) < delta) w.push_back(i);
    if (delta == dmin) require(w.size() >= 2, "fewer than two sites in the smallest window");
    double sup = 0.0;
    for (std::size_t p = 0; p < w.size(); ++p)
      for (std::size_t q = p + 1; q < w.size(); ++q) {
        const double dx = jet.sites[w[q]].x - jet.sites[w[p]].x;
        if (dx == 0.0) continue;
        sup = std::max(sup, std::abs((jet.f[w[q]] - jet.f[w[p]]) / dx - slope));
      }
    out.push_back(sup);
  }
  return out;
}

double Counterexample::value_at(double x) const {
  if (gaps.empty()) return 0.0;
  const double side = gaps.front().b > xi ? 1.0 : -1.0;
  const double d = side * (x - xi);
  if (d <= 0.0) return 0.0;
  double prev = kInf;
  for (const auto& g : gaps) {
    const double y = side * (g.y - xi);
    if (d > y && d < prev) return y / g.n;
    prev = y;
  }
  throw ContractError("point lies below the last extracted window");
}

namespace {

struct Candidate {
  double a_dist, b_dist;  // near and far distance from xi
  std::int64_t index;
};

struct GreedyState {
  int n = 1;
  double prev_near = kInf;
  double prev_mid = kInf;
  double prev_len = 0.0;

  bool accepts(double A, double B) const {
    const double len = B - A;
    if (!(len > 0.0)) return false;
    if (!(B < 1.0 / n)) return false;
    if (!(B > 2.0 * n * len)) return false;
    if (n > 1) {
      if (!(B < prev_near)) return false;
      if (!(prev_mid - 0.5 * (A + B) >= (n - 1) * prev_len)) return false;
    }
    return true;
  }
  void take(double A, double B) {
    prev_near = A;
    prev_mid = 0.5 * (A + B);
    prev_len = B - A;
    ++n;
  }
};

std::vector<Candidate> extract_sequence(const GapRule& r, int count) {
  std::vector<Candidate> out;
  GreedyState st;
  std::int64_t k = r.start - 1;
  auto A = [&](std::int64_t j) { return r.offset(j + 1) + r.element_width(j + 1); };
  auto ok = [&](std::int64_t j) { return st.accepts(A(j), r.offset(j)); };
  while (static_cast<int>(out.size()) < count) {
    std::int64_t found = -1;
    for (std::int64_t j = k + 1; j <= k + 4096; ++j)
      if (ok(j)) {
        found = j;
        break;
      }
    if (found < 0) {
      // Gallop, then bisect back to the first accepted index.
      std::int64_t lo = k + 4096, step = 4096;
      while (lo + step < kMaxIndex && !ok(lo + step)) {
        lo += step;
        step *= 2;
      }
      require(lo + step < kMaxIndex, "gap subsequence extraction exhausted the depth budget");
      std::int64_t hi = lo + step;
      while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) hi = mid;
        else lo = mid;
      }
      found = hi;
    }
    out.push_back({A(found), r.offset(found), found});
    st.take(A(found), r.offset(found));
    k = found;
  }
  return out;
}

std::vector<Candidate> extract_cantor(double lo, double hi, double xi, int count, int max_gen) {
  std::vector<Candidate> out;
  GreedyState st;
  while (static_cast<int>(out.size()) < count) {
    bool found = false;
    Candidate c{};
    // In-order walk from the right: gaps in decreasing position.
    std::function<void(double, double, int)> walk = [&](double u, double v, int gen) {
      if (found || gen >= max_gen || v <= xi) return;
      if (u - xi >= std::min(1.0 / st.n, st.prev_near)) return;
      const double third = (v - u) / 3.0;
      const double a = u + third, b = v - third;
      walk(b, v, gen + 1);
      if (found) return;
      if (a > xi && st.accepts(a - xi, b - xi)) {
        found = true;
        c = {a - xi, b - xi, gen + 1};
        return;
      }
      walk(u, a, gen + 1);
    };
    walk(lo, hi, 0);
    require(found, "gap subsequence extraction exhausted the depth budget");
    out.push_back(c);
    st.take(c.a_dist, c.b_dist);
  }
  return out;
}

}  // namespace

Counterexample counterexample_function(const CompactSet1D& set, double xi, int windows) {
  require(windows >= 1, "window count must be positive");
  require(contains_point(set, xi), "xi is not in the set");
  const int count = windows + 1;
  const GapRule* rule = nullptr;
  for (const auto& r : set.rules())
    if ((r.is_sequence() && r.accumulation == xi) ||
        (r.is_cantor() && cantor_contains(xi, r.span_lo, r.span_hi)))
      rule = &r;
  require(rule != nullptr, "xi is not an accumulation point of a gap rule");

  double side = 1.0;
  std::vector<Candidate> cands;
  if (rule->is_sequence()) {
    side = rule->has_right() ? 1.0 : -1.0;
    cands = extract_sequence(*rule, count);
  } else {
    cands = extract_cantor(rule->span_lo, rule->span_hi, xi, count, 28);
  }

  Counterexample ce;
  ce.xi = xi;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    ExtractedGap g;
    g.n = static_cast<int>(i) + 1;
    g.a = xi + side * cands[i].a_dist;
    g.b = xi + side * cands[i].b_dist;
    g.y = 0.5 * (g.a + g.b);
    g.index = cands[i].index;
    ce.gaps.push_back(g);
  }

  std::vector<double> xs{xi};
  std::vector<std::uint8_t> iso{0};
  const double last_mid = cands.back().a_dist + 0.5 * (cands.back().b_dist - cands.back().a_dist);
  if (rule->is_sequence()) {
    for (std::int64_t k = rule->start;; ++k) {
      const double x = rule->offset(k);
      if (x <= last_mid) break;
      require(xs.size() < 2'000'000, "counterexample jet exceeds the site budget");
      const double w = rule->element_width(k);
      xs.push_back(xi + side * x);
      iso.push_back(w == 0.0);
      if (w > 0.0) {
        xs.push_back(xi + side * (x + w));
        iso.push_back(0);
      }
    }
  } else {
    for (const auto& g : ce.gaps) {
      xs.push_back(g.a);
      xs.push_back(g.b);
      iso.push_back(0);
      iso.push_back(0);
    }
  }
  // Keep only points strictly above the last midpoint (where f is defined).
  SampledJet jet;
  jet.dim = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(side * (xs[i] - xi) > last_mid)) continue;
    jet.sites.push_back({xs[i], 0.0});
    jet.f.push_back(ce.value_at(xs[i]));
    jet.df.push_back({0.0, 0.0});
    jet.isolated.push_back(iso[i]);
  }
  ce.jet = std::move(jet);
  return ce;
}

}  // namespace c1k
