#include "c1k/set1d.hpp"

#include <algorithm>
#include <cmath>

namespace c1k {

std::string to_string(GapRuleKind kind) {
  switch (kind) {
    case GapRuleKind::ExplicitList: return "explicit_list";
    case GapRuleKind::Geometric: return "geometric";
    case GapRuleKind::Power: return "power";
    case GapRuleKind::CantorMiddleThird: return "cantor_middle_third";
    case GapRuleKind::CustomSequence: return "custom_sequence";
  }
  return "unknown";
}

std::string to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Both: return "both";
  }
  return "unknown";
}

GapRuleKind gap_rule_kind_from_string(const std::string& s) {
  if (s == "explicit_list") return GapRuleKind::ExplicitList;
  if (s == "geometric") return GapRuleKind::Geometric;
  if (s == "power") return GapRuleKind::Power;
  if (s == "cantor_middle_third" || s == "cantor") return GapRuleKind::CantorMiddleThird;
  if (s == "custom_sequence") return GapRuleKind::CustomSequence;
  throw ParseError("unknown gap rule kind: " + s);
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  if (s == "both") return Side::Both;
  throw ParseError("unknown side: " + s);
}

double SequenceLaw::log_value(double n) const {
  return std::log(scale) - power * std::log(n) - rate * n;
}

double SequenceLaw::value(double n) const {
  if (scale == 0.0) return 0.0;
  return std::exp(log_value(n));
}

GapRule GapRule::geometric(double a, double accumulation, Side side, double scale) {
  require(a > 1.0, "geometric rule needs a > 1");
  GapRule r;
  r.kind = GapRuleKind::Geometric;
  r.accumulation = accumulation;
  r.side = side;
  r.law = {scale, 0.0, std::log(a)};
  r.parameter = a;
  return r;
}

GapRule GapRule::power(double p, double accumulation, Side side, double scale) {
  require(p > 0.0, "power rule needs p > 0");
  GapRule r;
  r.kind = GapRuleKind::Power;
  r.accumulation = accumulation;
  r.side = side;
  r.law = {scale, p, 0.0};
  r.parameter = p;
  return r;
}

GapRule GapRule::cantor(int level, double lo, double hi) {
  GapRule r;
  r.kind = GapRuleKind::CantorMiddleThird;
  r.level = level;
  r.span_lo = lo;
  r.span_hi = hi;
  r.accumulation = lo;
  r.side = Side::Both;
  return r;
}

GapRule GapRule::explicit_list(std::vector<double> offsets, double accumulation, Side side) {
  GapRule r;
  r.kind = GapRuleKind::ExplicitList;
  r.offsets = std::move(offsets);
  r.accumulation = accumulation;
  r.side = side;
  return r;
}

GapRule GapRule::custom(SequenceLaw law, SequenceLaw width, double accumulation, Side side) {
  GapRule r;
  r.kind = GapRuleKind::CustomSequence;
  r.law = law;
  r.width = width;
  r.accumulation = accumulation;
  r.side = side;
  return r;
}

bool GapRule::is_sequence() const {
  return kind == GapRuleKind::Geometric || kind == GapRuleKind::Power ||
         kind == GapRuleKind::CustomSequence;
}

double GapRule::offset(std::int64_t n) const { return law.value(static_cast<double>(n)); }

double GapRule::element_width(std::int64_t n) const {
  return width.value(static_cast<double>(n));
}

double GapRule::gap_relative_length(std::int64_t k) const {
  const double kd = static_cast<double>(k);
  // log(x_{k+1} / x_k)
  const double log_q = -law.power * std::log1p(1.0 / kd) - law.rate;
  double rel = -std::expm1(log_q);
  if (!width.vanishing()) rel -= std::exp(width.log_value(kd + 1.0) - law.log_value(kd));
  return rel;
}

double GapRule::gap_ratio(std::int64_t k) const {
  const double rel = gap_relative_length(k);
  if (!(rel > 0.0)) return kInf;
  return 1.0 / rel;
}

double GapRule::gap_length(std::int64_t k) const { return offset(k) * gap_relative_length(k); }

void GapRule::validate() const {
  switch (kind) {
    case GapRuleKind::ExplicitList: {
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        require(std::isfinite(offsets[i]) && offsets[i] > 0.0,
                "explicit gap rule offsets must be positive");
        if (i > 0) require(offsets[i] < offsets[i - 1], "explicit offsets must decrease");
      }
      break;
    }
    case GapRuleKind::CantorMiddleThird:
      require(level >= 0 && level <= 22, "cantor level must be in [0, 22]");
      require(span_lo < span_hi, "cantor span must be nondegenerate");
      break;
    default: {
      require(law.scale > 0.0 && law.power >= 0.0 && law.rate >= 0.0,
              "sequence law needs scale > 0 and nonnegative power/rate");
      require(law.power > 0.0 || law.rate > 0.0, "sequence law must decrease to 0");
      require(width.scale >= 0.0, "element widths must be nonnegative");
      require(start >= 1, "sequence start index must be >= 1");
      // Disjointness and positive gap lengths, at the head and along dyadic windows.
      for (std::int64_t k = start; k < start + 4096; ++k)
        require(gap_relative_length(k) > 0.0, "sequence rule elements overlap");
      for (int m = 12; m < 60; ++m) {
        const std::int64_t k = std::max<std::int64_t>(start, std::int64_t{1} << m);
        require(gap_relative_length(k) > 0.0, "sequence rule elements overlap in the tail");
      }
      break;
    }
  }
  require(std::isfinite(accumulation), "accumulation point must be finite");
}

namespace {

void cantor_intervals(double lo, double hi, int level, std::vector<Interval1D>& out) {
  if (level == 0) {
    out.push_back({lo, hi});
    return;
  }
  const double third = (hi - lo) / 3.0;
  cantor_intervals(lo, lo + third, level - 1, out);
  cantor_intervals(hi - third, hi, level - 1, out);
}

bool overlaps_open(const Interval1D& a, const Interval1D& b) {
  return std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
}

}  // namespace

CompactSet1D::CompactSet1D(std::vector<Interval1D> intervals, std::vector<GapRule> rules,
                           int truncation_depth)
    : explicit_(std::move(intervals)), rules_(std::move(rules)), depth_(truncation_depth) {
  require(depth_ >= 1, "truncation depth must be positive");
  for (const auto& iv : explicit_)
    require(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi,
            "interval must satisfy lo <= hi with finite endpoints");
  for (const auto& r : rules_) r.validate();
  materialize();
  require(!materialized_.empty(), "compact set must be nonempty");
}

void CompactSet1D::materialize() {
  std::vector<Interval1D> pieces = explicit_;
  for (const auto& r : rules_) {
    if (r.is_cantor()) {
      std::vector<Interval1D> level;
      cantor_intervals(r.span_lo, r.span_hi, r.level, level);
      for (const auto& iv : level) {
        pieces.push_back(iv);
        if (iv.length() > 0.0) unresolved_.push_back(iv);
      }
      continue;
    }
    const double acc = r.accumulation;
    pieces.push_back({acc, acc});
    if (r.kind == GapRuleKind::ExplicitList) {
      for (double off : r.offsets) {
        if (r.has_right()) pieces.push_back({acc + off, acc + off});
        if (r.has_left()) pieces.push_back({acc - off, acc - off});
      }
      continue;
    }
    const std::int64_t last = r.start + depth_ - 1;
    for (std::int64_t n = r.start; n <= last; ++n) {
      const double x = r.offset(n);
      const double w = r.element_width(n);
      if (r.has_right()) pieces.push_back({acc + x, acc + x + w});
      if (r.has_left()) pieces.push_back({acc - x - w, acc - x});
    }
    const double inner = r.offset(last);
    if (r.has_right()) unresolved_.push_back({acc, acc + inner});
    if (r.has_left()) unresolved_.push_back({acc - inner, acc});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
  for (const auto& iv : pieces) {
    if (!materialized_.empty() && iv.lo <= materialized_.back().hi) {
      materialized_.back().hi = std::max(materialized_.back().hi, iv.hi);
    } else {
      materialized_.push_back(iv);
    }
  }
  std::sort(unresolved_.begin(), unresolved_.end(),
            [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
}

Interval1D CompactSet1D::hull() const {
  return {materialized_.front().lo, materialized_.back().hi};
}

bool CompactSet1D::contains(double x) const {
  auto it = std::upper_bound(materialized_.begin(), materialized_.end(), x,
                             [](double v, const Interval1D& iv) { return v < iv.lo; });
  if (it == materialized_.begin()) return false;
  return std::prev(it)->contains(x);
}

GapList gaps_in(const CompactSet1D& set, Interval1D window) {
  GapList out;
  const auto& m = set.materialized();
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const Interval1D gap{m[i].hi, m[i + 1].lo};
    if (!(gap.lo < gap.hi)) continue;
    bool spurious = false;
    for (const auto& u : set.unresolved())
      if (overlaps_open(gap, u)) spurious = true;
    if (spurious) continue;
    if (gap.lo >= window.lo && gap.hi <= window.hi) out.gaps.push_back(gap);
  }
  for (const auto& u : set.unresolved())
    if (overlaps_open(u, window)) out.truncated = true;
  return out;
}

ComponentCount1D components(const CompactSet1D& set) {
  ComponentCount1D c;
  c.count = set.materialized().size();
  for (const auto& r : set.rules())
    if (r.is_sequence() || r.is_cantor()) c.infinite_via_rule = true;
  return c;
}

bool cantor_contains(double x, double lo, double hi, int max_depth) {
  if (x < lo || x > hi) return false;
  double t = (x - lo) / (hi - lo);
  double tol = 1e-14;
  for (int d = 0; d < max_depth && tol < 1e-3; ++d) {
    t *= 3.0;
    tol *= 3.0;
    if (std::abs(t - 1.0) <= tol || std::abs(t - 2.0) <= tol) return true;
    if (t > 1.0 && t < 2.0) return false;
    if (t >= 2.0) t -= 2.0;
  }
  return true;
}

bool cantor_meets(double u, double v, double lo, double hi, int max_depth) {
  if (v < lo || u > hi) return false;
  if (u <= lo || v >= hi) return true;
  if (max_depth == 0) return true;
  const double third = (hi - lo) / 3.0;
  return cantor_meets(u, v, lo, lo + third, max_depth - 1) ||
         cantor_meets(u, v, hi - third, hi, max_depth - 1);
}

double cantor_function(double x, double lo, double hi, int max_depth) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  double t = (x - lo) / (hi - lo);
  double value = 0.0;
  double weight = 0.5;
  for (int d = 0; d < max_depth; ++d) {
    t *= 3.0;
    if (t >= 1.0 && t < 2.0) return value + weight;
    if (t >= 2.0) {
      value += weight;
      t -= 2.0;
    }
    weight *= 0.5;
  }
  return value;
}

}  // namespace c1k
