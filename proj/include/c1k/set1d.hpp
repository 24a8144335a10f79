#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c1k/common.hpp"

namespace c1k {

/// Closed interval [lo, hi]; lo == hi is a point.
struct Interval1D {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval1D&, const Interval1D&) = default;
};

enum class GapRuleKind { ExplicitList, Geometric, Power, CantorMiddleThird, CustomSequence };
enum class Side { Left, Right, Both };

std::string to_string(GapRuleKind kind);
std::string to_string(Side side);
GapRuleKind gap_rule_kind_from_string(const std::string& s);
Side side_from_string(const std::string& s);

/// Closed-form positive sequence  scale * n^(-power) * exp(-rate * n).
struct SequenceLaw {
  double scale = 1.0;
  double power = 0.0;
  double rate = 0.0;

  double log_value(double n) const;
  double value(double n) const;
  bool vanishing() const { return scale == 0.0; }
};

/// Symbolic description of infinitely many gaps accumulating at a point.
///
/// Sequence rules (Geometric, Power, CustomSequence) describe elements
/// [x_n, x_n + w_n] placed at `accumulation + x_n` (right side) or mirrored
/// (left side), for n >= start. Gap k sits between element k+1 and element k.
/// CantorMiddleThird describes the middle-third Cantor set over
/// [span_lo, span_hi]; `level` generations are materialized.
struct GapRule {
  GapRuleKind kind = GapRuleKind::Geometric;
  double accumulation = 0.0;
  Side side = Side::Right;
  std::int64_t start = 1;
  SequenceLaw law;
  SequenceLaw width{0.0, 0.0, 0.0};
  std::vector<double> offsets;  // ExplicitList, strictly decreasing, positive
  int level = 0;                // CantorMiddleThird
  double span_lo = 0.0;
  double span_hi = 1.0;
  double parameter = 0.0;       // a for Geometric, p for Power (reporting only)

  static GapRule geometric(double a, double accumulation = 0.0, Side side = Side::Right,
                           double scale = 1.0);
  static GapRule power(double p, double accumulation = 0.0, Side side = Side::Right,
                       double scale = 1.0);
  static GapRule cantor(int level, double lo = 0.0, double hi = 1.0);
  static GapRule explicit_list(std::vector<double> offsets, double accumulation = 0.0,
                               Side side = Side::Right);
  static GapRule custom(SequenceLaw law, SequenceLaw width, double accumulation = 0.0,
                        Side side = Side::Right);

  bool is_sequence() const;
  bool is_cantor() const { return kind == GapRuleKind::CantorMiddleThird; }
  bool has_right() const { return side != Side::Left; }
  bool has_left() const { return side != Side::Right; }

  /// Offset x_n of element n from the accumulation point.
  double offset(std::int64_t n) const;
  double element_width(std::int64_t n) const;
  /// (far endpoint distance)/(length) of gap k, evaluated in log space so that
  /// indices far beyond double resolution of the positions stay accurate.
  double gap_ratio(std::int64_t k) const;
  /// Length of gap k relative to its far-endpoint offset (= 1 / gap_ratio).
  double gap_relative_length(std::int64_t k) const;
  double gap_length(std::int64_t k) const;

  void validate() const;
};

class CompactSet1D {
 public:
  CompactSet1D() = default;
  CompactSet1D(std::vector<Interval1D> intervals, std::vector<GapRule> rules,
               int truncation_depth = 40);

  const std::vector<Interval1D>& explicit_intervals() const { return explicit_; }
  const std::vector<GapRule>& rules() const { return rules_; }
  int truncation_depth() const { return depth_; }

  /// Sorted, pairwise disjoint, maximal closed intervals of the materialized set.
  const std::vector<Interval1D>& materialized() const { return materialized_; }
  /// Open regions whose fine structure is not materialized (rule tails).
  const std::vector<Interval1D>& unresolved() const { return unresolved_; }

  Interval1D hull() const;
  bool contains(double x) const;
  bool empty() const { return materialized_.empty(); }

 private:
  void materialize();

  std::vector<Interval1D> explicit_;
  std::vector<GapRule> rules_;
  int depth_ = 40;
  std::vector<Interval1D> materialized_;
  std::vector<Interval1D> unresolved_;
};

struct GapList {
  std::vector<Interval1D> gaps;  // open intervals (lo, hi)
  bool truncated = false;        // window meets an unmaterialized tail
};

/// Maximal bounded open complementary intervals of the materialized set that
/// are contained in the open window.
GapList gaps_in(const CompactSet1D& set, Interval1D window);

struct ComponentCount1D {
  std::size_t count = 0;
  bool infinite_via_rule = false;
};

ComponentCount1D components(const CompactSet1D& set);

/// Membership in the full middle-third Cantor set over [lo, hi].
bool cantor_contains(double x, double lo, double hi, int max_depth = 48);
/// Whether the closed interval [u, v] meets the middle-third Cantor set over [lo, hi].
bool cantor_meets(double u, double v, double lo, double hi, int max_depth = 48);
/// Cantor function on [lo, hi] (0 left of lo, 1 right of hi).
double cantor_function(double x, double lo = 0.0, double hi = 1.0, int max_depth = 60);

}  // namespace c1k
