#pragma once

#include <string>
#include <vector>

#include "c1k/jet.hpp"
#include "c1k/set1d.hpp"

namespace c1k {

struct SigmaPolicy {
  double threshold = 1e3;     // T
  int windows = 3;            // W
  double growth = 1.2;        // g
  double stabilization = 1e-3;
  int max_window = 40;        // dyadic index windows [2^m, 2^(m+1)), m < max_window
  int max_generation = 15;    // Cantor windows
};

enum class SigmaKind { Finite, Infinite, Inconclusive };
std::string to_string(SigmaKind k);

struct SigmaVerdict {
  SigmaKind kind = SigmaKind::Inconclusive;
  double upper = 0.0;
  double lower = 0.0;
  SigmaPolicy policy;
};

struct SigmaProfile {
  double xi = 0.0;
  std::vector<double> eps_ladder;
  std::vector<double> sigma_eps;  // +inf for the infinite sentinel
  std::vector<double> tail_window_sups;
  std::string source;             // "isolated", "sequence_rule", "cantor_rule", "finite_gaps"
};

/// Sup over gaps G inside (xi - eps, xi + eps) of sup{|y - xi| : y in G} / length(G).
double sigma_eps(const CompactSet1D& set, double xi, double eps, const SigmaPolicy& policy = {});

struct SigmaResult {
  SigmaVerdict verdict;
  SigmaProfile profile;
};

/// Membership including the unmaterialized parts of rules (Cantor points).
bool contains_point(const CompactSet1D& set, double x);

SigmaResult sigma(const CompactSet1D& set, double xi, const SigmaPolicy& policy = {});
/// Policy applied to a window series (exposed for tests).
SigmaVerdict classify_windows(const std::vector<double>& sups, const SigmaPolicy& policy);

enum class EqualityKind { Equal, NotEqual, Inconclusive };
std::string to_string(EqualityKind k);

struct SiteVerdict {
  double xi = 0.0;
  SigmaVerdict verdict;
};

struct EqualityResult {
  EqualityKind kind = EqualityKind::Equal;
  double witness = 0.0;
  std::vector<SiteVerdict> sites;
};

/// Sites where sigma can be nonzero in the representation class.
std::vector<double> relevant_sites(const CompactSet1D& set);
EqualityResult equality_c1_restriction(const CompactSet1D& set, const SigmaPolicy& policy = {});

/// Per-delta sup of |(f(x) - f(y))/(x - y) - f'(xi)| over sites in (xi - delta, xi + delta).
std::vector<double> whitney_1d_test(const SampledJet& jet, double xi,
                                    const std::vector<double>& ladder);

struct ExtractedGap {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  double y = 0.0;
  std::int64_t index = 0;  // rule gap index (sequence rules) or generation (Cantor)
};

struct Counterexample {
  SampledJet jet;
  double xi = 0.0;
  std::vector<ExtractedGap> gaps;
  /// f on K at x (x > xi); also used to verify jet values.
  double value_at(double x) const;
};

/// Greedy one-sided gap extraction and the locally constant jet built on it.
Counterexample counterexample_function(const CompactSet1D& set, double xi, int windows = 30);

}  // namespace c1k
