#pragma once

#include <optional>
#include <string>

#include "spir/graphs.hpp"
#include "spir/rational.hpp"

namespace spir {

struct GrCapacity {
  Rat lower;     // always 1/N
  bool exact;    // true for paths and regular graphs
  Rat rho_star;  // always 1
};

GrCapacity gr_capacity(const GraphSpec& g);

struct FrAchievable {
  Rat rate;
  Rat rho_total;
};

/// Conversion metrics of the lcm-repetition algorithm for a base scheme with
/// L' symbols per message and D' total downloads on N servers, K messages.
FrAchievable fr_rate_from_srp(int lp, int dp, int n, int k);

struct FrBounds {
  Rat achievable;
  Rat upper;
  Rat rho_total_achievable;
  Rat rho_total_lower;
};

/// Path/cycle bounds with fully-replicated randomness.
FrBounds fr_bounds(GraphFamily family, int n);

/// The settled N = 3 path point: capacity 1/2 at total randomness ratio 1.
FrAchievable fr_capacity_p3();

struct StarFr {
  int best_t;
  Rat rate;
  Rat rho_total;
};

/// Best t-parameterized star rate with fully-replicated randomness.
StarFr star_fr_rate(int n);

struct RateSummary {
  std::string family;
  int n = 0;
  int r = 1;
  RandMode setting = RandMode::GraphReplicated;
  Rat achievable;
  std::optional<Rat> rho;  // graph-replicated
  Rat rho_total;
  std::optional<Rat> upper;
  bool exact = false;
  std::optional<Rat> rho_total_lower;

  std::string to_text() const;
  std::string to_tsv() const;
};

RateSummary multigraph_rates(GraphFamily family, int n, int r, RandMode setting);

/// The summary table of graph-replicated rates (symbolic in N).
std::string table1(bool tsv = false);

}  // namespace spir
