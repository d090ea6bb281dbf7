#pragma once

#include <iosfwd>
#include <map>
#include <memory>

#include "spir/protocol.hpp"

namespace spir {

/// A graph-based PIR scheme whose answers are sums of message symbols over
/// privately permuted indices. Carries the answer table as per-target
/// templates; symbol indices in the template are the canonical
/// (identity-permutation) ones.
class PirScheme {
 public:
  PirScheme(std::shared_ptr<TableScheme> table, MultiGraphSpec graph, int symbols_per_message,
            std::string name);

  const TableScheme& table() const { return *table_; }
  std::shared_ptr<TableScheme> table_ptr() const { return table_; }
  const MultiGraphSpec& graph() const { return graph_; }
  const std::string& name() const { return name_; }

  int L() const { return Lp_; }           // symbols per message
  int D() const { return table_->desc().total_downloads(); }
  Rat rate() const { return Rat(Lp_, D()); }

  /// Distinct indices of message `msg` referenced at `server` for `target`.
  std::vector<int> queried_indices(int target, int server, int msg) const;

  /// Same table over a different execution field.
  PirScheme at_q(uint32_t q) const;

 private:
  std::shared_ptr<TableScheme> table_;
  MultiGraphSpec graph_;
  int Lp_;
  std::string name_;
};

struct SrpReport {
  bool ok = true;
  // per target: desired-symbol counts at the two replicas
  std::vector<std::pair<int, int>> replica_counts;
  std::string detail;
};

/// Symmetric retrieval property: every target's symbols split half/half
/// between its two replicas.
SrpReport check_srp(const PirScheme& s);

/// The reference N=3 path table: L'=2, D'=3, rate 2/3.
PirScheme pir_p3();

/// The reference N=3 cycle table (reduced form): L'=6, D'=12, rate 1/2.
/// Targets 2 and 3 are generated from the reference k=1 block by the cyclic
/// relabeling, with each server's lines put in canonical order.
PirScheme pir_c3();

/// The reference S4 table: L'=2, D'=4, rate 1/2.
PirScheme pir_s4();

/// One-symbol-per-leaf star scheme, L'=2, D'=N, rate 2/N; equals pir_s4 at
/// N=4. Satisfies SRP.
PirScheme pir_star_simple(int n);

/// The t-parameterized star scheme: server N serves all t-subset sums with
/// fresh symbols, leaves serve the symbols paired with the desired message.
/// L' = C(N-2,t-1)+C(N-3,t-2), D' = (N-1)C(N-3,t-2)+C(N-1,t). Does not
/// satisfy SRP in general.
PirScheme pir_star_t(int n, int t);

/// One bundle-sum occurrence inside the staged multigraph lift: the
/// constituent message symbols at one base-scheme position of one subset.
struct LiftEntity {
  int stage = 1;
  std::vector<int> subset;  // multiplicity indices of the sum
  int bundle = 0;
  bool has_tau = false;   // subset contains the desired multiplicity
  bool desired = false;   // bundle == desired bundle
  int position = 0;       // base-scheme symbol position
  std::vector<Term> terms;
  int partner = -1;       // entity whose retrieval this one extends (desired, stage >= 2)
};

/// Per-target entity structure of the lifted plan (converters assign pads
/// per entity, not per term).
struct LiftAnnotation {
  std::vector<LiftEntity> entities;
  // [server][line] -> entity ids, in term order
  std::vector<std::vector<std::vector<int>>> line_entities;
};

/// Staged lift of an SRP scheme to the uniform multigraph G^(r): stage 1 runs
/// the base scheme on each multiplicity slice, stage s on all s-subset sums;
/// interference retrieved in stage s-1 cancels inside stage s. L = 2^(r-1) L',
/// D = (2^r - 1) D'. For r = 1 this is the base scheme itself.
PirScheme lift_pir_multigraph(const PirScheme& base, int r,
                              std::vector<LiftAnnotation>* annotations = nullptr);

/// Declarative answer-table format (one block per target, rows = servers,
/// cells = comma-separated sums like "a2+b2").
PirScheme load_pir_table(std::istream& in, const std::string& name = "custom");
PirScheme load_pir_table_file(const std::string& path);
std::string save_pir_table(const PirScheme& s);

/// The replica-swap bijection on [L']: sorted desired positions of one
/// replica map onto the other's. For interval-half splits this is the psi
/// half-shift.
std::vector<int> replica_swap_bijection(const std::vector<int>& at_i, const std::vector<int>& at_j,
                                        int lp);

}  // namespace spir
