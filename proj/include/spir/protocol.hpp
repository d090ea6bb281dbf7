#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spir/field.hpp"
#include "spir/graphs.hpp"
#include "spir/rational.hpp"

namespace spir {

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference to one protocol symbol: a message symbol W_owner[index] or a
/// randomness symbol from pool `owner`. All indices 0-based internally.
struct SymbolId {
  bool is_rand = false;
  int owner = 0;
  int index = 0;

  bool operator==(const SymbolId& o) const {
    return is_rand == o.is_rand && owner == o.owner && index == o.index;
  }
  bool operator<(const SymbolId& o) const {
    if (is_rand != o.is_rand) return !is_rand;
    if (owner != o.owner) return owner < o.owner;
    return index < o.index;
  }
};

struct Term {
  SymbolId sym;
  uint32_t coeff = 1;  // in F_q
};

/// One downloaded symbol: a linear combination of stored symbols.
struct Line {
  std::vector<Term> terms;
};

using ServerPlan = std::vector<Line>;

/// The full answer specification of one protocol run for fixed coins and
/// target: per server, the list of combinations it must return. The per-server
/// slice is exactly the query sent to that server.
struct Plan {
  std::vector<ServerPlan> per_server;
};

/// User coins are a product of independent components: uniform field symbols
/// and uniform private permutations of declared symbol classes.
struct PermClass {
  bool is_rand = false;
  int owner = 0;
};

struct CoinComponent {
  enum class Kind { FieldSym, Perm };
  Kind kind = Kind::FieldSym;
  int n = 0;  // FieldSym: field order; Perm: class size (domain n!)
  PermClass cls;
  std::string label;
};

struct CoinSpace {
  std::vector<CoinComponent> comps;

  /// Total domain size if it fits below cap.
  std::optional<uint64_t> total(uint64_t cap = UINT64_MAX) const;
};

struct CoinValue {
  uint32_t field = 0;
  std::vector<int> perm;  // permutation of [0, n)
};

struct Coins {
  std::vector<CoinValue> v;
};

Coins identity_coins(const CoinSpace& space);
Coins random_coins(const CoinSpace& space, std::mt19937_64& rng);

/// Visits every coin value exactly once; returns the count, or nullopt
/// (without calling the visitor) when the domain exceeds cap.
std::optional<uint64_t> enumerate_coins(const CoinSpace& space, uint64_t cap,
                                        const std::function<void(const Coins&)>& fn);

struct SchemeDescriptor {
  std::string name;
  uint32_t q = 3;
  RandMode mode = RandMode::GraphReplicated;
  int n_servers = 0;
  int n_messages = 0;
  int n_bundles = 0;  // edges of the base graph
  int L = 1;          // symbols per message
  std::vector<int> pool_sizes;                     // GR: per bundle; FR: single entry
  std::vector<int> msg_bundle;                     // message id -> bundle id
  std::vector<std::pair<int, int>> bundle_servers; // bundle -> replica pair (0-based)
  StorageMap storage;
  std::vector<int> downloads;  // per server, fixed across coins and targets
  CoinSpace coins;
  std::vector<std::string> target_names;  // rendering, e.g. "W_1" or "W_{1,2}"

  int total_downloads() const;
  int replica_i(int target) const { return bundle_servers[msg_bundle[target]].first; }
  int replica_j(int target) const { return bundle_servers[msg_bundle[target]].second; }
};

/// Abstract SPIR/PIR protocol. Queries and answers are deterministic given
/// coins and target; answers are linear in the stored symbols for every fixed
/// coin value, which the verifier relies on.
class Scheme {
 public:
  explicit Scheme(SchemeDescriptor d) : d_(std::move(d)) {}
  virtual ~Scheme() = default;

  const SchemeDescriptor& desc() const { return d_; }

  virtual Plan make_plan(const Coins& coins, int target) const = 0;

  /// Recover the target message from the answers. The default decoder solves
  /// the plan as a linear system (the user knows the full plan); schemes with
  /// a structural decoder override this.
  virtual std::vector<FieldElement> decode(const std::vector<std::vector<FieldElement>>& answers,
                                           const Coins& coins, int target) const;

  /// True when decode() is the base-class linear solve; lets the verifier
  /// replace decoder-composition checks by row-space membership.
  virtual bool generic_decoder() const { return true; }

 protected:
  SchemeDescriptor d_;
};

struct MessageDatabase {
  PrimeField f;
  int L = 1;
  std::vector<std::vector<FieldElement>> msgs;

  static MessageDatabase zero(const PrimeField& f, int n_messages, int L);
  static MessageDatabase random(const PrimeField& f, int n_messages, int L, std::mt19937_64& rng);
};

struct RandomnessPool {
  PrimeField f;
  std::vector<std::vector<FieldElement>> pools;

  static RandomnessPool zero(const PrimeField& f, const std::vector<int>& sizes);
  static RandomnessPool random(const PrimeField& f, const std::vector<int>& sizes,
                               std::mt19937_64& rng);
};

struct Transcript {
  Coins coins;
  int target = 0;
  Plan queries;
  std::vector<std::vector<FieldElement>> answers;
  std::vector<FieldElement> decoded;
  std::vector<int> downloads;

  /// Line-oriented dump: one "server: v,v,v" line per server.
  std::string to_text() const;
};

/// Evaluate one server's plan slice against concrete storage.
std::vector<FieldElement> evaluate_server(const SchemeDescriptor& d, const ServerPlan& sp,
                                          const MessageDatabase& db, const RandomnessPool& pool);

Transcript run_transcript(const Scheme& s, const MessageDatabase& db, const RandomnessPool& pool,
                          const Coins& coins, int target);

Rat rate_of(const Scheme& s);

struct RandRatios {
  std::optional<Rat> rho;  // per-bundle (graph-replicated only)
  Rat rho_total;
};

RandRatios randomness_ratios(const Scheme& s);

/// Apply the permutation components of `coins` to all symbol indices of a
/// plan. Table-based schemes build every plan this way from a fixed template,
/// so plans for any coin value are index-relabelings of the identity plan.
Plan relabel_plan(const Plan& tpl, const CoinSpace& space, const Coins& coins);

/// Scheme given by per-target template plans under identity permutations.
class TableScheme : public Scheme {
 public:
  TableScheme(SchemeDescriptor d, std::vector<Plan> templates);

  Plan make_plan(const Coins& coins, int target) const override;
  const Plan& tmpl(int target) const { return tpl_.at(target); }

 private:
  std::vector<Plan> tpl_;
};

/// Number of distinct (pre-permutation) indices of message `msg` referenced at
/// `server` in the template for `target`.
std::vector<int> referenced_indices(const Plan& tpl, int server, const SymbolId& proto);

}  // namespace spir
