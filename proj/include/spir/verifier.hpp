#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spir/protocol.hpp"

namespace spir {

enum class Verdict { Pass, Fail, Refused };

struct CheckResult {
  std::string check;    // reliability | user_privacy | db_privacy | engine_agreement
  std::string engine;   // exhaustive | symbolic | enumeration | canonical | linear | full_joint
  std::string params;
  Verdict verdict = Verdict::Refused;
  std::string witness;       // counterexample on failure, refusal reason otherwise
  std::optional<Rat> mi;     // exact mutual information (exhaustive engine)
};

/// No sampling anywhere: a check either runs exactly within these budgets or
/// refuses. joint_states caps the exhaustive enumerations (coins x db x pool);
/// coin_cap caps full coin-domain walks. Schemes whose coin domain exceeds
/// coin_cap are still checked exactly: all plans are index relabelings of one
/// template, so identity-coin verdicts carry over (noted in the result), and
/// the canonical user-privacy engine quotients the permutations out.
struct Budget {
  uint64_t joint_states = 1ull << 24;
  uint64_t coin_cap = 1ull << 17;
  int jobs = 1;
};

CheckResult check_reliability_exhaustive(const Scheme& s, const Budget& b);
/// decoder ∘ answer = projection onto the target, as matrices per coin value.
CheckResult check_reliability_symbolic(const Scheme& s, const Budget& b);

/// Per-server query multisets over the whole coin domain, compared across
/// targets. Since answers are deterministic in (query, storage) and coins are
/// independent of the database, equality of the per-server query
/// distributions implies the full joint requirement; the full_joint engine
/// validates that reduction on a small instance.
CheckResult check_user_privacy_enumeration(const Scheme& s, const Budget& b);
CheckResult check_user_privacy_canonical(const Scheme& s, const Budget& b);
CheckResult check_user_privacy_full_joint(const Scheme& s, const Budget& b);

/// Which message/pool symbols the user-side view treats as hidden, unknown or
/// given for one (target, J) instance, following the setting's equation.
struct PrivacyPartition {
  std::vector<int> hidden_msgs;
  std::vector<int> unknown_msgs;
  std::vector<int> unknown_pools;
  std::vector<int> given_msgs;
  std::vector<int> given_pools;
};

PrivacyPartition privacy_partition(const SchemeDescriptor& d, int target,
                                   const std::vector<int>& J);

/// J ranges over bundles (graph-replicated) or messages (fully-replicated),
/// never containing the target's own. All subsets while small, otherwise
/// singletons plus the full complement (reported as partial coverage).
std::vector<std::vector<int>> db_privacy_j_sets(const SchemeDescriptor& d, int target);

/// Exact mutual information between the hidden messages and the user's view,
/// by joint enumeration of (coins, database, randomness); q-ary units,
/// rational arithmetic over counts. Pass is MI == 0, never MI < eps.
CheckResult check_db_privacy_exhaustive(const Scheme& s, int target, const std::vector<int>& J,
                                        const Budget& b);
/// Exact span criterion for linear schemes: the hidden columns must lie in
/// the span of the unknown message and randomness columns; a sum of
/// independent uniform vectors is uniform on its span, so containment is
/// exactly MI = 0.
CheckResult check_db_privacy_linear(const Scheme& s, int target, const std::vector<int>& J,
                                    const Budget& b);

struct VerificationReport {
  std::string scheme;
  uint32_t q = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  int failures() const;
  int refusals() const;
  std::string to_text() const;  // one key-value line per check
};

/// Reliability + user privacy + database privacy for every target and J:
/// exhaustive engines where the budget permits, symbolic/linear engines
/// always; engine agreement recorded whenever both ran.
VerificationReport verify_all(const Scheme& s, const Budget& b = {});

}  // namespace spir
