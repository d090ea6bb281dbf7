#pragma once

#include <memory>

#include "spir/protocol.hpp"

namespace spir {

/// Where the desired-message unit vector is added: the higher-indexed replica
/// (the default) or the lower one. Both verify; a test pins that.
enum class EmPlacement { HigherEndpoint, LowerEndpoint };

/// Rate-1/N SPIR on any connected (multi)graph with graph-replicated
/// randomness, rho = 1 and L = 1. The user draws one field symbol per message,
/// masks the signed-incidence rows with them, and hides the unit-vector pick
/// of the desired message inside one replica's query. Decoding is the sum of
/// all answers: every h*W and R term cancels because each incidence column
/// sums to zero.
class GeneralScheme : public Scheme {
 public:
  GeneralScheme(const MultiGraphSpec& g, uint32_t q,
                EmPlacement em = EmPlacement::HigherEndpoint);
  GeneralScheme(const GraphSpec& g, uint32_t q, EmPlacement em = EmPlacement::HigherEndpoint);

  Plan make_plan(const Coins& coins, int target) const override;

  /// Sum of all answers.
  std::vector<FieldElement> decode(const std::vector<std::vector<FieldElement>>& answers,
                                   const Coins& coins, int target) const override;
  bool generic_decoder() const override { return false; }

  const MultiGraphSpec& graph() const { return g_; }

  /// Fault hooks for the verifier's detection tests. Not used by normal
  /// construction paths.
  void inject_sign_flip(int server, int edge);  // corrupt one incidence entry
  void inject_unblinded_pick() {               // send the pick without the h mask
    unblinded_ = true;
    d_.name += "+unblinded";
  }

 private:
  MultiGraphSpec g_;
  SignedIncidence inc_;
  EmPlacement em_;
  bool unblinded_ = false;
};

SchemeDescriptor general_scheme_descriptor(const MultiGraphSpec& g, uint32_t q);

}  // namespace spir
