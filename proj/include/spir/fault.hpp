#pragma once

#include <memory>

#include "spir/protocol.hpp"

namespace spir {

/// Serves every answer with its randomness terms removed: the one-time pads
/// vanish and the interference symbols travel in the clear. Database privacy
/// must fail on this; reliability is unaffected for the built-in schemes.
class DropPads : public Scheme {
 public:
  explicit DropPads(std::shared_ptr<const Scheme> inner);

  Plan make_plan(const Coins& coins, int target) const override;
  std::vector<FieldElement> decode(const std::vector<std::vector<FieldElement>>& answers,
                                   const Coins& coins, int target) const override;

 private:
  std::shared_ptr<const Scheme> inner_;
};

}  // namespace spir
