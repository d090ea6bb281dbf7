#include "spir/fault.hpp"

#include <algorithm>

namespace spir {

namespace {

SchemeDescriptor strip_name(SchemeDescriptor d) {
  d.name += "+no-pads";
  return d;
}

}  // namespace

DropPads::DropPads(std::shared_ptr<const Scheme> inner)
    : Scheme(strip_name(inner->desc())), inner_(std::move(inner)) {}

Plan DropPads::make_plan(const Coins& coins, int target) const {
  Plan p = inner_->make_plan(coins, target);
  for (auto& sp : p.per_server)
    for (auto& line : sp)
      line.terms.erase(std::remove_if(line.terms.begin(), line.terms.end(),
                                      [](const Term& t) { return t.sym.is_rand; }),
                       line.terms.end());
  return p;
}

std::vector<FieldElement> DropPads::decode(const std::vector<std::vector<FieldElement>>& answers,
                                           const Coins& coins, int target) const {
  return Scheme::decode(answers, coins, target);
}

}  // namespace spir
