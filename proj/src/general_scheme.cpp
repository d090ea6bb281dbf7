#include "spir/general_scheme.hpp"

#include <sstream>

namespace spir {

SchemeDescriptor general_scheme_descriptor(const MultiGraphSpec& g, uint32_t q) {
  SchemeDescriptor d;
  d.q = q;
  d.mode = RandMode::GraphReplicated;
  d.n_servers = g.n_servers();
  d.n_messages = g.n_messages();
  d.n_bundles = g.n_bundles();
  d.L = 1;
  d.pool_sizes.assign(g.n_bundles(), 1);  // rho = 1
  for (int m = 0; m < g.n_messages(); ++m) d.msg_bundle.push_back(g.edge_of(m));
  for (int k = 0; k < g.n_bundles(); ++k) {
    const Edge& e = g.base().edge(k);
    d.bundle_servers.emplace_back(e.a - 1, e.b - 1);
  }
  d.storage = storage_map(g, RandMode::GraphReplicated);
  for (int n = 1; n <= g.n_servers(); ++n) {
    d.downloads.push_back(1);
    (void)n;
  }
  for (int t = 0; t < g.multiplicity(); ++t)
    for (int k = 0; k < g.n_bundles(); ++k) {
      CoinComponent c;
      c.kind = CoinComponent::Kind::FieldSym;
      c.n = static_cast<int>(q);
      std::ostringstream lbl;
      lbl << "h[" << (k + 1);
      if (g.multiplicity() > 1) lbl << "," << (t + 1);
      lbl << "]";
      c.label = lbl.str();
      d.coins.comps.push_back(c);
    }
  for (int t = 0; t < g.multiplicity(); ++t)
    for (int k = 0; k < g.n_bundles(); ++k) {
      std::ostringstream nm;
      nm << "W_" << (k + 1);
      if (g.multiplicity() > 1) nm << "," << (t + 1);
      d.target_names.push_back(nm.str());
    }
  std::ostringstream nm;
  nm << "general(" << g.base().name();
  if (g.multiplicity() > 1) nm << "^" << g.multiplicity();
  nm << ", q=" << q << ")";
  d.name = nm.str();
  return d;
}

GeneralScheme::GeneralScheme(const MultiGraphSpec& g, uint32_t q, EmPlacement em)
    : Scheme(general_scheme_descriptor(g, q)), g_(g), inc_(signed_incidence(g.base())), em_(em) {}

GeneralScheme::GeneralScheme(const GraphSpec& g, uint32_t q, EmPlacement em)
    : GeneralScheme(MultiGraphSpec(g, 1), q, em) {}

void GeneralScheme::inject_sign_flip(int server, int edge) {
  auto& v = inc_.m[static_cast<size_t>(server) * inc_.n_cols + edge];
  v = static_cast<int8_t>(-v);
  d_.name += "+sign-flip";
}

Plan GeneralScheme::make_plan(const Coins& coins, int target) const {
  const uint32_t q = d_.q;
  const int kprime = g_.n_bundles();
  const int r = g_.multiplicity();
  int edge_k = g_.edge_of(target);
  const Edge& e = g_.base().edge(edge_k);
  int j = (em_ == EmPlacement::HigherEndpoint) ? e.b - 1 : e.a - 1;

  Plan plan;
  plan.per_server.resize(d_.n_servers);
  for (int n = 0; n < d_.n_servers; ++n) {
    Line line;
    auto incident = g_.base().incident_edges(n + 1);
    // message part: the n-th row of [Ibar diag(h_1) | ... | Ibar diag(h_r)],
    // zeros from non-incident edges discarded, h = 0 entries kept
    for (int t = 0; t < r; ++t)
      for (int ell : incident) {
        int sign = inc_.at(n, ell);
        uint32_t h = coins.v[static_cast<size_t>(t) * kprime + ell].field;
        uint32_t coeff = sign > 0 ? h : (q - h) % q;
        int msg = g_.message_id(ell, t);
        if (n == j && msg == target)
          // fault mode: the pick is a bare constant instead of riding on h
          coeff = unblinded_ ? 1 : (coeff + 1) % q;
        line.terms.push_back({SymbolId{false, msg, 0}, coeff});
      }
    // randomness part: one signed pad per incident bundle
    for (int ell : incident) {
      int sign = inc_.at(n, ell);
      uint32_t coeff = sign > 0 ? 1 : q - 1;
      line.terms.push_back({SymbolId{true, ell, 0}, coeff});
    }
    plan.per_server[n].push_back(std::move(line));
  }
  return plan;
}

std::vector<FieldElement> GeneralScheme::decode(
    const std::vector<std::vector<FieldElement>>& answers, const Coins&, int) const {
  PrimeField f(d_.q);
  FieldElement sum(0, f);
  for (const auto& a : answers)
    for (const auto& v : a) sum = sum + v;
  return {sum};
}

}  // namespace spir
