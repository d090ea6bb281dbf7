#pragma once

#include <memory>

#include "spir/pir_base.hpp"

namespace spir {

/// The half-length index shift pairing phase-1 randomness retrievals with
/// phase-2 pad positions (0-based): m -> m + L/2 for m < L/2, else m - L/2.
/// An involution without fixed points for every even L.
struct PsiMap {
  int L;
  explicit PsiMap(int L_) : L(L_) {
    if (L % 2 != 0) throw std::invalid_argument("psi needs an even length");
  }
  int operator()(int m) const { return m < L / 2 ? m + L / 2 : m - L / 2; }
};

/// Two-phase graph-replicated conversion: run the base scheme on the
/// randomness to fetch R_k, then on the messages with every queried symbol
/// W_l[mu] padded by s_{l, psi(mu)}. L = L', rho = 1, rate = R_PIR / 2.
std::shared_ptr<TableScheme> gr_from_pir(const PirScheme& T, uint32_t q);

struct FrParams {
  int ell = 0;
  int x = 0;
  int y = 0;
};

/// Least integers with x L'/2 = (N-1) y.
FrParams fr_params(int lp, int n_servers);

/// Fully-replicated conversion: y uncoded randomness symbols from every
/// server, then x padded repetitions of the base scheme. L = xL',
/// H(R) = Ny + (K-1)L/2, rate = L'x / (D'x + Ny).
std::shared_ptr<TableScheme> fr_from_pir(const PirScheme& T, uint32_t q);

/// Star scheme with fully-replicated randomness built on pir_star_t(N, t);
/// works without SRP. L = L', H(R) = C(N-3,t-2) + (t-1) C(N-1,t),
/// rate = L' / (D' + C(N-3,t-2)).
std::shared_ptr<TableScheme> fr_star(int n, int t, uint32_t q);

/// Multigraph graph-replicated conversion: the staged lift for the messages
/// plus one stand-alone and 2^r - 1 associated randomness retrievals, paired
/// through window bijections that avoid each server's own indices.
/// L = 2^(r-1) L', rho = 1, rate = R_PIR / 2 independent of r.
std::shared_ptr<TableScheme> gr_multigraph_from_pir(const PirScheme& T, int r, uint32_t q);

/// Multigraph fully-replicated conversion: x repetitions of the staged lift
/// with stage-wise randomness assignment. L = 2^(r-1) L' x,
/// H(R) = Ny + (xL'/2)((2^r - 1)K' - 1).
std::shared_ptr<TableScheme> fr_multigraph_from_pir(const PirScheme& T, int r, uint32_t q);

}  // namespace spir
