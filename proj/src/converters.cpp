#include "spir/converters.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace spir {

namespace {

// SPIR descriptor shared by the converters
SchemeDescriptor spir_descriptor(const MultiGraphSpec& g, uint32_t q, RandMode mode, int L,
                                 std::vector<int> pool_sizes, std::vector<int> downloads,
                                 const std::string& name) {
  SchemeDescriptor d;
  d.name = name;
  d.q = q;
  d.mode = mode;
  d.n_servers = g.n_servers();
  d.n_messages = g.n_messages();
  d.n_bundles = g.n_bundles();
  d.L = L;
  d.pool_sizes = std::move(pool_sizes);
  for (int m = 0; m < g.n_messages(); ++m) d.msg_bundle.push_back(g.edge_of(m));
  for (int k = 0; k < g.n_bundles(); ++k) {
    const Edge& e = g.base().edge(k);
    d.bundle_servers.emplace_back(e.a - 1, e.b - 1);
  }
  d.storage = storage_map(g, mode);
  d.downloads = std::move(downloads);
  for (int m = 0; m < g.n_messages(); ++m) {
    CoinComponent c;
    c.kind = CoinComponent::Kind::Perm;
    c.n = L;
    c.cls = PermClass{false, m};
    c.label = std::string("pi_") + static_cast<char>('a' + m);
    d.coins.comps.push_back(c);
  }
  for (size_t p = 0; p < d.pool_sizes.size(); ++p) {
    CoinComponent c;
    c.kind = CoinComponent::Kind::Perm;
    c.n = d.pool_sizes[p];
    c.cls = PermClass{true, static_cast<int>(p)};
    c.label = "sigma_R" + std::to_string(p + 1);
    d.coins.comps.push_back(c);
  }
  for (int t = 0; t < g.multiplicity(); ++t)
    for (int k = 0; k < g.n_bundles(); ++k) {
      std::ostringstream nm;
      nm << "W_" << (k + 1);
      if (g.multiplicity() > 1) nm << "," << (t + 1);
      d.target_names.push_back(nm.str());
    }
  return d;
}

void require_srp(const PirScheme& T) {
  auto srp = check_srp(T);
  if (!srp.ok)
    throw std::invalid_argument("conversion requires the symmetric retrieval property: " +
                                srp.detail);
}

}  // namespace

std::shared_ptr<TableScheme> gr_from_pir(const PirScheme& T, uint32_t q) {
  require_srp(T);
  const auto& bd = T.table().desc();
  int lp = T.L();
  PsiMap psi(lp);
  // an interference pad s_{l, psi(mu)} must never be among the phase-1
  // downloads of R_l, or the pad could be stripped
  for (int k = 0; k < bd.n_messages; ++k)
    for (int l = 0; l < bd.n_messages; ++l) {
      if (l == k) continue;  // R_k is retrieved in full by design
      std::set<int> downloaded;
      for (int n = 0; n < bd.n_servers; ++n)
        for (int mu : T.queried_indices(k, n, l)) downloaded.insert(mu);
      for (int mu : downloaded)
        if (downloaded.count(psi(mu)))
          throw std::invalid_argument("psi collides with the scheme's index sets");
    }

  std::vector<Plan> tpl(bd.n_messages);
  for (int k = 0; k < bd.n_messages; ++k) {
    Plan plan;
    plan.per_server.resize(bd.n_servers);
    for (int n = 0; n < bd.n_servers; ++n) {
      // phase 1: the base scheme on the randomness, retrieving R_k
      for (const auto& bline : T.table().tmpl(k).per_server[n]) {
        Line out;
        for (const auto& t : bline.terms)
          out.terms.push_back({SymbolId{true, t.sym.owner, t.sym.index}, 1});
        plan.per_server[n].push_back(std::move(out));
      }
      // phase 2: the base scheme on the messages, every symbol padded at psi
      for (const auto& bline : T.table().tmpl(k).per_server[n]) {
        Line out;
        for (const auto& t : bline.terms) {
          out.terms.push_back({SymbolId{false, t.sym.owner, t.sym.index}, 1});
          out.terms.push_back({SymbolId{true, t.sym.owner, psi(t.sym.index)}, 1});
        }
        plan.per_server[n].push_back(std::move(out));
      }
    }
    tpl[k] = std::move(plan);
  }
  std::vector<int> dl(bd.n_servers);
  for (int n = 0; n < bd.n_servers; ++n) dl[n] = 2 * bd.downloads[n];
  auto d = spir_descriptor(T.graph(), q, RandMode::GraphReplicated, lp,
                           std::vector<int>(bd.n_bundles, lp), dl,
                           "gr(" + T.name() + ", q=" + std::to_string(q) + ")");
  return std::make_shared<TableScheme>(d, tpl);
}

FrParams fr_params(int lp, int n_servers) {
  if (lp % 2 != 0) throw std::invalid_argument("the base scheme length must be even");
  FrParams p;
  p.ell = static_cast<int>(std::lcm(lp / 2, n_servers - 1));
  p.x = p.ell / (lp / 2);
  p.y = p.ell / (n_servers - 1);
  return p;
}

namespace {

// Shared machinery of the fully-replicated conversions (r = 1 recovers the
// simple-graph algorithm exactly). Pads are assigned per lift entity: desired
// stage-1 symbols follow the download/shared pattern that makes the y direct
// downloads per server work out; every other entity gets one fresh pad;
// stage >= 2 desired sums reuse the mask of the entity they extend.
std::shared_ptr<TableScheme> fr_impl(const PirScheme& T, int r, uint32_t q) {
  require_srp(T);
  std::vector<LiftAnnotation> ann;
  PirScheme lifted = lift_pir_multigraph(T, r, &ann);
  const auto& ld = lifted.table().desc();
  int n = ld.n_servers;
  int kprime = T.graph().n_bundles();
  int lp = T.L();
  FrParams fp = fr_params(lp, n);
  int rep_span = lifted.L();          // 2^(r-1) L' message symbols per repetition
  int L = fp.x * rep_span;            // SPIR message length
  int half = fp.x * lp / 2;           // desired symbols per replica, stage 1

  int expected_hr = n * fp.y + (fp.x * lp / 2) * (((1 << r) - 1) * kprime - 1);

  std::vector<Plan> tpl(ld.n_messages);
  for (int target = 0; target < ld.n_messages; ++target) {
    int bundle = ld.msg_bundle[target];
    int si = ld.replica_i(target), sj = ld.replica_j(target);
    const LiftAnnotation& an = ann[target];

    // ordinal of every stage-1 tau-slice desired symbol at its replica, in
    // repetition-major scan order
    std::map<std::pair<int, int>, std::pair<int, int>> desired_ordinal;  // (rep, entity) -> (server, ordinal)
    int ord_i = 0, ord_j = 0;
    for (int u = 0; u < fp.x; ++u)
      for (int srv : {si, sj})
        for (size_t li = 0; li < an.line_entities[srv].size(); ++li)
          for (int id : an.line_entities[srv][li]) {
            const LiftEntity& e = an.entities[id];
            if (e.desired && e.has_tau && e.stage == 1) {
              if (desired_ordinal.count({u, id})) continue;
              // the desired split assigns each position to exactly one replica
              auto at = T.queried_indices(bundle, srv, bundle);
              if (std::find(at.begin(), at.end(), e.position) == at.end()) continue;
              int& ord = (srv == si) ? ord_i : ord_j;
              desired_ordinal[{u, id}] = {srv, ord};
              ++ord;
            }
          }
    if (ord_i != half || ord_j != half)
      throw std::logic_error("desired occurrence accounting is off");

    // pad ids per (rep, entity); shared desired pads pair equal ordinals
    std::map<std::pair<int, int>, int> pad;
    std::map<std::pair<int, int>, int> shared_pad;  // (server marker, ordinal) -> pad
    int next_pad = 0;
    std::vector<std::vector<int>> directs(n);  // pad ids downloaded per server

    std::function<int(int, int)> pad_of = [&](int u, int id) -> int {
      auto key = std::make_pair(u, id);
      auto it = pad.find(key);
      if (it != pad.end()) return it->second;
      const LiftEntity& e = an.entities[id];
      int p;
      if (e.desired && e.has_tau && e.stage >= 2) {
        p = pad_of(u, e.partner);
      } else if (e.desired && e.has_tau) {
        auto [srv, ord] = desired_ordinal.at(key);
        if (ord < fp.y) {
          p = next_pad++;
          directs[srv == si ? sj : si].push_back(p);  // downloaded from the other replica
        } else {
          auto skey = std::make_pair(0, ord);
          auto sit = shared_pad.find(skey);
          if (sit != shared_pad.end()) {
            p = sit->second;
          } else {
            p = next_pad++;
            shared_pad[skey] = p;
            // shared pads are the direct downloads of the non-replica servers
            std::vector<int> others;
            for (int s = 0; s < n; ++s)
              if (s != si && s != sj) others.push_back(s);
            directs[others[(ord - fp.y) / fp.y]].push_back(p);
          }
        }
      } else {
        p = next_pad++;
      }
      pad[key] = p;
      return p;
    };

    // allocation scan fixes the pad numbering: repetition-major over the
    // answer lines (direct-download lines inherit their pad's number)
    for (int u = 0; u < fp.x; ++u)
      for (int srv = 0; srv < n; ++srv)
        for (const auto& ids : an.line_entities[srv])
          for (int id : ids) pad_of(u, id);

    if (next_pad != expected_hr)
      throw std::logic_error("randomness accounting does not match the closed form");

    // emit: per server y direct lines, then the x padded repetitions
    Plan plan;
    plan.per_server.resize(n);
    for (int srv = 0; srv < n; ++srv) {
      if (static_cast<int>(directs[srv].size()) != fp.y)
        throw std::logic_error("direct-download accounting is off");
      for (int pid : directs[srv]) {
        Line l;
        l.terms.push_back({SymbolId{true, 0, pid}, 1});
        plan.per_server[srv].push_back(std::move(l));
      }
    }
    for (int u = 0; u < fp.x; ++u)
      for (int srv = 0; srv < n; ++srv)
        for (const auto& ids : an.line_entities[srv]) {
          Line out;
          for (int id : ids) {
            for (const auto& t : an.entities[id].terms)
              out.terms.push_back(
                  {SymbolId{false, t.sym.owner, t.sym.index + u * rep_span}, t.coeff});
            out.terms.push_back({SymbolId{true, 0, pad.at({u, id})}, 1});
          }
          plan.per_server[srv].push_back(std::move(out));
        }
    tpl[target] = std::move(plan);
  }

  std::vector<int> dl(n);
  for (int srv = 0; srv < n; ++srv) dl[srv] = fp.y + fp.x * ld.downloads[srv];
  std::ostringstream nm;
  nm << "fr(" << T.name();
  if (r > 1) nm << "^" << r;
  nm << ", q=" << q << ")";
  auto d = spir_descriptor(MultiGraphSpec(T.graph().base(), r), q, RandMode::FullyReplicated, L,
                           {expected_hr}, dl, nm.str());
  return std::make_shared<TableScheme>(d, tpl);
}

}  // namespace

std::shared_ptr<TableScheme> fr_from_pir(const PirScheme& T, uint32_t q) {
  return fr_impl(T, 1, q);
}

std::shared_ptr<TableScheme> fr_multigraph_from_pir(const PirScheme& T, int r, uint32_t q) {
  return fr_impl(T, r, q);
}

std::shared_ptr<TableScheme> gr_multigraph_from_pir(const PirScheme& T, int r, uint32_t q) {
  if (r == 1) return gr_from_pir(T, q);
  require_srp(T);
  std::vector<LiftAnnotation> ann;
  PirScheme lifted = lift_pir_multigraph(T, r, &ann);
  const auto& ld = lifted.table().desc();
  const auto& bd = T.table().desc();
  int n = ld.n_servers;
  int kprime = T.graph().n_bundles();
  int lp = T.L();
  int L = lifted.L();  // every pool also holds L symbols (rho = 1)

  std::vector<Plan> tpl(ld.n_messages);
  for (int target = 0; target < ld.n_messages; ++target) {
    int k = ld.msg_bundle[target];
    int tau = target / kprime;

    // base-scheme index sets on the randomness (the type-(i) applications
    // run the base scheme with target k over the pools)
    std::vector<std::vector<int>> posR(kprime);
    for (int l = 0; l < kprime; ++l) {
      std::set<int> u;
      for (int srv = 0; srv < n; ++srv)
        for (int idx : T.queried_indices(k, srv, l)) u.insert(idx);
      posR[l].assign(u.begin(), u.end());
    }
    auto phi = replica_swap_bijection(T.queried_indices(k, bd.replica_i(k), k),
                                      T.queried_indices(k, bd.replica_j(k), k), lp);

    // window-paired index assignment per application
    struct AppR {
      int win_base = 0;
      std::vector<std::map<int, int>> map;  // per bundle: position -> pool index
    };
    std::map<std::vector<int>, AppR> by_subset;
    AppR standalone;
    standalone.win_base = 0;
    standalone.map.resize(kprime);
    for (int l = 0; l < kprime; ++l)
      for (int p : posR[l]) standalone.map[l][p] = p;

    int next_window = 1;
    std::vector<AppR> apps;  // in application order (matches the lift's)
    for (int s = 1; s <= r; ++s) {
      std::vector<std::vector<int>> subs;
      {
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int start) {
          if (static_cast<int>(cur.size()) == s) {
            subs.push_back(cur);
            return;
          }
          for (int v = start; v < r; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
          }
        };
        rec(0);
      }
      for (const auto& A : subs) {
        bool has_tau = std::find(A.begin(), A.end(), tau) != A.end();
        AppR app;
        app.map.resize(kprime);
        if (has_tau) {
          std::vector<int> Aprev;
          for (int m : A)
            if (m != tau) Aprev.push_back(m);
          const AppR& partner = Aprev.empty() ? standalone : by_subset.at(Aprev);
          app.win_base = partner.win_base;
          for (int l = 0; l < kprime; ++l) {
            if (l == k) {
              for (int p : posR[l]) app.map[l][p] = partner.win_base + phi[p];
            } else {
              // complement of the partner's indices inside its window,
              // ascending onto the sorted positions
              std::set<int> used;
              for (const auto& [p, idx] : partner.map[l]) used.insert(idx);
              std::vector<int> avail;
              for (int idx = partner.win_base; idx < partner.win_base + lp; ++idx)
                if (!used.count(idx)) avail.push_back(idx);
              std::vector<int> sortedP = posR[l];
              std::sort(sortedP.begin(), sortedP.end());
              for (size_t m = 0; m < sortedP.size(); ++m) app.map[l][sortedP[m]] = avail[m];
            }
          }
        } else {
          app.win_base = next_window++ * lp;
          for (int l = 0; l < kprime; ++l) {
            if (l == k) {
              for (int p : posR[l]) app.map[l][p] = app.win_base + p;
            } else {
              std::vector<int> sortedP = posR[l];
              std::sort(sortedP.begin(), sortedP.end());
              for (size_t m = 0; m < sortedP.size(); ++m)
                app.map[l][sortedP[m]] = app.win_base + static_cast<int>(m);
            }
          }
          by_subset[A] = app;
        }
        apps.push_back(std::move(app));
      }
    }

    // emit: the stand-alone randomness retrieval, then every lifted line
    // with the associated type-(i) line added on
    Plan plan;
    plan.per_server.resize(n);
    for (int srv = 0; srv < n; ++srv)
      for (const auto& bline : T.table().tmpl(k).per_server[srv]) {
        Line out;
        for (const auto& t : bline.terms)
          out.terms.push_back(
              {SymbolId{true, t.sym.owner, standalone.map[t.sym.owner].at(t.sym.index)}, 1});
        plan.per_server[srv].push_back(std::move(out));
      }
    for (int srv = 0; srv < n; ++srv) {
      int per_app = bd.downloads[srv];
      for (size_t a = 0; a < apps.size(); ++a) {
        for (int li = 0; li < per_app; ++li) {
          Line out = lifted.table().tmpl(target).per_server[srv][a * per_app + li];
          const auto& bline = T.table().tmpl(k).per_server[srv][li];
          for (const auto& t : bline.terms)
            out.terms.push_back(
                {SymbolId{true, t.sym.owner, apps[a].map[t.sym.owner].at(t.sym.index)}, 1});
          plan.per_server[srv].push_back(std::move(out));
        }
      }
    }
    tpl[target] = std::move(plan);
  }

  std::vector<int> dl(n);
  for (int srv = 0; srv < n; ++srv) dl[srv] = (1 << r) * bd.downloads[srv];
  std::ostringstream nm;
  nm << "gr(" << T.name() << "^" << r << ", q=" << q << ")";
  auto d = spir_descriptor(MultiGraphSpec(T.graph().base(), r), q, RandMode::GraphReplicated, L,
                           std::vector<int>(kprime, L), dl, nm.str());
  return std::make_shared<TableScheme>(d, tpl);
}

std::shared_ptr<TableScheme> fr_star(int n, int t, uint32_t q) {
  if (t < 2 || t > n - 1) throw std::invalid_argument("fr_star needs 2 <= t <= N-1");
  PirScheme T = pir_star_t(n, t);
  int K = n - 1;
  int home = static_cast<int>(binomial(n - 3, t - 2));
  int lp = T.L();
  long long hr_expected = home + (t - 1) * binomial(n - 1, t);

  std::vector<Plan> tpl(K);
  int hr_all = -1;
  for (int k = 0; k < K; ++k) {
    // one fresh pad per leaf-downloaded symbol, numbered in leaf scan order
    std::map<std::pair<int, int>, int> leaf_pad;  // (message, index) -> pad
    int next_pad = 0;
    for (int m = 0; m < K; ++m)
      for (const auto& line : T.table().tmpl(k).per_server[m])
        for (const auto& term : line.terms) leaf_pad[{m, term.sym.index}] = next_pad++;

    Plan plan;
    plan.per_server.resize(n);
    for (int m = 0; m < K; ++m)
      for (const auto& line : T.table().tmpl(k).per_server[m]) {
        Line out = line;
        out.terms.push_back(
            {SymbolId{true, 0, leaf_pad.at({m, line.terms[0].sym.index})}, 1});
        plan.per_server[m].push_back(std::move(out));
      }
    // center: first the pads that cover the desired symbols at server k
    for (const auto& line : T.table().tmpl(k).per_server[k]) {
      Line direct;
      direct.terms.push_back({SymbolId{true, 0, leaf_pad.at({k, line.terms[0].sym.index})}, 1});
      plan.per_server[n - 1].push_back(std::move(direct));
    }
    // then the t-sums: sums with the desired message reuse the leaf pads of
    // their interference symbols; sums without it get a fresh (t-1)-sum of
    // pads (a single pad would break the uniform answer shape)
    for (const auto& line : T.table().tmpl(k).per_server[n - 1]) {
      Line out = line;
      bool has_k = false;
      for (const auto& term : line.terms)
        if (term.sym.owner == k) has_k = true;
      if (has_k) {
        for (const auto& term : line.terms)
          if (term.sym.owner != k)
            out.terms.push_back(
                {SymbolId{true, 0, leaf_pad.at({term.sym.owner, term.sym.index})}, 1});
      } else {
        for (int i = 0; i < t - 1; ++i) out.terms.push_back({SymbolId{true, 0, next_pad++}, 1});
      }
      plan.per_server[n - 1].push_back(std::move(out));
    }
    if (next_pad != hr_expected)
      throw std::logic_error("star randomness accounting does not match the closed form");
    if (hr_all < 0) hr_all = next_pad;
    tpl[k] = std::move(plan);
  }

  std::vector<int> dl(n, home);
  dl[n - 1] = home + static_cast<int>(binomial(n - 1, t));
  std::ostringstream nm;
  nm << "fr_star(" << n << "," << t << ", q=" << q << ")";
  auto d = spir_descriptor(MultiGraphSpec(star_graph(n), 1), q, RandMode::FullyReplicated, lp,
                           {hr_all}, dl, nm.str());
  return std::make_shared<TableScheme>(d, tpl);
}

}  // namespace spir
