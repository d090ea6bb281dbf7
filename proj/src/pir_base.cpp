#include "spir/pir_base.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "spir/rational.hpp"

namespace spir {

namespace {

SchemeDescriptor pir_descriptor(const MultiGraphSpec& g, int L, std::vector<int> downloads,
                                const std::string& name) {
  SchemeDescriptor d;
  d.name = name;
  d.q = 2;  // execution field; tables are field-agnostic, q is set per run
  d.mode = RandMode::GraphReplicated;
  d.n_servers = g.n_servers();
  d.n_messages = g.n_messages();
  d.n_bundles = g.n_bundles();
  d.L = L;
  d.pool_sizes.assign(g.n_bundles(), 0);  // a PIR scheme has no server randomness
  for (int m = 0; m < g.n_messages(); ++m) d.msg_bundle.push_back(g.edge_of(m));
  for (int k = 0; k < g.n_bundles(); ++k) {
    const Edge& e = g.base().edge(k);
    d.bundle_servers.emplace_back(e.a - 1, e.b - 1);
  }
  d.storage = storage_map(g, RandMode::GraphReplicated);
  d.downloads = std::move(downloads);
  for (int m = 0; m < g.n_messages(); ++m) {
    CoinComponent c;
    c.kind = CoinComponent::Kind::Perm;
    c.n = L;
    c.cls = PermClass{false, m};
    c.label = std::string("pi_") + static_cast<char>('a' + m);
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

Line mline(std::initializer_list<std::pair<int, int>> refs) {
  Line l;
  for (auto [msg, idx] : refs) l.terms.push_back({SymbolId{false, msg, idx}, 1});
  return l;
}

std::vector<int> line_downloads(const std::vector<Plan>& tpls, int n_servers) {
  std::vector<int> d(n_servers, 0);
  for (int n = 0; n < n_servers; ++n) d[n] = static_cast<int>(tpls[0].per_server[n].size());
  return d;
}

}  // namespace

PirScheme::PirScheme(std::shared_ptr<TableScheme> table, MultiGraphSpec graph,
                     int symbols_per_message, std::string name)
    : table_(std::move(table)), graph_(std::move(graph)), Lp_(symbols_per_message),
      name_(std::move(name)) {}

std::vector<int> PirScheme::queried_indices(int target, int server, int msg) const {
  return referenced_indices(table_->tmpl(target), server, SymbolId{false, msg, 0});
}

PirScheme PirScheme::at_q(uint32_t q) const {
  SchemeDescriptor d = table_->desc();
  d.q = q;
  std::vector<Plan> tpl;
  for (int k = 0; k < d.n_messages; ++k) tpl.push_back(table_->tmpl(k));
  return PirScheme(std::make_shared<TableScheme>(d, tpl), graph_, Lp_, name_);
}

SrpReport check_srp(const PirScheme& s) {
  SrpReport rep;
  const auto& d = s.table().desc();
  std::ostringstream detail;
  for (int k = 0; k < d.n_messages; ++k) {
    int i = d.replica_i(k), j = d.replica_j(k);
    int ci = static_cast<int>(s.queried_indices(k, i, k).size());
    int cj = static_cast<int>(s.queried_indices(k, j, k).size());
    rep.replica_counts.emplace_back(ci, cj);
    if (ci != cj || ci * 2 != d.L) {
      rep.ok = false;
      detail << "target " << (k + 1) << ": " << ci << "/" << cj << " of " << d.L << " symbols; ";
    }
  }
  rep.detail = detail.str();
  return rep;
}

PirScheme pir_p3() {
  MultiGraphSpec g(path_graph(3), 1);
  std::vector<Plan> tpl(2);
  tpl[0].per_server = {{mline({{0, 0}})}, {mline({{0, 1}, {1, 1}})}, {mline({{1, 1}})}};
  tpl[1].per_server = {{mline({{0, 0}})}, {mline({{0, 0}, {1, 0}})}, {mline({{1, 1}})}};
  auto d = pir_descriptor(g, 2, {1, 1, 1}, "pir_p3");
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, 2, "pir_p3");
}

namespace {

// canonical per-server line order: singles before longer sums, then by the
// sorted (message, index) contents
void sort_lines(ServerPlan& sp) {
  auto key = [](const Line& l) {
    std::vector<std::pair<int, int>> refs;
    for (const auto& t : l.terms) refs.emplace_back(t.sym.owner, t.sym.index);
    std::sort(refs.begin(), refs.end());
    return std::make_pair(l.terms.size(), refs);
  };
  std::stable_sort(sp.begin(), sp.end(),
                   [&](const Line& x, const Line& y) { return key(x) < key(y); });
}

}  // namespace

PirScheme pir_c3() {
  MultiGraphSpec g(cycle_graph(3), 1);
  // reference block for k = 1; messages a=0 (edge {1,2}), b=1 ({2,3}), c=2 ({1,3})
  std::vector<Plan> tpl(3);
  tpl[0].per_server = {
      {mline({{0, 0}}), mline({{2, 0}}), mline({{0, 1}, {2, 1}}), mline({{0, 2}, {2, 2}})},
      {mline({{0, 3}}), mline({{1, 0}}), mline({{0, 4}, {1, 1}}), mline({{0, 5}, {1, 2}})},
      {mline({{1, 1}}), mline({{2, 1}}), mline({{1, 2}, {2, 0}}), mline({{1, 0}, {2, 2}})}};
  // k = 2, 3 through the cyclic automorphism (servers 1->2->3->1, messages
  // a->b->c->a), then canonical line order per server
  auto rotate = [&](const Plan& src) {
    Plan out;
    out.per_server.resize(3);
    for (int n = 0; n < 3; ++n) {
      ServerPlan sp = src.per_server[n];
      for (auto& line : sp)
        for (auto& t : line.terms) t.sym.owner = (t.sym.owner + 1) % 3;
      out.per_server[(n + 1) % 3] = std::move(sp);
    }
    for (auto& sp : out.per_server) sort_lines(sp);
    return out;
  };
  tpl[1] = rotate(tpl[0]);
  tpl[2] = rotate(tpl[1]);
  auto d = pir_descriptor(g, 6, {4, 4, 4}, "pir_c3");
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, 6, "pir_c3");
}

PirScheme pir_star_simple(int n) {
  if (n < 3) throw std::invalid_argument("star scheme needs N >= 3");
  MultiGraphSpec g(star_graph(n), 1);
  int K = n - 1;
  std::vector<Plan> tpl(K);
  for (int k = 0; k < K; ++k) {
    tpl[k].per_server.resize(n);
    for (int m = 0; m < K; ++m) tpl[k].per_server[m].push_back(mline({{m, 0}}));
    Line center;
    center.terms.push_back({SymbolId{false, k, 1}, 1});
    for (int m = 0; m < K; ++m)
      if (m != k) center.terms.push_back({SymbolId{false, m, 0}, 1});
    tpl[k].per_server[n - 1].push_back(std::move(center));
  }
  std::vector<int> dl(n, 1);
  auto d = pir_descriptor(g, 2, dl, "pir_star_simple" + std::to_string(n));
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, 2,
                   "pir_star_simple" + std::to_string(n));
}

PirScheme pir_s4() { return pir_star_simple(4); }

namespace {

std::vector<std::vector<int>> subsets_lex(int n, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == t) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

PirScheme pir_star_t(int n, int t) {
  if (n < 3) throw std::invalid_argument("star scheme needs N >= 3");
  if (t < 1 || t > n - 1) throw std::invalid_argument("t out of range");
  MultiGraphSpec g(star_graph(n), 1);
  int K = n - 1;
  long long home = binomial(n - 3, t - 2);      // per-leaf downloads
  long long occ = binomial(n - 2, t - 1);       // per-message occurrences at the center
  int L = static_cast<int>(occ + home);
  auto subs = subsets_lex(K, t);

  std::vector<Plan> tpl(K);
  for (int k = 0; k < K; ++k) {
    tpl[k].per_server.resize(n);
    for (int m = 0; m < K; ++m)
      for (int i = 0; i < home; ++i) tpl[k].per_server[m].push_back(mline({{m, i}}));
    // occurrence index of message l in subset S, for desired index k:
    // desired: home symbols first, then k-subsets in lex order;
    // others: subsets paired with k first (these are what the leaf serves)
    auto occ_index = [&](int l, const std::vector<int>& S) {
      bool has_k = std::find(S.begin(), S.end(), k) != S.end();
      int rank = 0;
      for (const auto& other : subs) {
        bool o_l = std::find(other.begin(), other.end(), l) != other.end();
        bool o_k = std::find(other.begin(), other.end(), k) != other.end();
        if (other == S) break;
        if (l == k) {
          if (o_k) ++rank;
        } else if (has_k) {
          if (o_l && o_k) ++rank;
        } else {
          if (o_l && !o_k) ++rank;
        }
      }
      if (l == k) return static_cast<int>(home) + rank;
      return has_k ? rank : static_cast<int>(home) + rank;
    };
    for (const auto& S : subs) {
      Line line;
      for (int l : S) line.terms.push_back({SymbolId{false, l, occ_index(l, S)}, 1});
      tpl[k].per_server[n - 1].push_back(std::move(line));
    }
  }
  std::vector<int> dl(n, static_cast<int>(home));
  dl[n - 1] = static_cast<int>(subs.size());
  std::string name = "pir_star_t(" + std::to_string(n) + "," + std::to_string(t) + ")";
  auto d = pir_descriptor(g, L, dl, name);
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, L, name);
}

std::vector<int> replica_swap_bijection(const std::vector<int>& at_i, const std::vector<int>& at_j,
                                        int lp) {
  std::vector<int> phi(lp);
  for (int p = 0; p < lp; ++p) phi[p] = p;
  if (at_i.size() != at_j.size())
    throw std::invalid_argument("replica position sets of unequal size");
  for (size_t m = 0; m < at_i.size(); ++m) {
    phi[at_i[m]] = at_j[m];
    phi[at_j[m]] = at_i[m];
  }
  return phi;
}

PirScheme lift_pir_multigraph(const PirScheme& base, int r,
                              std::vector<LiftAnnotation>* annotations) {
  if (base.graph().multiplicity() != 1)
    throw std::invalid_argument("lift starts from a simple-graph scheme");
  if (r < 1) throw std::invalid_argument("multiplicity must be >= 1");
  auto srp = check_srp(base);
  if (!srp.ok)
    throw std::invalid_argument("lift requires the symmetric retrieval property: " + srp.detail);

  const auto& bd = base.table().desc();
  int kprime = bd.n_messages;
  int lp = base.L();
  MultiGraphSpec g(base.graph().base(), r);
  int L = (1 << (r - 1)) * lp;

  if (annotations) annotations->assign(g.n_messages(), {});
  std::vector<Plan> tpl(g.n_messages());

  for (int tau = 0; tau < r; ++tau)
    for (int k = 0; k < kprime; ++k) {
      int target = g.message_id(k, tau);
      Plan plan;
      plan.per_server.resize(g.n_servers());
      LiftAnnotation ann;
      ann.line_entities.resize(g.n_servers());

      // positions of bundle l in the base scheme for target k
      std::vector<std::vector<int>> pos(kprime);
      for (int l = 0; l < kprime; ++l) {
        std::set<int> u;
        for (int n = 0; n < bd.n_servers; ++n)
          for (int idx : base.queried_indices(k, n, l)) u.insert(idx);
        pos[l].assign(u.begin(), u.end());
        if (l != k) {
          // interference indices must coincide at both replicas
          auto pi = base.queried_indices(k, bd.replica_i(l), l);
          auto pj = base.queried_indices(k, bd.replica_j(l), l);
          if (pi != pj)
            throw std::invalid_argument("interference index sets differ across replicas");
        }
      }
      {
        auto pi = base.queried_indices(k, bd.replica_i(k), k);
        auto pj = base.queried_indices(k, bd.replica_j(k), k);
        std::vector<int> all = pi;
        all.insert(all.end(), pj.begin(), pj.end());
        std::sort(all.begin(), all.end());
        for (int p = 0; p < lp; ++p)
          if (p >= static_cast<int>(all.size()) || all[p] != p)
            throw std::invalid_argument("desired symbols do not split across the replicas");
      }
      auto phi = replica_swap_bijection(base.queried_indices(k, bd.replica_i(k), k),
                                        base.queried_indices(k, bd.replica_j(k), k), lp);

      std::vector<int> next_block(g.n_messages(), 0);
      // desired-bundle entity ids of the previous stage, keyed by subset
      std::map<std::vector<int>, std::vector<int>> prev_desired, cur_desired;

      for (int s = 1; s <= r; ++s) {
        cur_desired.clear();
        for (const auto& A : subsets_lex(r, s)) {
          bool has_tau = std::find(A.begin(), A.end(), tau) != A.end();
          // one entity per referenced position of every bundle
          std::vector<std::map<int, int>> entity(kprime);  // position -> entity id
          for (int l = 0; l < kprime; ++l) {
            const auto& P = (l == k) ? pos[k] : pos[l];
            std::vector<int> sortedP = P;
            std::sort(sortedP.begin(), sortedP.end());
            std::vector<int> blocks;
            bool reuse_stage = (l == k && has_tau && s >= 2);
            bool plain_stage1_tau = (l == k && has_tau && s == 1);
            if (reuse_stage || plain_stage1_tau) {
              blocks.push_back(next_block[g.message_id(k, tau)]++);
            } else {
              for (int m : A) blocks.push_back(next_block[g.message_id(l, m)]++);
            }
            const std::vector<int>* reuse = nullptr;
            if (reuse_stage) {
              std::vector<int> Aprev;
              for (int m : A)
                if (m != tau) Aprev.push_back(m);
              reuse = &prev_desired.at(Aprev);
            }
            for (int p : P) {
              LiftEntity e;
              e.stage = s;
              e.subset = A;
              e.bundle = l;
              e.has_tau = has_tau;
              e.desired = (l == k);
              e.position = p;
              if (plain_stage1_tau) {
                e.terms.push_back({SymbolId{false, g.message_id(k, tau), blocks[0] * lp + p}, 1});
              } else if (reuse_stage) {
                e.terms.push_back(
                    {SymbolId{false, g.message_id(k, tau), blocks[0] * lp + phi[p]}, 1});
                e.partner = (*reuse)[phi[p]];
                const auto& pterms = ann.entities[e.partner].terms;
                e.terms.insert(e.terms.end(), pterms.begin(), pterms.end());
              } else if (l == k) {  // desired bundle, subset without tau
                for (size_t mi = 0; mi < A.size(); ++mi)
                  e.terms.push_back(
                      {SymbolId{false, g.message_id(k, A[mi]), blocks[mi] * lp + p}, 1});
              } else {  // interference bundle: fresh constituents every stage
                int offset;
                if (s == 1) {
                  offset = p;
                } else {
                  int rank = static_cast<int>(std::lower_bound(sortedP.begin(), sortedP.end(), p) -
                                              sortedP.begin());
                  offset = lp / 2 + rank;
                }
                for (size_t mi = 0; mi < A.size(); ++mi)
                  e.terms.push_back(
                      {SymbolId{false, g.message_id(l, A[mi]), blocks[mi] * lp + offset}, 1});
              }
              entity[l][p] = static_cast<int>(ann.entities.size());
              ann.entities.push_back(std::move(e));
            }
          }
          // instantiate the base answer table on these entities
          for (int n = 0; n < bd.n_servers; ++n)
            for (const auto& bline : base.table().tmpl(k).per_server[n]) {
              Line out;
              std::vector<int> ids;
              for (const auto& t : bline.terms) {
                int id = entity[t.sym.owner].at(t.sym.index);
                ids.push_back(id);
                const auto& e = ann.entities[id].terms;
                out.terms.insert(out.terms.end(), e.begin(), e.end());
              }
              plan.per_server[n].push_back(std::move(out));
              ann.line_entities[n].push_back(std::move(ids));
            }
          // remember the desired-bundle entity ids for the next stage
          std::vector<int> keep(lp, -1);
          for (int p : pos[k]) keep[p] = entity[k][p];
          cur_desired[A] = std::move(keep);
        }
        prev_desired = cur_desired;
      }
      tpl[target] = std::move(plan);
      if (annotations) (*annotations)[target] = std::move(ann);
    }

  if (r == 1) {
    // single-stage collapse: identical to the base scheme
    return base;
  }
  std::vector<int> dl(g.n_servers());
  for (int n = 0; n < g.n_servers(); ++n) dl[n] = ((1 << r) - 1) * bd.downloads[n];
  std::string name = base.name() + "^(" + std::to_string(r) + ")";
  auto d = pir_descriptor(g, L, dl, name);
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, L, name);
}

// ---------------------------------------------------------------------------
// declarative table format

namespace {

Line parse_cell(const std::string& cell) {
  Line l;
  std::stringstream ss(cell);
  std::string termstr;
  while (std::getline(ss, termstr, '+')) {
    termstr.erase(std::remove_if(termstr.begin(), termstr.end(), ::isspace), termstr.end());
    if (termstr.empty()) throw std::invalid_argument("empty term in cell: " + cell);
    char letter = termstr[0];
    if (letter < 'a' || letter > 'z') throw std::invalid_argument("bad symbol: " + termstr);
    int idx = std::stoi(termstr.substr(1));
    l.terms.push_back({SymbolId{false, letter - 'a', idx - 1}, 1});
  }
  return l;
}

}  // namespace

PirScheme load_pir_table(std::istream& in, const std::string& name) {
  std::string line;
  std::optional<GraphSpec> graph;
  int r = 1;
  int L = 0;
  std::vector<Plan> tpl;
  Plan* cur = nullptr;
  std::vector<Edge> custom_edges;
  int custom_n = 0;
  bool custom = false;

  auto finish_graph = [&]() {
    if (custom && !graph) graph = GraphSpec(custom_n, custom_edges, name);
  };

  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::stringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    if (word == "graph") {
      std::string fam;
      ss >> fam;
      if (fam == "m") {
        graph = m_graph();
      } else if (fam == "custom") {
        ss >> custom_n;
        custom = true;
      } else {
        int n;
        ss >> n;
        if (fam == "path") graph = path_graph(n);
        else if (fam == "cycle") graph = cycle_graph(n);
        else if (fam == "star") graph = star_graph(n);
        else if (fam == "complete") graph = complete_graph(n);
        else throw std::invalid_argument("unknown family: " + fam);
      }
      std::string rw;
      if (ss >> rw && rw == "r") ss >> r;
    } else if (word == "edge") {
      int a, b;
      ss >> a >> b;
      custom_edges.push_back({a, b});
    } else if (word == "L") {
      ss >> L;
    } else if (word == "target") {
      finish_graph();
      tpl.emplace_back();
      cur = &tpl.back();
      if (graph) cur->per_server.resize(graph->n_servers());
    } else {
      // "<server>: cell, cell, ..."
      if (!cur) throw std::invalid_argument("answer row before any target block");
      if (word.back() == ':') word.pop_back();
      int server = std::stoi(word) - 1;
      std::string rest;
      std::getline(ss, rest);
      if (!rest.empty() && rest[0] == ':') rest = rest.substr(1);
      std::stringstream cells(rest);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
        if (cell.empty()) continue;
        cur->per_server.at(server).push_back(parse_cell(cell));
      }
    }
  }
  finish_graph();
  if (!graph || L == 0 || tpl.empty()) throw std::invalid_argument("incomplete pir table");
  MultiGraphSpec g(*graph, r);
  if (static_cast<int>(tpl.size()) != g.n_messages())
    throw std::invalid_argument("table needs one block per message");
  std::vector<int> dl = line_downloads(tpl, g.n_servers());
  for (const auto& p : tpl)
    for (int n = 0; n < g.n_servers(); ++n)
      if (static_cast<int>(p.per_server[n].size()) != dl[n])
        throw std::invalid_argument("per-server download counts differ across targets");
  auto d = pir_descriptor(g, L, dl, name);
  return PirScheme(std::make_shared<TableScheme>(d, tpl), g, L, name);
}

PirScheme load_pir_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pir table: " + path);
  return load_pir_table(in, path);
}

std::string save_pir_table(const PirScheme& s) {
  std::ostringstream os;
  const auto& g = s.graph();
  const auto& base = g.base();
  os << "# " << s.name() << "\n";
  std::string fam = base.name();
  if (fam.rfind("path", 0) == 0) os << "graph path " << base.n_servers();
  else if (fam.rfind("cycle", 0) == 0) os << "graph cycle " << base.n_servers();
  else if (fam.rfind("star", 0) == 0) os << "graph star " << base.n_servers();
  else if (fam.rfind("complete", 0) == 0) os << "graph complete " << base.n_servers();
  else if (fam == "m") os << "graph m";
  else {
    os << "graph custom " << base.n_servers();
    if (g.multiplicity() > 1) os << " r " << g.multiplicity();
    os << "\n";
    for (const auto& e : base.edges()) os << "edge " << e.a << " " << e.b;
  }
  if (g.multiplicity() > 1 && fam != "custom") os << " r " << g.multiplicity();
  os << "\n";
  os << "L " << s.L() << "\n";
  for (int k = 0; k < s.table().desc().n_messages; ++k) {
    os << "target " << (k + 1) << "\n";
    const Plan& p = s.table().tmpl(k);
    for (int n = 0; n < g.n_servers(); ++n) {
      os << (n + 1) << ":";
      for (size_t i = 0; i < p.per_server[n].size(); ++i) {
        os << (i ? ", " : " ");
        bool first = true;
        for (const auto& t : p.per_server[n][i].terms) {
          if (!first) os << "+";
          first = false;
          os << static_cast<char>('a' + t.sym.owner) << (t.sym.index + 1);
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace spir
