#include "spir/protocol.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "spir/linalg.hpp"

namespace spir {

int SchemeDescriptor::total_downloads() const {
  int t = 0;
  for (int d : downloads) t += d;
  return t;
}

std::optional<uint64_t> CoinSpace::total(uint64_t cap) const {
  uint64_t t = 1;
  for (const auto& c : comps) {
    uint64_t dom = 1;
    if (c.kind == CoinComponent::Kind::FieldSym) {
      dom = c.n;
    } else {
      for (int i = 2; i <= c.n; ++i) {
        if (dom > cap / i) return std::nullopt;
        dom *= i;
      }
    }
    if (dom != 0 && t > cap / dom) return std::nullopt;
    t *= dom;
  }
  return t;
}

Coins identity_coins(const CoinSpace& space) {
  Coins c;
  for (const auto& comp : space.comps) {
    CoinValue v;
    if (comp.kind == CoinComponent::Kind::Perm) {
      v.perm.resize(comp.n);
      for (int i = 0; i < comp.n; ++i) v.perm[i] = i;
    }
    c.v.push_back(std::move(v));
  }
  return c;
}

Coins random_coins(const CoinSpace& space, std::mt19937_64& rng)
{
  Coins c = identity_coins(space);
  for (size_t i = 0; i < space.comps.size(); ++i) {
    const auto& comp = space.comps[i];
    if (comp.kind == CoinComponent::Kind::FieldSym) {
      c.v[i].field = static_cast<uint32_t>(rng() % comp.n);
    } else {
      auto& p = c.v[i].perm;
      for (int k = comp.n - 1; k > 0; --k) {
        int j = static_cast<int>(rng() % (k + 1));
        std::swap(p[k], p[j]);
      }
    }
  }
  return c;
}

std::optional<uint64_t> enumerate_coins(const CoinSpace& space, uint64_t cap,
                                        const std::function<void(const Coins&)>& fn) {
  auto total = space.total(cap);
  if (!total) return std::nullopt;
  Coins c = identity_coins(space);
  uint64_t count = 0;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == space.comps.size()) {
      fn(c);
      ++count;
      return;
    }
    const auto& comp = space.comps[i];
    if (comp.kind == CoinComponent::Kind::FieldSym) {
      for (int v = 0; v < comp.n; ++v) {
        c.v[i].field = v;
        rec(i + 1);
      }
      c.v[i].field = 0;
    } else {
      auto& p = c.v[i].perm;
      std::sort(p.begin(), p.end());
      do {
        rec(i + 1);
      } while (std::next_permutation(p.begin(), p.end()));
      std::sort(p.begin(), p.end());
    }
  };
  rec(0);
  return count;
}

MessageDatabase MessageDatabase::zero(const PrimeField& f, int n_messages, int L) {
  MessageDatabase db{f, L, {}};
  db.msgs.assign(n_messages, std::vector<FieldElement>(L, FieldElement(0, f)));
  return db;
}

MessageDatabase MessageDatabase::random(const PrimeField& f, int n_messages, int L,
                                        std::mt19937_64& rng) {
  MessageDatabase db = zero(f, n_messages, L);
  for (auto& m : db.msgs)
    for (auto& s : m) s = FieldElement(static_cast<uint32_t>(rng() % f.order()), f);
  return db;
}

RandomnessPool RandomnessPool::zero(const PrimeField& f, const std::vector<int>& sizes) {
  RandomnessPool p{f, {}};
  for (int s : sizes) p.pools.emplace_back(s, FieldElement(0, f));
  return p;
}

RandomnessPool RandomnessPool::random(const PrimeField& f, const std::vector<int>& sizes,
                                      std::mt19937_64& rng) {
  RandomnessPool p = zero(f, sizes);
  for (auto& pool : p.pools)
    for (auto& s : pool) s = FieldElement(static_cast<uint32_t>(rng() % f.order()), f);
  return p;
}

std::string Transcript::to_text() const {
  std::ostringstream os;
  for (size_t n = 0; n < answers.size(); ++n) {
    os << (n + 1) << ":";
    for (size_t i = 0; i < answers[n].size(); ++i) os << (i ? "," : " ") << answers[n][i].value();
    os << "\n";
  }
  return os.str();
}

std::vector<FieldElement> evaluate_server(const SchemeDescriptor& d, const ServerPlan& sp,
                                          const MessageDatabase& db, const RandomnessPool& pool) {
  PrimeField f(d.q);
  std::vector<FieldElement> out;
  out.reserve(sp.size());
  for (const auto& line : sp) {
    FieldElement acc(0, f);
    for (const auto& t : line.terms) {
      const FieldElement& s = t.sym.is_rand ? pool.pools.at(t.sym.owner).at(t.sym.index)
                                            : db.msgs.at(t.sym.owner).at(t.sym.index);
      acc = acc + FieldElement(t.coeff, f) * s;
    }
    out.push_back(acc);
  }
  return out;
}

Transcript run_transcript(const Scheme& s, const MessageDatabase& db, const RandomnessPool& pool,
                          const Coins& coins, int target) {
  const auto& d = s.desc();
  if (static_cast<int>(db.msgs.size()) != d.n_messages || db.L != d.L)
    throw std::invalid_argument("database dimensions do not match the scheme");
  if (pool.pools.size() != d.pool_sizes.size())
    throw std::invalid_argument("randomness pool count does not match the scheme");
  for (size_t i = 0; i < pool.pools.size(); ++i)
    if (static_cast<int>(pool.pools[i].size()) != d.pool_sizes[i])
      throw std::invalid_argument("randomness pool size does not match the scheme");

  Transcript tr;
  tr.coins = coins;
  tr.target = target;
  tr.queries = s.make_plan(coins, target);
  for (int n = 0; n < d.n_servers; ++n) {
    // a server can only evaluate symbols it stores
    const auto& stored_msgs = d.storage.server_messages[n];
    const auto& stored_pools = d.storage.server_pools[n];
    for (const auto& line : tr.queries.per_server[n])
      for (const auto& t : line.terms) {
        bool ok = t.sym.is_rand
                      ? std::find(stored_pools.begin(), stored_pools.end(), t.sym.owner) !=
                            stored_pools.end()
                      : std::find(stored_msgs.begin(), stored_msgs.end(), t.sym.owner) !=
                            stored_msgs.end();
        if (!ok) throw std::logic_error("plan references a symbol the server does not store");
      }
    tr.answers.push_back(evaluate_server(d, tr.queries.per_server[n], db, pool));
    tr.downloads.push_back(static_cast<int>(tr.answers.back().size()));
    if (tr.downloads.back() != d.downloads[n])
      throw std::logic_error("download count deviates from the descriptor");
  }
  tr.decoded = s.decode(tr.answers, coins, target);
  return tr;
}

Rat rate_of(const Scheme& s) { return Rat(s.desc().L, s.desc().total_downloads()); }

RandRatios randomness_ratios(const Scheme& s) {
  const auto& d = s.desc();
  RandRatios rr;
  long long total = 0;
  for (int p : d.pool_sizes) total += p;
  rr.rho_total = Rat(total, d.L);
  if (d.mode == RandMode::GraphReplicated && !d.pool_sizes.empty())
    rr.rho = Rat(d.pool_sizes[0], d.L);
  return rr;
}

namespace {

// column layout for the linear decoder: message symbols first, then pools
struct ColMap {
  int L = 0;
  int n_messages = 0;
  std::vector<int> pool_base;
  int n_cols = 0;

  explicit ColMap(const SchemeDescriptor& d) : L(d.L), n_messages(d.n_messages) {
    int base = n_messages * L;
    for (int p : d.pool_sizes) {
      pool_base.push_back(base);
      base += p;
    }
    n_cols = base;
  }
  int col(const SymbolId& s) const {
    return s.is_rand ? pool_base[s.owner] + s.index : s.owner * L + s.index;
  }
};

}  // namespace

std::vector<FieldElement> Scheme::decode(const std::vector<std::vector<FieldElement>>& answers,
                                         const Coins& coins, int target) const {
  // Generic decoder for linear schemes: the user knows the full plan, so it
  // solves for coefficient vectors expressing each desired symbol as a
  // combination of answer lines.
  Plan plan = make_plan(coins, target);
  ColMap cm(d_);
  MatQ m(d_.q, 0, cm.n_cols);
  std::vector<FieldElement> flat;
  PrimeField f(d_.q);
  for (int n = 0; n < d_.n_servers; ++n)
    for (size_t i = 0; i < plan.per_server[n].size(); ++i) {
      std::vector<uint32_t> row(cm.n_cols, 0);
      for (const auto& t : plan.per_server[n][i].terms) {
        size_t c = cm.col(t.sym);
        row[c] = (row[c] + t.coeff) % d_.q;
      }
      m.append_row(row);
      flat.push_back(answers[n][i]);
    }

  // transpose-solve: want y with y^T M = e_target_sym
  MatQ mt(d_.q, cm.n_cols, m.rows());
  for (size_t rr = 0; rr < m.rows(); ++rr)
    for (size_t cc = 0; cc < m.cols(); ++cc) mt.at(cc, rr) = m.at(rr, cc);

  std::vector<FieldElement> out;
  for (int sym = 0; sym < d_.L; ++sym) {
    std::vector<uint32_t> e(cm.n_cols, 0);
    e[target * d_.L + sym] = 1;
    auto y = solve(mt, e);
    if (!y) throw DecodeError("target symbol is not a combination of the answers");
    uint64_t acc = 0;
    for (size_t i = 0; i < y->size(); ++i)
      acc = (acc + static_cast<uint64_t>((*y)[i]) * flat[i].value()) % d_.q;
    out.push_back(FieldElement(static_cast<uint32_t>(acc), f));
  }
  return out;
}

Plan relabel_plan(const Plan& tpl, const CoinSpace& space, const Coins& coins) {
  // per-class index maps from the permutation components
  Plan out = tpl;
  for (size_t i = 0; i < space.comps.size(); ++i) {
    const auto& comp = space.comps[i];
    if (comp.kind != CoinComponent::Kind::Perm) continue;
    const auto& perm = coins.v[i].perm;
    for (auto& sp : out.per_server)
      for (auto& line : sp)
        for (auto& t : line.terms)
          if (t.sym.is_rand == comp.cls.is_rand && t.sym.owner == comp.cls.owner)
            t.sym.index = perm[t.sym.index];
  }
  return out;
}

TableScheme::TableScheme(SchemeDescriptor d, std::vector<Plan> templates)
    : Scheme(std::move(d)), tpl_(std::move(templates)) {
  if (static_cast<int>(tpl_.size()) != d_.n_messages)
    throw std::invalid_argument("one template per retrievable message required");
  // registration checks: fixed download counts, storage locality
  for (int k = 0; k < d_.n_messages; ++k) {
    const Plan& p = tpl_[k];
    if (static_cast<int>(p.per_server.size()) != d_.n_servers)
      throw std::invalid_argument("template server count mismatch");
    for (int n = 0; n < d_.n_servers; ++n) {
      if (static_cast<int>(p.per_server[n].size()) != d_.downloads[n])
        throw std::invalid_argument("variable-length answers are not allowed");
      const auto& sm = d_.storage.server_messages[n];
      const auto& sp = d_.storage.server_pools[n];
      for (const auto& line : p.per_server[n])
        for (const auto& t : line.terms) {
          bool ok = t.sym.is_rand
                        ? std::find(sp.begin(), sp.end(), t.sym.owner) != sp.end()
                        : std::find(sm.begin(), sm.end(), t.sym.owner) != sm.end();
          if (!ok) throw std::invalid_argument("template references symbols off-server");
          int limit = t.sym.is_rand ? d_.pool_sizes[t.sym.owner] : d_.L;
          if (t.sym.index < 0 || t.sym.index >= limit)
            throw std::invalid_argument("template symbol index out of range");
        }
    }
  }
}

Plan TableScheme::make_plan(const Coins& coins, int target) const {
  return relabel_plan(tpl_.at(target), d_.coins, coins);
}

std::vector<int> referenced_indices(const Plan& tpl, int server, const SymbolId& proto) {
  std::set<int> idx;
  for (const auto& line : tpl.per_server.at(server))
    for (const auto& t : line.terms)
      if (t.sym.is_rand == proto.is_rand && t.sym.owner == proto.owner) idx.insert(t.sym.index);
  return std::vector<int>(idx.begin(), idx.end());
}

}  // namespace spir
