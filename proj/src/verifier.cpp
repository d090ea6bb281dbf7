#include "spir/verifier.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "spir/linalg.hpp"
#include "spir/render.hpp"

namespace spir {

namespace {

std::optional<uint64_t> pow_cap(uint64_t base, int exp, uint64_t cap) {
  uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base) return std::nullopt;
    r *= base;
  }
  return r;
}

std::optional<uint64_t> mul_cap(uint64_t a, uint64_t b, uint64_t cap) {
  if (b != 0 && a > cap / b) return std::nullopt;
  return a * b;
}

struct StateSpace {
  int n_msg_digits = 0;
  int n_pool_digits = 0;
  std::vector<int> pool_base;  // digit offset per pool

  explicit StateSpace(const SchemeDescriptor& d) {
    n_msg_digits = d.n_messages * d.L;
    int off = n_msg_digits;
    for (int p : d.pool_sizes) {
      pool_base.push_back(off);
      off += p;
    }
    n_pool_digits = off - n_msg_digits;
  }
  int digits() const { return n_msg_digits + n_pool_digits; }
  int msg_pos(const SchemeDescriptor& d, int owner, int index) const { return owner * d.L + index; }
  int pos(const SchemeDescriptor& d, const SymbolId& s) const {
    return s.is_rand ? pool_base[s.owner] + s.index : msg_pos(d, s.owner, s.index);
  }
};

// per-line term positions for fast evaluation
struct CompiledPlan {
  std::vector<std::vector<std::pair<int, uint32_t>>> lines;  // flat over servers
  std::vector<int> server_of;

  CompiledPlan(const SchemeDescriptor& d, const StateSpace& ss, const Plan& p) {
    for (int n = 0; n < d.n_servers; ++n)
      for (const auto& line : p.per_server[n]) {
        std::vector<std::pair<int, uint32_t>> terms;
        for (const auto& t : line.terms) terms.emplace_back(ss.pos(d, t.sym), t.coeff);
        lines.push_back(std::move(terms));
        server_of.push_back(n);
      }
  }
  void eval(const std::vector<uint32_t>& state, uint32_t q, std::vector<uint32_t>& out) const {
    out.resize(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
      uint64_t acc = 0;
      for (const auto& [pos, c] : lines[i]) acc += static_cast<uint64_t>(c) * state[pos];
      out[i] = static_cast<uint32_t>(acc % q);
    }
  }
  // matrix over all state digits
  MatQ matrix(uint32_t q, int digits) const {
    MatQ m(q, lines.size(), digits);
    for (size_t i = 0; i < lines.size(); ++i)
      for (const auto& [pos, c] : lines[i]) m.at(i, pos) = (m.at(i, pos) + c) % q;
    return m;
  }
};

bool next_state(std::vector<uint32_t>& st, uint32_t q) {
  for (size_t i = 0; i < st.size(); ++i) {
    if (++st[i] < q) return true;
    st[i] = 0;
  }
  return false;
}

std::string serialize_query(const ServerPlan& sp) {
  // a line is a sum, i.e. a multiset of terms: serialize order-insensitively
  std::ostringstream os;
  for (const auto& line : sp) {
    std::vector<std::tuple<bool, int, int, uint32_t>> items;
    for (const auto& t : line.terms)
      items.emplace_back(t.sym.is_rand, t.sym.owner, t.sym.index, t.coeff);
    std::sort(items.begin(), items.end());
    os << "[";
    for (const auto& [ir, ow, ix, co] : items)
      os << (ir ? "R" : "W") << ow << ":" << ix << "*" << co << " ";
    os << "]";
  }
  return os.str();
}

// decoded = D * flat(answers); extracted from the scheme's own decoder, which
// is linear in the answers for fixed coins
std::optional<MatQ> decode_matrix(const Scheme& s, const Coins& coins, int target,
                                  std::string* err) {
  const auto& d = s.desc();
  PrimeField f(d.q);
  int total = d.total_downloads();
  auto shape = [&](const std::vector<uint32_t>& flat) {
    std::vector<std::vector<FieldElement>> a(d.n_servers);
    int idx = 0;
    for (int n = 0; n < d.n_servers; ++n)
      for (int i = 0; i < d.downloads[n]; ++i) a[n].push_back(FieldElement(flat[idx++], f));
    return a;
  };
  try {
    MatQ D(d.q, d.L, total);
    std::vector<uint32_t> flat(total, 0);
    auto zero_dec = s.decode(shape(flat), coins, target);
    for (const auto& v : zero_dec)
      if (v.value() != 0) {
        if (err) *err = "decoder has a nonzero affine offset";
        return std::nullopt;
      }
    for (int i = 0; i < total; ++i) {
      flat.assign(total, 0);
      flat[i] = 1;
      auto dec = s.decode(shape(flat), coins, target);
      for (int l = 0; l < d.L; ++l) D.at(l, i) = dec[l].value();
    }
    return D;
  } catch (const std::exception& e) {
    if (err) *err = e.what();
    return std::nullopt;
  }
}

// visit coins: the whole domain if it fits the cap, otherwise the identity
// coins only. Every plan is an index relabeling of the identity plan, so rank
// and span facts transfer verbatim; the fallback is noted in the result.
template <typename Fn>
void for_verification_coins(const SchemeDescriptor& d, uint64_t cap, Fn fn, std::string& note) {
  auto total = d.coins.total(cap);
  if (total) {
    enumerate_coins(d.coins, cap, [&](const Coins& c) { fn(c); });
    note = "coins=all(" + std::to_string(*total) + ")";
    return;
  }
  fn(identity_coins(d.coins));
  note = "coins=identity(relabel-equivariant)";
}

std::string jset_str(const std::vector<int>& J) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << (J[i] + 1);
  os << "}";
  return os.str();
}

constexpr uint64_t kReliabilitySymbolicCoinCap = 1ull << 12;

}  // namespace

// ---------------------------------------------------------------------------
// reliability

CheckResult check_reliability_exhaustive(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"reliability", "exhaustive", "", Verdict::Refused, "", std::nullopt};
  StateSpace ss(d);
  auto coins_total = d.coins.total(b.joint_states);
  auto states = coins_total ? pow_cap(d.q, ss.digits(), b.joint_states) : std::nullopt;
  auto joint = (coins_total && states) ? mul_cap(*coins_total, *states, b.joint_states)
                                       : std::nullopt;
  auto with_targets =
      joint ? mul_cap(*joint, static_cast<uint64_t>(d.n_messages), b.joint_states) : std::nullopt;
  if (!with_targets) {
    res.witness = "joint domain exceeds the budget";
    return res;
  }
  res.params = "states=" + std::to_string(*with_targets);
  for (int target = 0; target < d.n_messages && res.verdict != Verdict::Fail; ++target) {
    enumerate_coins(d.coins, b.joint_states, [&](const Coins& coins) {
      if (res.verdict == Verdict::Fail) return;
      Plan plan = s.make_plan(coins, target);
      CompiledPlan cp(d, ss, plan);
      std::string err;
      auto D = decode_matrix(s, coins, target, &err);
      if (!D) {
        res.verdict = Verdict::Fail;
        res.witness = "decode failed: " + err;
        return;
      }
      std::vector<uint32_t> st(ss.digits(), 0), ans;
      do {
        cp.eval(st, d.q, ans);
        for (int l = 0; l < d.L; ++l) {
          uint64_t acc = 0;
          for (size_t i = 0; i < ans.size(); ++i)
            acc += static_cast<uint64_t>(D->at(l, i)) * ans[i];
          uint32_t want = st[ss.msg_pos(d, target, l)];
          if (acc % d.q != want) {
            res.verdict = Verdict::Fail;
            std::ostringstream os;
            os << "target " << d.target_names[target] << " symbol " << (l + 1)
               << " decoded wrongly on a concrete database";
            res.witness = os.str();
            return;
          }
        }
      } while (next_state(st, d.q));
    });
  }
  if (res.verdict != Verdict::Fail) res.verdict = Verdict::Pass;
  return res;
}

CheckResult check_reliability_symbolic(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"reliability", "symbolic", "", Verdict::Pass, "", std::nullopt};
  StateSpace ss(d);
  std::string note;
  uint64_t cap = std::min(b.coin_cap, kReliabilitySymbolicCoinCap);
  for_verification_coins(
      d, cap,
      [&](const Coins& coins) {
        if (res.verdict == Verdict::Fail) return;
        for (int target = 0; target < d.n_messages; ++target) {
          Plan plan = s.make_plan(coins, target);
          CompiledPlan cp(d, ss, plan);
          if (s.generic_decoder()) {
            // the generic decoder succeeds and is correct iff every target
            // coordinate lies in the row space of the plan matrix
            MatQ m = cp.matrix(d.q, ss.digits());
            MatQ mt(d.q, m.cols(), m.rows());
            for (size_t rr = 0; rr < m.rows(); ++rr)
              for (size_t cc = 0; cc < m.cols(); ++cc) mt.at(cc, rr) = m.at(rr, cc);
            for (int l = 0; l < d.L; ++l) {
              std::vector<uint32_t> e(ss.digits(), 0);
              e[ss.msg_pos(d, target, l)] = 1;
              if (!solve(mt, e)) {
                res.verdict = Verdict::Fail;
                res.witness = "target " + d.target_names[target] +
                              " is not a linear combination of the answers";
                return;
              }
            }
          } else {
            // custom decoder: its matrix against the plan must be the
            // coordinate projection onto the target
            std::string err;
            auto D = decode_matrix(s, coins, target, &err);
            if (!D) {
              res.verdict = Verdict::Fail;
              res.witness = "decode failed for " + d.target_names[target] + ": " + err;
              return;
            }
            for (int l = 0; l < d.L; ++l)
              for (int col = 0; col < ss.digits(); ++col) {
                uint64_t acc = 0;
                for (size_t i = 0; i < cp.lines.size(); ++i) {
                  uint32_t m = 0;
                  for (const auto& [pos, c] : cp.lines[i])
                    if (pos == col) m = (m + c) % d.q;
                  acc += static_cast<uint64_t>(D->at(l, i)) * m;
                }
                uint32_t want = (col == ss.msg_pos(d, target, l)) ? 1 : 0;
                if (acc % d.q != want) {
                  res.verdict = Verdict::Fail;
                  std::ostringstream os;
                  os << "decoder x answers is not the projection for " << d.target_names[target];
                  res.witness = os.str();
                  return;
                }
              }
          }
        }
      },
      note);
  res.params = note;
  return res;
}

// ---------------------------------------------------------------------------
// user privacy

CheckResult check_user_privacy_enumeration(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"user_privacy", "enumeration", "", Verdict::Refused, "", std::nullopt};
  auto total = d.coins.total(b.coin_cap);
  if (!total) {
    res.witness = "coin domain exceeds the budget; the canonical engine is exact here";
    return res;
  }
  res.params = "coins=" + std::to_string(*total);
  using Multiset = std::map<std::string, uint64_t>;
  std::vector<std::vector<Multiset>> dist(d.n_messages, std::vector<Multiset>(d.n_servers));
  for (int target = 0; target < d.n_messages; ++target)
    enumerate_coins(d.coins, b.coin_cap, [&](const Coins& coins) {
      Plan p = s.make_plan(coins, target);
      for (int n = 0; n < d.n_servers; ++n) ++dist[target][n][serialize_query(p.per_server[n])];
    });
  for (int target = 1; target < d.n_messages; ++target)
    for (int n = 0; n < d.n_servers; ++n)
      if (dist[target][n] != dist[0][n]) {
        res.verdict = Verdict::Fail;
        std::ostringstream os;
        os << "server " << (n + 1) << " can distinguish " << d.target_names[target] << " from "
           << d.target_names[0];
        for (const auto& [qstr, cnt] : dist[target][n]) {
          auto it = dist[0][n].find(qstr);
          if (it == dist[0][n].end() || it->second != cnt) {
            os << "; query " << qstr << " seen " << cnt << " vs "
               << (it == dist[0][n].end() ? 0 : it->second) << " times";
            break;
          }
        }
        res.witness = os.str();
        return res;
      }
  res.verdict = Verdict::Pass;
  return res;
}

CheckResult check_user_privacy_canonical(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"user_privacy", "canonical", "", Verdict::Refused, "", std::nullopt};
  // enumerate the field components; the private permutations are quotiented
  // out by canonical renaming (two queries have identical distributions over
  // uniform permutations iff their canonical patterns agree)
  uint64_t field_total = 1;
  for (const auto& c : d.coins.comps)
    if (c.kind == CoinComponent::Kind::FieldSym) {
      if (field_total > b.coin_cap / c.n) {
        res.witness = "field-coin domain exceeds the budget";
        return res;
      }
      field_total *= c.n;
    }
  res.params = "field_coins=" + std::to_string(field_total);
  using Multiset = std::map<std::string, uint64_t>;
  std::vector<std::vector<Multiset>> dist(d.n_messages, std::vector<Multiset>(d.n_servers));
  for (int target = 0; target < d.n_messages; ++target) {
    Coins c = identity_coins(d.coins);
    std::function<void(size_t)> rec = [&](size_t i) {
      while (i < d.coins.comps.size() && d.coins.comps[i].kind != CoinComponent::Kind::FieldSym)
        ++i;
      if (i >= d.coins.comps.size()) {
        Plan p = s.make_plan(c, target);
        for (int n = 0; n < d.n_servers; ++n)
          ++dist[target][n][canonical_pattern(d, p.per_server[n])];
        return;
      }
      for (int v = 0; v < d.coins.comps[i].n; ++v) {
        c.v[i].field = v;
        rec(i + 1);
      }
      c.v[i].field = 0;
    };
    rec(0);
  }
  for (int target = 1; target < d.n_messages; ++target)
    for (int n = 0; n < d.n_servers; ++n)
      if (dist[target][n] != dist[0][n]) {
        res.verdict = Verdict::Fail;
        std::ostringstream os;
        os << "server " << (n + 1) << " sees different canonical query patterns for "
           << d.target_names[target] << " and " << d.target_names[0];
        res.witness = os.str();
        return res;
      }
  res.verdict = Verdict::Pass;
  return res;
}

CheckResult check_user_privacy_full_joint(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"user_privacy", "full_joint", "", Verdict::Refused, "", std::nullopt};
  StateSpace ss(d);
  auto coins_total = d.coins.total(b.joint_states);
  auto states = coins_total ? pow_cap(d.q, ss.digits(), b.joint_states) : std::nullopt;
  auto joint = (coins_total && states) ? mul_cap(*coins_total, *states, b.joint_states)
                                       : std::nullopt;
  if (!joint) {
    res.witness = "joint domain exceeds the budget";
    return res;
  }
  res.params = "states=" + std::to_string(*joint);
  // joint distribution of (Q_i, A_i, W_i, R_i) per server, compared across
  // targets: the user-privacy requirement in its unreduced form, used once to
  // validate the query-distribution reduction
  using Multiset = std::map<std::string, uint64_t>;
  std::vector<std::vector<Multiset>> dist(d.n_messages, std::vector<Multiset>(d.n_servers));
  for (int target = 0; target < d.n_messages; ++target)
    enumerate_coins(d.coins, b.joint_states, [&](const Coins& coins) {
      Plan plan = s.make_plan(coins, target);
      std::vector<std::string> qser(d.n_servers);
      for (int n = 0; n < d.n_servers; ++n) qser[n] = serialize_query(plan.per_server[n]);
      CompiledPlan cp(d, ss, plan);
      std::vector<uint32_t> st(ss.digits(), 0), ans;
      do {
        cp.eval(st, d.q, ans);
        for (int n = 0; n < d.n_servers; ++n) {
          std::ostringstream os;
          os << qser[n] << "|A:";
          for (size_t i = 0; i < ans.size(); ++i)
            if (cp.server_of[i] == n) os << ans[i] << ",";
          os << "|W:";
          for (int m : d.storage.server_messages[n])
            for (int l = 0; l < d.L; ++l) os << st[ss.msg_pos(d, m, l)] << ",";
          os << "|R:";
          for (int p : d.storage.server_pools[n])
            for (int i = 0; i < d.pool_sizes[p]; ++i) os << st[ss.pool_base[p] + i] << ",";
          ++dist[target][n][os.str()];
        }
      } while (next_state(st, d.q));
    });
  for (int target = 1; target < d.n_messages; ++target)
    for (int n = 0; n < d.n_servers; ++n)
      if (dist[target][n] != dist[0][n]) {
        res.verdict = Verdict::Fail;
        res.witness = "full joint differs at server " + std::to_string(n + 1);
        return res;
      }
  res.verdict = Verdict::Pass;
  return res;
}

// ---------------------------------------------------------------------------
// database privacy

PrivacyPartition privacy_partition(const SchemeDescriptor& d, int target,
                                   const std::vector<int>& J) {
  PrivacyPartition pp;
  std::set<int> jset(J.begin(), J.end());
  int kb = d.msg_bundle[target];
  if (d.mode == RandMode::GraphReplicated) {
    bool multigraph = d.n_messages != d.n_bundles;
    for (int m = 0; m < d.n_messages; ++m) {
      if (m == target) pp.unknown_msgs.push_back(m);
      else if (jset.count(d.msg_bundle[m])) pp.hidden_msgs.push_back(m);
      else if (multigraph && d.msg_bundle[m] == kb) pp.hidden_msgs.push_back(m);
      else pp.given_msgs.push_back(m);
    }
    for (int p = 0; p < d.n_bundles; ++p) {
      if (jset.count(p)) pp.unknown_pools.push_back(p);
      else if (multigraph && p == kb) pp.unknown_pools.push_back(p);
      else pp.given_pools.push_back(p);
    }
  } else {
    for (int m = 0; m < d.n_messages; ++m) {
      if (jset.count(m)) pp.hidden_msgs.push_back(m);
      else pp.unknown_msgs.push_back(m);
    }
    for (size_t p = 0; p < d.pool_sizes.size(); ++p)
      pp.unknown_pools.push_back(static_cast<int>(p));
  }
  return pp;
}

std::vector<std::vector<int>> db_privacy_j_sets(const SchemeDescriptor& d, int target) {
  bool gr = d.mode == RandMode::GraphReplicated;
  bool multigraph = d.n_messages != d.n_bundles;
  int domain = gr ? d.n_bundles : d.n_messages;
  int self = gr ? d.msg_bundle[target] : target;
  std::vector<int> others;
  for (int v = 0; v < domain; ++v)
    if (v != self) others.push_back(v);
  std::vector<std::vector<int>> out;
  if (static_cast<int>(others.size()) <= 6) {
    int n = static_cast<int>(others.size());
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> J;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) J.push_back(others[i]);
      if (J.empty() && !(gr && multigraph)) continue;  // empty J only matters with co-bundles
      out.push_back(std::move(J));
    }
  } else {
    for (int v : others) out.push_back({v});
    out.push_back(others);  // the full complement, the extremal case
  }
  return out;
}

CheckResult check_db_privacy_exhaustive(const Scheme& s, int target, const std::vector<int>& J,
                                        const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"db_privacy", "exhaustive",
                  "k=" + d.target_names[target] + " J=" + jset_str(J), Verdict::Refused, "",
                  std::nullopt};
  StateSpace ss(d);
  auto coins_total = d.coins.total(b.joint_states);
  auto states = coins_total ? pow_cap(d.q, ss.digits(), b.joint_states) : std::nullopt;
  auto joint = (coins_total && states) ? mul_cap(*coins_total, *states, b.joint_states)
                                       : std::nullopt;
  if (!joint) {
    res.witness = "joint domain exceeds the budget; use the linear engine";
    return res;
  }
  res.params += " states=" + std::to_string(*joint);

  PrivacyPartition pp = privacy_partition(d, target, J);
  std::vector<int> hidden_pos, given_pos;
  for (int m : pp.hidden_msgs)
    for (int l = 0; l < d.L; ++l) hidden_pos.push_back(ss.msg_pos(d, m, l));
  for (int m : pp.given_msgs)
    for (int l = 0; l < d.L; ++l) given_pos.push_back(ss.msg_pos(d, m, l));
  for (int p : pp.given_pools)
    for (int i = 0; i < d.pool_sizes[p]; ++i) given_pos.push_back(ss.pool_base[p] + i);
  if (hidden_pos.empty()) {
    res.verdict = Verdict::Pass;
    res.mi = Rat(0);
    return res;
  }

  // integer-coded counting: view = (answers, given symbols), both per coin
  int view_digits = d.total_downloads() + static_cast<int>(given_pos.size());
  auto h_space = pow_cap(d.q, static_cast<int>(hidden_pos.size()), UINT64_MAX >> 1);
  auto v_space = pow_cap(d.q, view_digits, UINT64_MAX >> 1);
  if (!h_space || !v_space || !mul_cap(*v_space, *h_space, UINT64_MAX >> 1)) {
    res.witness = "view too wide for integer coding";
    return res;
  }

  bool fail = false;
  bool mi_exact = true;
  Rat mi_sum(0);
  uint64_t n_coins = 0;
  std::string witness;
  enumerate_coins(d.coins, b.joint_states, [&](const Coins& coins) {
    ++n_coins;
    Plan plan = s.make_plan(coins, target);
    CompiledPlan cp(d, ss, plan);
    std::unordered_map<uint64_t, uint64_t> n_vh, n_v, n_h;
    std::vector<uint32_t> st(ss.digits(), 0), ans;
    uint64_t total = 0;
    do {
      ++total;
      cp.eval(st, d.q, ans);
      uint64_t v = 0, h = 0;
      for (uint32_t a : ans) v = v * d.q + a;
      for (int p : given_pos) v = v * d.q + st[p];
      for (int p : hidden_pos) h = h * d.q + st[p];
      ++n_vh[v * *h_space + h];
      ++n_v[v];
      ++n_h[h];
    } while (next_state(st, d.q));
    // exact q-ary mutual information for this coin value
    long long mi_num = 0;
    for (const auto& [key, cnt] : n_vh) {
      uint64_t nv = n_v.at(key / *h_space), nh = n_h.at(key % *h_space);
      __int128 num = static_cast<__int128>(cnt) * total;
      __int128 den = static_cast<__int128>(nv) * nh;
      if (num != den && !fail) {
        fail = true;
        witness = "view distribution depends on the hidden messages";
      }
      __int128 ga = num, gb = den;
      while (gb) {
        __int128 t = ga % gb;
        ga = gb;
        gb = t;
      }
      num /= ga;
      den /= ga;
      int e = 0;
      if (den == 1) {
        while (num > 1 && num % d.q == 0) num /= d.q, ++e;
        if (num != 1) mi_exact = false;
      } else if (num == 1) {
        while (den > 1 && den % d.q == 0) den /= d.q, --e;
        if (den != 1) mi_exact = false;
      } else {
        mi_exact = false;
      }
      mi_num += static_cast<long long>(cnt) * e;
    }
    mi_sum = mi_sum + Rat(mi_num, static_cast<long long>(total));
  });
  res.verdict = fail ? Verdict::Fail : Verdict::Pass;
  res.witness = witness;
  if (mi_exact) res.mi = mi_sum / Rat(static_cast<long long>(n_coins));
  return res;
}

CheckResult check_db_privacy_linear(const Scheme& s, int target, const std::vector<int>& J,
                                    const Budget& b) {
  const auto& d = s.desc();
  CheckResult res{"db_privacy", "linear", "k=" + d.target_names[target] + " J=" + jset_str(J),
                  Verdict::Pass, "", std::nullopt};
  StateSpace ss(d);
  PrivacyPartition pp = privacy_partition(d, target, J);
  std::vector<int> col_kind(ss.digits(), 0);  // 0 given, 1 unknown, 2 hidden
  std::vector<int> col_index(ss.digits(), -1);
  int n_unknown = 0, n_hidden = 0;
  for (int m : pp.unknown_msgs)
    for (int l = 0; l < d.L; ++l) {
      col_kind[ss.msg_pos(d, m, l)] = 1;
      col_index[ss.msg_pos(d, m, l)] = n_unknown++;
    }
  for (int p : pp.unknown_pools)
    for (int i = 0; i < d.pool_sizes[p]; ++i) {
      col_kind[ss.pool_base[p] + i] = 1;
      col_index[ss.pool_base[p] + i] = n_unknown++;
    }
  for (int m : pp.hidden_msgs)
    for (int l = 0; l < d.L; ++l) {
      col_kind[ss.msg_pos(d, m, l)] = 2;
      col_index[ss.msg_pos(d, m, l)] = n_hidden++;
    }
  if (n_hidden == 0) return res;

  std::string note;
  for_verification_coins(
      d, b.coin_cap,
      [&](const Coins& coins) {
        if (res.verdict == Verdict::Fail) return;
        Plan plan = s.make_plan(coins, target);
        CompiledPlan cp(d, ss, plan);
        size_t rows = cp.lines.size();
        MatQ base(d.q, rows, n_unknown), sub(d.q, rows, n_hidden);
        for (size_t rr = 0; rr < rows; ++rr)
          for (const auto& [pos, c] : cp.lines[rr]) {
            if (col_kind[pos] == 1) {
              auto& cell = base.at(rr, col_index[pos]);
              cell = (cell + c) % d.q;
            } else if (col_kind[pos] == 2) {
              auto& cell = sub.at(rr, col_index[pos]);
              cell = (cell + c) % d.q;
            }
            // given symbols are known constants and drop out
          }
        std::vector<uint32_t> witness;
        if (!cols_contained(base, sub, &witness)) {
          res.verdict = Verdict::Fail;
          std::ostringstream os;
          os << "hidden columns escape the one-time-pad span; leaking combination of answers:";
          for (size_t i = 0; i < witness.size(); ++i)
            if (witness[i]) os << " +" << witness[i] << "*line" << (i + 1);
          res.witness = os.str();
        }
      },
      note);
  res.params += " " + note;
  return res;
}

// ---------------------------------------------------------------------------

bool VerificationReport::all_passed() const {
  bool any_fail = false;
  std::map<std::string, bool> prop_pass;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::Fail) any_fail = true;
    if (c.verdict == Verdict::Pass) prop_pass[c.check] = true;
  }
  if (any_fail) return false;
  for (const char* prop : {"reliability", "user_privacy", "db_privacy"})
    if (!prop_pass.count(prop)) return false;
  return true;
}

int VerificationReport::failures() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) ++n;
  return n;
}

int VerificationReport::refusals() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.verdict == Verdict::Refused) ++n;
  return n;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << "check=" << c.check << " engine=" << c.engine;
    if (!c.params.empty()) os << " " << c.params;
    os << " verdict="
       << (c.verdict == Verdict::Pass ? "pass" : c.verdict == Verdict::Fail ? "FAIL" : "refused");
    if (c.mi) os << " mi=" << c.mi->str();
    if (!c.witness.empty()) os << " note=\"" << c.witness << "\"";
    os << "\n";
  }
  os << "scheme=" << scheme << " overall=" << (all_passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

VerificationReport verify_all(const Scheme& s, const Budget& b) {
  const auto& d = s.desc();
  VerificationReport rep;
  rep.scheme = d.name;
  rep.q = d.q;

  rep.checks.push_back(check_reliability_symbolic(s, b));
  rep.checks.push_back(check_reliability_exhaustive(s, b));
  rep.checks.push_back(check_user_privacy_canonical(s, b));
  rep.checks.push_back(check_user_privacy_enumeration(s, b));

  struct Task {
    int target;
    std::vector<int> J;
  };
  std::vector<Task> tasks;
  for (int target = 0; target < d.n_messages; ++target)
    for (auto& J : db_privacy_j_sets(d, target)) tasks.push_back({target, J});

  std::vector<std::pair<CheckResult, CheckResult>> db_results(tasks.size());
  auto worker = [&](size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) {
      db_results[i].first = check_db_privacy_linear(s, tasks[i].target, tasks[i].J, b);
      db_results[i].second = check_db_privacy_exhaustive(s, tasks[i].target, tasks[i].J, b);
    }
  };
  int jobs = std::max(1, b.jobs);
  if (jobs == 1 || tasks.size() < 2) {
    worker(0, tasks.size());
  } else {
    std::vector<std::future<void>> fut;
    size_t chunk = (tasks.size() + jobs - 1) / jobs;
    for (size_t from = 0; from < tasks.size(); from += chunk)
      fut.push_back(
          std::async(std::launch::async, worker, from, std::min(tasks.size(), from + chunk)));
    for (auto& f : fut) f.get();
  }

  int agree = 0, both = 0;
  for (auto& [lin, exh] : db_results) {
    rep.checks.push_back(lin);
    rep.checks.push_back(exh);
    if (exh.verdict != Verdict::Refused) {
      ++both;
      if ((exh.verdict == Verdict::Pass) == (lin.verdict == Verdict::Pass)) ++agree;
    }
  }
  if (both > 0) {
    CheckResult cr{"engine_agreement", "db_privacy", "", Verdict::Pass, "", std::nullopt};
    cr.params = "instances=" + std::to_string(both);
    if (agree != both) {
      cr.verdict = Verdict::Fail;
      cr.witness = "the exhaustive and linear engines disagree";
    }
    rep.checks.push_back(cr);
  }
  return rep;
}

}  // namespace spir
