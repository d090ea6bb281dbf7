#include "spir/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace spir {

std::string symbol_name(const SchemeDescriptor& d, const SymbolId& sym) {
  std::ostringstream os;
  if (sym.is_rand) {
    if (d.pool_sizes.size() == 1 && d.mode == RandMode::FullyReplicated)
      os << "s" << (sym.index + 1);
    else
      os << "s" << (sym.owner + 1) << "_" << (sym.index + 1);
  } else {
    os << static_cast<char>('a' + sym.owner) << (sym.index + 1);
  }
  return os.str();
}

static std::vector<Term> sorted_terms(const Line& line) {
  std::vector<Term> ts = line.terms;
  std::stable_sort(ts.begin(), ts.end(),
                   [](const Term& x, const Term& y) { return x.sym < y.sym; });
  return ts;
}

std::string render_line(const SchemeDescriptor& d, const Line& line) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : sorted_terms(line)) {
    if (!first) os << "+";
    first = false;
    if (t.coeff != 1) os << t.coeff << "*";
    os << symbol_name(d, t.sym);
  }
  if (first) os << "0";
  return os.str();
}

std::vector<std::vector<std::string>> render_rows(const SchemeDescriptor& d, const Plan& plan) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& sp : plan.per_server) {
    std::vector<std::string> r;
    for (const auto& line : sp) r.push_back(render_line(d, line));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_plan(const SchemeDescriptor& d, const Plan& plan) {
  std::ostringstream os;
  auto rows = render_rows(d, plan);
  for (size_t n = 0; n < rows.size(); ++n) {
    for (const auto& l : rows[n]) os << "server " << (n + 1) << ": " << l << "\n";
  }
  return os.str();
}

namespace {

struct Renamer {
  std::map<std::pair<bool, int>, std::map<int, int>> seen;

  int canon(const SymbolId& s) {
    auto& m = seen[{s.is_rand, s.owner}];
    auto it = m.find(s.index);
    if (it != m.end()) return it->second;
    int next = static_cast<int>(m.size());
    m.emplace(s.index, next);
    return next;
  }
};

bool class_permuted(const CoinSpace& space, bool is_rand, int owner) {
  for (const auto& c : space.comps)
    if (c.kind == CoinComponent::Kind::Perm && c.cls.is_rand == is_rand && c.cls.owner == owner)
      return true;
  return false;
}

}  // namespace

std::string canonical_pattern(const SchemeDescriptor& d, const ServerPlan& sp) {
  Renamer rn;
  std::ostringstream os;
  for (const auto& line : sp) {
    // first pass in construction order fixes the renaming, independent of the
    // applied permutation; the line is then emitted sorted (a sum is a set)
    std::vector<std::tuple<bool, int, int, uint32_t>> items;
    for (const auto& t : line.terms) {
      int idx = class_permuted(d.coins, t.sym.is_rand, t.sym.owner) ? rn.canon(t.sym) : t.sym.index;
      items.emplace_back(t.sym.is_rand, t.sym.owner, idx, t.coeff);
    }
    std::sort(items.begin(), items.end());
    os << "[";
    for (const auto& [ir, ow, ix, co] : items)
      os << (ir ? "R" : "W") << ow << ":" << ix << "*" << co << " ";
    os << "]";
  }
  return os.str();
}

std::string canonical_table(const SchemeDescriptor& d, const Plan& plan) {
  // The renaming scan must not depend on the source's index numbering, so
  // within a line terms are visited by symbol class: previously seen indices
  // first (in seen order), then new ones. Our tables never put two new
  // indices of one class in the same line, which keeps this unambiguous.
  Renamer rn;
  Plan out = plan;
  for (auto& sp : out.per_server)
    for (auto& line : sp) {
      std::vector<Term*> ts;
      for (auto& t : line.terms) ts.push_back(&t);
      std::stable_sort(ts.begin(), ts.end(), [&](const Term* x, const Term* y) {
        auto kx = std::make_tuple(x->sym.is_rand, x->sym.owner,
                                  rn.seen[{x->sym.is_rand, x->sym.owner}].count(x->sym.index) == 0);
        auto ky = std::make_tuple(y->sym.is_rand, y->sym.owner,
                                  rn.seen[{y->sym.is_rand, y->sym.owner}].count(y->sym.index) == 0);
        return kx < ky;
      });
      for (auto* t : ts) t->sym.index = rn.canon(t->sym);
    }
  return render_plan(d, out);
}

}  // namespace spir
