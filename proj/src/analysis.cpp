#include "spir/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spir {

GrCapacity gr_capacity(const GraphSpec& g) {
  GrCapacity c;
  c.lower = Rat(1, g.n_servers());
  bool path = true;
  // a path: two vertices of degree 1, the rest of degree 2, connected
  int ones = 0;
  for (int v = 1; v <= g.n_servers(); ++v) {
    int deg = g.degree(v);
    if (deg == 1) ++ones;
    else if (deg != 2) path = false;
  }
  path = path && ones == 2;
  c.exact = path || g.regular_degree().has_value();
  c.rho_star = Rat(1);
  return c;
}

FrAchievable fr_rate_from_srp(int lp, int dp, int n, int k) {
  if (lp % 2 != 0) throw std::invalid_argument("the base scheme length must be even");
  long long ell = std::lcm(lp / 2, n - 1);
  long long x = ell / (lp / 2);
  long long y = ell / (n - 1);
  FrAchievable a;
  a.rate = Rat(lp * x, dp * x + n * y);
  a.rho_total = Rat(k - 1, 2) + Rat(n * y, lp * x);
  return a;
}

FrBounds fr_bounds(GraphFamily family, int n) {
  if (n < 3) throw std::invalid_argument("bounds need N >= 3");
  FrBounds b;
  if (family == GraphFamily::Path) {
    b.achievable = Rat(2) / (Rat(n) + Rat(n, n - 1));
    b.upper = Rat(2) / (Rat(n) + Rat(2, n - 1));
    b.rho_total_achievable = Rat(n - 2, 2) + Rat(n, 2 * (n - 1));
    b.rho_total_lower = Rat(n - 2, 2) + Rat(1, n - 1);
  } else if (family == GraphFamily::Cycle) {
    b.achievable = Rat(2) / (Rat(n + 1) + Rat(n, n - 1));
    b.upper = Rat(2) / (Rat(n + 1) + Rat(1, n - 1));
    b.rho_total_achievable = Rat(n - 1, 2) + Rat(n, 2 * (n - 1));
    b.rho_total_lower = Rat(n - 1, 2) + Rat(1, 2 * (n - 1));
  } else {
    throw std::invalid_argument("fully-replicated bounds cover paths and cycles");
  }
  return b;
}

FrAchievable fr_capacity_p3() { return {Rat(1, 2), Rat(1)}; }

StarFr star_fr_rate(int n) {
  if (n < 3) throw std::invalid_argument("star rate needs N >= 3");
  StarFr best{0, Rat(0), Rat(0)};
  for (int t = 2; t <= n - 1; ++t) {
    long long lp = binomial(n - 2, t - 1) + binomial(n - 3, t - 2);
    long long dn = n * binomial(n - 3, t - 2) + binomial(n - 1, t);
    Rat rate(lp, dn);
    if (best.best_t == 0 || best.rate < rate) {
      best.best_t = t;
      best.rate = rate;
      long long hr = binomial(n - 3, t - 2) + (t - 1) * binomial(n - 1, t);
      best.rho_total = Rat(hr, lp);
    }
  }
  return best;
}

namespace {

long long edges_of(GraphFamily family, int n) {
  switch (family) {
    case GraphFamily::Path: return n - 1;
    case GraphFamily::Cycle: return n;
    case GraphFamily::Star: return n - 1;
    case GraphFamily::Complete: return static_cast<long long>(n) * (n - 1) / 2;
    case GraphFamily::Custom: break;
  }
  throw std::invalid_argument("unknown family");
}

std::string family_name(GraphFamily family) {
  switch (family) {
    case GraphFamily::Path: return "path";
    case GraphFamily::Cycle: return "cycle";
    case GraphFamily::Star: return "star";
    case GraphFamily::Complete: return "complete";
    case GraphFamily::Custom: break;
  }
  return "custom";
}

}  // namespace

RateSummary multigraph_rates(GraphFamily family, int n, int r, RandMode setting) {
  if (r < 1) throw std::invalid_argument("multiplicity must be >= 1");
  RateSummary s;
  s.family = family_name(family);
  s.n = n;
  s.r = r;
  s.setting = setting;
  if (setting == RandMode::GraphReplicated) {
    // the graph-replicated metrics do not depend on the multiplicity
    s.achievable = Rat(1, n);
    s.rho = Rat(1);
    s.rho_total = Rat(edges_of(family, n));
    bool regular = family == GraphFamily::Cycle || family == GraphFamily::Complete ||
                   (family == GraphFamily::Path && n == 2) || (family == GraphFamily::Star && n == 3);
    bool path_like = family == GraphFamily::Path || (family == GraphFamily::Star && n == 3);
    s.exact = regular || path_like;
    if (s.exact) s.upper = s.achievable;
    return s;
  }
  // fully-replicated randomness
  Rat pow21r(1, 1ll << (r - 1));  // 2^(1-r)
  Rat stretch = Rat(2) - pow21r;  // 2 - 2^(1-r)
  if (family == GraphFamily::Path || (family == GraphFamily::Star && n == 3)) {
    s.achievable = Rat(2) / (Rat(n) * stretch + Rat(n, n - 1) * pow21r);
    s.rho_total = s.achievable.inv() - Rat(1);
    s.upper = Rat(2) / (Rat(n) * stretch + Rat(n, n - 1) * pow21r -
                        (Rat(2) - Rat(n, n - 1)) * stretch);
    if (r == 1) {
      // the r >= 2 converse is weaker than the simple-graph one at r = 1
      s.rho_total_lower = fr_bounds(GraphFamily::Path, n).rho_total_lower;
    } else {
      s.rho_total_lower =
          Rat(1, n - 1) + Rat(n * (n - 2), 2 * (n - 1)) * stretch - Rat(3, 2) * stretch;
    }
  } else if (family == GraphFamily::Cycle) {
    s.achievable = Rat(2) / (Rat(n + 1) * stretch + Rat(n, n - 1) * pow21r);
    s.rho_total = s.achievable.inv() - Rat(1);
    s.upper = Rat(2) / (Rat(n + 1) * stretch + Rat(n, n - 1) * pow21r - stretch);
    if (r == 1) {
      s.rho_total_lower = fr_bounds(GraphFamily::Cycle, n).rho_total_lower;
    } else {
      s.rho_total_lower =
          Rat(1, n - 1) + Rat(n * n - n - 1, 2 * (n - 1)) * stretch - Rat(1, 2) * stretch;
    }
  } else if (family == GraphFamily::Star && r == 1) {
    auto sf = star_fr_rate(n);
    s.achievable = sf.rate;
    s.rho_total = sf.rho_total;
    s.exact = false;
  } else {
    throw std::invalid_argument(
        "no closed fully-replicated formulas for this family/multiplicity");
  }
  return s;
}

std::string RateSummary::to_text() const {
  std::ostringstream os;
  os << family << " N=" << n << " r=" << r
     << " setting=" << (setting == RandMode::GraphReplicated ? "gr" : "fr")
     << " achievable=" << achievable.str();
  if (upper) os << " upper=" << upper->str();
  os << (exact ? " (capacity)" : "");
  if (rho) os << " rho=" << rho->str();
  os << " rho_total=" << rho_total.str();
  if (rho_total_lower) os << " rho_total>=" << rho_total_lower->str();
  return os.str();
}

std::string RateSummary::to_tsv() const {
  std::ostringstream os;
  os << family << "\t" << n << "\t" << r << "\t"
     << (setting == RandMode::GraphReplicated ? "gr" : "fr") << "\t" << achievable.str() << "\t"
     << (upper ? upper->str() : "-") << "\t" << (exact ? "exact" : "bound") << "\t"
     << (rho ? rho->str() : "-") << "\t" << rho_total.str() << "\t"
     << (rho_total_lower ? rho_total_lower->str() : "-");
  return os.str();
}

std::string table1(bool tsv) {
  struct Row {
    const char* graph;
    const char* pir;
    const char* general;
    const char* derived;
  };
  const Row rows[] = {
      {"path P_N", "2/N", "1/N", "1/N"},
      {"cyclic C_N", "2/(N+1)", "1/N", "1/(N+1)"},
      {"complete K_N", ">=(4/3-o(1))/N", "1/N", ">=(2/3-o(1))/N"},
      {"star S_N", "2/N", "1/N", "1/N"},
  };
  std::ostringstream os;
  if (tsv) {
    os << "graph\tpir_scheme\tgeneral_spir\tpir_derived_spir\n";
    for (const auto& r : rows)
      os << r.graph << "\t" << r.pir << "\t" << r.general << "\t" << r.derived << "\n";
  } else {
    os << "graph          PIR scheme       general SPIR   PIR-derived SPIR\n";
    auto pad = [](std::string s, size_t w) {
      s.resize(std::max(s.size(), w), ' ');
      return s;
    };
    for (const auto& r : rows)
      os << pad(r.graph, 15) << pad(r.pir, 17) << pad(r.general, 15) << r.derived << "\n";
  }
  return os.str();
}

}  // namespace spir
