#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spir/analysis.hpp"

using namespace spir;

TEST_CASE("graph-replicated capacity statements") {
  for (int n = 3; n <= 8; ++n) {
    auto c = gr_capacity(cycle_graph(n));
    CHECK(c.lower == Rat(1, n));
    CHECK(c.exact);
    CHECK(c.rho_star == Rat(1));
    auto p = gr_capacity(path_graph(n));
    CHECK(p.lower == Rat(1, n));
    CHECK(p.exact);
  }
  auto m = gr_capacity(m_graph());
  CHECK(m.lower == Rat(1, 4));
  CHECK_FALSE(m.exact);  // neither a path nor regular: only the lower bound
  CHECK(gr_capacity(complete_graph(5)).exact);
  CHECK(gr_capacity(star_graph(4)).exact == false);
}

TEST_CASE("lcm-conversion metrics reproduce the worked conversions") {
  auto a = fr_rate_from_srp(2, 3, 3, 2);  // path base
  CHECK(a.rate == Rat(4, 9));
  CHECK(a.rho_total == Rat(5, 4));
  auto b = fr_rate_from_srp(6, 12, 3, 3);  // cycle base
  CHECK(b.rate == Rat(4, 11));
  CHECK(b.rho_total == Rat(7, 4));
  auto c = fr_rate_from_srp(2, 4, 4, 3);  // star base: attains the path metrics
  CHECK(c.rate == Rat(3, 8));
  CHECK(c.rho_total == Rat(5, 3));
  for (int n = 3; n <= 10; ++n) {
    auto s = fr_rate_from_srp(2, n, n, n - 1);
    CHECK(s.rate == Rat(2) / (Rat(n) + Rat(n, n - 1)));
  }
  CHECK_THROWS_AS(fr_rate_from_srp(3, 5, 3, 2), std::invalid_argument);  // odd L'
}

TEST_CASE("path and cycle bounds") {
  auto p3 = fr_bounds(GraphFamily::Path, 3);
  CHECK(p3.achievable == Rat(4, 9));
  CHECK(p3.upper == Rat(1, 2));
  CHECK(p3.rho_total_achievable == Rat(5, 4));
  CHECK(p3.rho_total_lower == Rat(1));
  auto c3 = fr_bounds(GraphFamily::Cycle, 3);
  CHECK(c3.upper == Rat(4, 9));  // 2/(4 + 1/2)
  CHECK(c3.achievable == Rat(4, 11));
  CHECK_THROWS_AS(fr_bounds(GraphFamily::Star, 4), std::invalid_argument);
}

TEST_CASE("bounds sandwich for 3 <= N <= 12") {
  for (int n = 3; n <= 12; ++n)
    for (auto fam : {GraphFamily::Path, GraphFamily::Cycle}) {
      auto b = fr_bounds(fam, n);
      CHECK(b.achievable <= b.upper);
      CHECK(b.rho_total_lower <= b.rho_total_achievable);
      // strictly below the PIR capacity, strictly above 1/N, strictly apart
      Rat pir = fam == GraphFamily::Path ? Rat(2, n) : Rat(2, n + 1);
      CHECK(b.upper < pir);
      CHECK(Rat(1, n) < b.achievable);
      CHECK(b.achievable < b.upper);
    }
}

TEST_CASE("rate and randomness identities for 3 <= N <= 12") {
  for (int n = 3; n <= 12; ++n) {
    auto p = fr_bounds(GraphFamily::Path, n);
    CHECK(p.achievable.inv() == Rat(2, n).inv() + Rat(n, 2 * (n - 1)));
    CHECK(p.rho_total_achievable == p.achievable.inv() - Rat(1));
    auto c = fr_bounds(GraphFamily::Cycle, n);
    CHECK(c.achievable.inv() == Rat(2, n + 1).inv() + Rat(n, 2 * (n - 1)));
    CHECK(c.rho_total_achievable == c.achievable.inv() - Rat(1));
  }
}

TEST_CASE("the settled path-3 point") {
  auto p = fr_capacity_p3();
  CHECK(p.rate == Rat(1, 2));
  CHECK(p.rho_total == Rat(1));
  CHECK(fr_bounds(GraphFamily::Path, 3).achievable < p.rate);
}

TEST_CASE("star rates maximize over t") {
  auto s4 = star_fr_rate(4);
  CHECK(s4.best_t == 2);
  CHECK(s4.rate == Rat(3, 7));
  CHECK(s4.rho_total == Rat(4, 3));
  auto s3 = star_fr_rate(3);
  CHECK(s3.rate == Rat(1, 2));
  CHECK(s3.rho_total == Rat(1));
  // the t = 2 instance is a lower bound on the maximum
  for (int n = 4; n <= 8; ++n) {
    auto s = star_fr_rate(n);
    CHECK(Rat(2 * (n - 1), 2 * n + (n - 1) * (n - 2)) <= s.rate);
    CHECK(Rat(2) / (Rat(n) + Rat(n, n - 1)) < s.rate);  // beats the lcm algorithm
  }
  // N=6 at t=2: 10/32 = 5/16 is achievable
  CHECK(Rat(2 * 5, 12 + 5 * 4) == Rat(5, 16));
  CHECK(Rat(5, 16) <= star_fr_rate(6).rate);
}

TEST_CASE("multigraph summaries") {
  // graph-replicated outputs are invariant in r
  for (auto fam : {GraphFamily::Path, GraphFamily::Cycle, GraphFamily::Star}) {
    auto r1 = multigraph_rates(fam, 4, 1, RandMode::GraphReplicated);
    for (int r = 2; r <= 3; ++r) {
      auto rr = multigraph_rates(fam, 4, r, RandMode::GraphReplicated);
      CHECK(rr.achievable == r1.achievable);
      CHECK(rr.rho == r1.rho);
      CHECK(rr.rho_total == r1.rho_total);
      CHECK(rr.exact == r1.exact);
    }
  }
  // fully-replicated path at N=3, r=2
  auto f = multigraph_rates(GraphFamily::Path, 3, 2, RandMode::FullyReplicated);
  CHECK(f.achievable == Rat(8, 21));
  CHECK(f.rho_total == Rat(21, 8) - Rat(1));
  // r = 1 collapses to the simple-graph formulas
  for (int n = 3; n <= 12; ++n)
    for (auto fam : {GraphFamily::Path, GraphFamily::Cycle}) {
      auto r1 = multigraph_rates(fam, n, 1, RandMode::FullyReplicated);
      auto b = fr_bounds(fam, n);
      CHECK(r1.achievable == b.achievable);
      CHECK(*r1.upper == b.upper);
      CHECK(r1.rho_total == b.rho_total_achievable);
      CHECK(*r1.rho_total_lower == b.rho_total_lower);
    }
  // rates decrease with r in the fully-replicated setting
  for (auto fam : {GraphFamily::Path, GraphFamily::Cycle}) {
    Rat prev = multigraph_rates(fam, 4, 1, RandMode::FullyReplicated).achievable;
    for (int r = 2; r <= 4; ++r) {
      Rat cur = multigraph_rates(fam, 4, r, RandMode::FullyReplicated).achievable;
      CHECK(cur < prev);
      prev = cur;
    }
  }
  // bounds sandwich holds for r in {1,2,3}
  for (int r = 1; r <= 3; ++r)
    for (int n = 3; n <= 12; ++n)
      for (auto fam : {GraphFamily::Path, GraphFamily::Cycle}) {
        auto s = multigraph_rates(fam, n, r, RandMode::FullyReplicated);
        REQUIRE(s.upper.has_value());
        CHECK(s.achievable <= *s.upper);
      }
}

TEST_CASE("table 1 rows") {
  auto text = table1(false);
  CHECK(text.find("2/N") != std::string::npos);
  CHECK(text.find("2/(N+1)") != std::string::npos);
  CHECK(text.find("1/(N+1)") != std::string::npos);
  CHECK(text.find(">=(2/3-o(1))/N") != std::string::npos);
  CHECK(text.find(">=(4/3-o(1))/N") != std::string::npos);
  auto tsv = table1(true);
  CHECK(tsv.find("path P_N\t2/N\t1/N\t1/N") != std::string::npos);
  CHECK(tsv.find("cyclic C_N\t2/(N+1)\t1/N\t1/(N+1)") != std::string::npos);
  CHECK(tsv.find("star S_N\t2/N\t1/N\t1/N") != std::string::npos);
}

TEST_CASE("capacity sandwich on emitted rows") {
  // C(G) < C_FR(G) < C_PIR(G) wherever all three are known
  for (int n = 3; n <= 12; ++n) {
    Rat c_gr = Rat(1, n);
    auto p = fr_bounds(GraphFamily::Path, n);
    CHECK(c_gr < p.achievable);
    CHECK(p.upper < Rat(2, n));
    auto c = fr_bounds(GraphFamily::Cycle, n);
    CHECK(c_gr < c.achievable);
    CHECK(c.upper < Rat(2, n + 1));
  }
}
