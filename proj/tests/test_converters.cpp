#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "spir/converters.hpp"
#include "spir/render.hpp"

using namespace spir;

namespace {

// parse "a4+b4+c1+d4+s4+s7" into a Line (s -> the single fully-replicated pool)
Line parse_line(const std::string& text) {
  Line l;
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, '+')) {
    REQUIRE(!term.empty());
    if (term[0] == 's')
      l.terms.push_back({SymbolId{true, 0, std::stoi(term.substr(1)) - 1}, 1});
    else
      l.terms.push_back({SymbolId{false, term[0] - 'a', std::stoi(term.substr(1)) - 1}, 1});
  }
  return l;
}

Plan parse_plan(const std::vector<std::vector<std::string>>& rows) {
  Plan p;
  for (const auto& server : rows) {
    ServerPlan sp;
    for (const auto& line : server) sp.push_back(parse_line(line));
    p.per_server.push_back(std::move(sp));
  }
  return p;
}

// Randomness-assignment invariants of the fully-replicated conversions: a
// directly downloaded pad only rides on lines that carry a desired symbol
// (it cancels that symbol's mask), and a pad shared between several sum
// lines masks one common interference symbol, never two distinct ones.
void check_pad_uniqueness_fr(const TableScheme& s) {
  const auto& d = s.desc();
  for (int k = 0; k < d.n_messages; ++k) {
    const Plan& p = s.tmpl(k);
    std::set<int> direct;
    for (int n = 0; n < d.n_servers; ++n)
      for (const auto& line : p.per_server[n])
        if (line.terms.size() == 1 && line.terms[0].sym.is_rand)
          direct.insert(line.terms[0].sym.index);
    std::map<int, std::vector<std::set<std::pair<int, int>>>> pad_lines;
    for (int n = 0; n < d.n_servers; ++n)
      for (const auto& line : p.per_server[n]) {
        if (line.terms.size() == 1 && line.terms[0].sym.is_rand) continue;
        std::set<std::pair<int, int>> interference;
        bool has_desired = false;
        for (const auto& t : line.terms)
          if (!t.sym.is_rand) {
            if (t.sym.owner == k) has_desired = true;
            else interference.insert({t.sym.owner, t.sym.index});
          }
        for (const auto& t : line.terms)
          if (t.sym.is_rand) {
            if (direct.count(t.sym.index)) {
              CHECK(has_desired);  // direct pads only cancel desired masks
            } else {
              pad_lines[t.sym.index].push_back(interference);
            }
          }
      }
    for (const auto& [pad, lines] : pad_lines) {
      if (lines.size() < 2) continue;
      std::set<std::pair<int, int>> common = lines[0];
      for (const auto& l : lines) {
        std::set<std::pair<int, int>> next;
        for (const auto& m : l)
          if (common.count(m)) next.insert(m);
        common = next;
      }
      CHECK_FALSE(common.empty());
    }
  }
}

}  // namespace

TEST_CASE("psi map properties") {
  for (int L = 2; L <= 64; L += 2) {
    PsiMap psi(L);
    for (int m = 0; m < L; ++m) {
      CHECK(psi(psi(m)) == m);  // involution
      CHECK(psi(m) != m);       // no fixed points
    }
    for (int m = 0; m < L / 2; ++m) CHECK(psi(m) >= L / 2);
  }
  CHECK_THROWS_AS(PsiMap(3), std::invalid_argument);
}

TEST_CASE("graph-replicated conversion reproduces the reference tables") {
  auto g = gr_from_pir(pir_p3(), 2);
  CHECK(rate_of(*g) == Rat(1, 3));
  CHECK(*randomness_ratios(*g).rho == Rat(1));
  CHECK(render_plan(g->desc(), g->tmpl(0)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_2\n"
        "server 2: s1_2+s2_2\n"
        "server 2: a2+b2+s1_1+s2_1\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_1\n");
  CHECK(render_plan(g->desc(), g->tmpl(1)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_2\n"
        "server 2: s1_1+s2_1\n"
        "server 2: a1+b1+s1_2+s2_2\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_1\n");

  auto gc = gr_from_pir(pir_c3(), 2);
  CHECK(rate_of(*gc) == Rat(1, 4));  // 6 / (3 x 8)
  CHECK(render_plan(gc->desc(), gc->tmpl(0)) ==
        "server 1: s1_1\n"
        "server 1: s3_1\n"
        "server 1: s1_2+s3_2\n"
        "server 1: s1_3+s3_3\n"
        "server 1: a1+s1_4\n"
        "server 1: c1+s3_4\n"
        "server 1: a2+c2+s1_5+s3_5\n"
        "server 1: a3+c3+s1_6+s3_6\n"
        "server 2: s1_4\n"
        "server 2: s2_1\n"
        "server 2: s1_5+s2_2\n"
        "server 2: s1_6+s2_3\n"
        "server 2: a4+s1_1\n"
        "server 2: b1+s2_4\n"
        "server 2: a5+b2+s1_2+s2_5\n"
        "server 2: a6+b3+s1_3+s2_6\n"
        "server 3: s2_2\n"
        "server 3: s3_2\n"
        "server 3: s2_3+s3_1\n"
        "server 3: s2_1+s3_3\n"
        "server 3: b2+s2_5\n"
        "server 3: c2+s3_5\n"
        "server 3: b3+c1+s2_6+s3_4\n"
        "server 3: b1+c3+s2_4+s3_6\n");

  auto gs = gr_from_pir(pir_s4(), 2);
  CHECK(rate_of(*gs) == Rat(1, 4));
  CHECK(render_plan(gs->desc(), gs->tmpl(0)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_2\n"
        "server 2: s2_1\n"
        "server 2: b1+s2_2\n"
        "server 3: s3_1\n"
        "server 3: c1+s3_2\n"
        "server 4: s1_2+s2_1+s3_1\n"
        "server 4: a2+b1+c1+s1_1+s2_2+s3_2\n");
}

TEST_CASE("graph-replicated conversion requires SRP") {
  CHECK_THROWS_AS(gr_from_pir(pir_star_t(4, 2), 2), std::invalid_argument);
}

TEST_CASE("fully-replicated conversion parameters") {
  auto p = fr_params(2, 3);
  CHECK(p.ell == 2);
  CHECK(p.x == 2);
  CHECK(p.y == 1);
  p = fr_params(6, 3);  // cycle base: lcm(3, 2) = 6
  CHECK(p.ell == 6);
  CHECK(p.x == 2);
  CHECK(p.y == 3);
  p = fr_params(2, 4);  // star base: lcm(1, 3) = 3
  CHECK(p.x == 3);
  CHECK(p.y == 1);
}

TEST_CASE("fully-replicated conversion of the path scheme is the reference table") {
  auto f = fr_from_pir(pir_p3(), 2);
  CHECK(f->desc().L == 4);
  CHECK(f->desc().pool_sizes[0] == 5);
  CHECK(rate_of(*f) == Rat(4, 9));
  CHECK(randomness_ratios(*f).rho_total == Rat(5, 4));
  CHECK(render_plan(f->desc(), f->tmpl(0)) ==
        "server 1: s2\n"
        "server 1: a1+s1\n"
        "server 1: a3+s4\n"
        "server 2: s1\n"
        "server 2: a2+b2+s2+s3\n"
        "server 2: a4+b4+s4+s5\n"
        "server 3: s4\n"
        "server 3: b2+s3\n"
        "server 3: b4+s5\n");
  CHECK(render_plan(f->desc(), f->tmpl(1)) ==
        "server 1: s5\n"
        "server 1: a1+s1\n"
        "server 1: a3+s4\n"
        "server 2: s3\n"
        "server 2: a1+b1+s1+s2\n"
        "server 2: a3+b3+s4+s5\n"
        "server 3: s2\n"
        "server 3: b2+s3\n"
        "server 3: b4+s5\n");
  check_pad_uniqueness_fr(*f);
}

TEST_CASE("fully-replicated conversion of the cycle scheme") {
  auto f = fr_from_pir(pir_c3(), 2);
  CHECK(f->desc().L == 12);
  CHECK(f->desc().pool_sizes[0] == 21);
  CHECK(rate_of(*f) == Rat(4, 11));  // 12x/(12x + 3y) with x=2, y=3
  CHECK(randomness_ratios(*f).rho_total == Rat(7, 4));
  // reference k=1 block (the source table lists two server-3 sums in the opposite
  // order to its own base table; lines and pads are identical)
  CHECK(render_plan(f->desc(), f->tmpl(0)) ==
        "server 1: s7\n"
        "server 1: s9\n"
        "server 1: s11\n"
        "server 1: a1+s1\n"
        "server 1: c1+s2\n"
        "server 1: a2+c2+s3+s4\n"
        "server 1: a3+c3+s5+s6\n"
        "server 1: a7+s13\n"
        "server 1: c7+s14\n"
        "server 1: a8+c8+s15+s16\n"
        "server 1: a9+c9+s17+s18\n"
        "server 2: s1\n"
        "server 2: s3\n"
        "server 2: s5\n"
        "server 2: a4+s7\n"
        "server 2: b1+s8\n"
        "server 2: a5+b2+s9+s10\n"
        "server 2: a6+b3+s11+s12\n"
        "server 2: a10+s13\n"
        "server 2: b7+s19\n"
        "server 2: a11+b8+s15+s20\n"
        "server 2: a12+b9+s17+s21\n"
        "server 3: s13\n"
        "server 3: s15\n"
        "server 3: s17\n"
        "server 3: b2+s10\n"
        "server 3: c2+s4\n"
        "server 3: b3+c1+s2+s12\n"
        "server 3: b1+c3+s6+s8\n"
        "server 3: b8+s20\n"
        "server 3: c8+s16\n"
        "server 3: b9+c7+s14+s21\n"
        "server 3: b7+c9+s18+s19\n");
  check_pad_uniqueness_fr(*f);
}

TEST_CASE("fully-replicated conversion of the star scheme is the reference table") {
  auto f = fr_from_pir(pir_star_simple(4), 2);
  CHECK(f->desc().L == 6);
  CHECK(f->desc().pool_sizes[0] == 10);
  CHECK(rate_of(*f) == Rat(3, 8));
  CHECK(randomness_ratios(*f).rho_total == Rat(5, 3));
  CHECK(render_plan(f->desc(), f->tmpl(0)) ==
        "server 1: s4\n"
        "server 1: a1+s1\n"
        "server 1: a3+s5\n"
        "server 1: a5+s8\n"
        "server 2: s5\n"
        "server 2: b1+s2\n"
        "server 2: b3+s6\n"
        "server 2: b5+s9\n"
        "server 3: s8\n"
        "server 3: c1+s3\n"
        "server 3: c3+s7\n"
        "server 3: c5+s10\n"
        "server 4: s1\n"
        "server 4: a2+b1+c1+s2+s3+s4\n"
        "server 4: a4+b3+c3+s5+s6+s7\n"
        "server 4: a6+b5+c5+s8+s9+s10\n");
  check_pad_uniqueness_fr(*f);
}

TEST_CASE("star conversion with the t-parameterized base") {
  auto f = fr_star(4, 2, 2);
  CHECK(f->desc().L == 3);
  CHECK(f->desc().pool_sizes[0] == 4);
  CHECK(rate_of(*f) == Rat(3, 7));
  CHECK(randomness_ratios(*f).rho_total == Rat(4, 3));
  CHECK(render_plan(f->desc(), f->tmpl(0)) ==
        "server 1: a1+s1\n"
        "server 2: b1+s2\n"
        "server 3: c1+s3\n"
        "server 4: s1\n"
        "server 4: a2+b1+s2\n"
        "server 4: a3+c1+s3\n"
        "server 4: b2+c2+s4\n");
  check_pad_uniqueness_fr(*f);
  CHECK_THROWS_AS(fr_star(4, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(fr_star(4, 4, 2), std::invalid_argument);
}

TEST_CASE("the N=3 star conversion meets the settled capacity") {
  auto f = fr_star(3, 2, 2);
  CHECK(rate_of(*f) == Rat(1, 2));
  CHECK(randomness_ratios(*f).rho_total == Rat(1));
  CHECK(Rat(4, 9) < rate_of(*f));  // beats the lcm algorithm on the same graph
}

TEST_CASE("multigraph graph-replicated conversion is the reference table") {
  auto g = gr_multigraph_from_pir(pir_p3(), 2, 2);
  CHECK(g->desc().L == 4);
  CHECK(rate_of(*g) == Rat(1, 3));  // = R(P3), independent of r
  CHECK(*randomness_ratios(*g).rho == Rat(1));
  CHECK(render_plan(g->desc(), g->tmpl(0)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_2\n"
        "server 1: c1+s1_3\n"
        "server 1: a4+c2+s1_4\n"
        "server 2: s1_2+s2_2\n"
        "server 2: a2+b2+s1_1+s2_1\n"
        "server 2: c2+d2+s1_4+s2_3\n"
        "server 2: a3+b4+c1+d4+s1_3+s2_4\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_1\n"
        "server 3: d2+s2_3\n"
        "server 3: b4+d4+s2_4\n");
  CHECK(render_plan(g->desc(), g->tmpl(1)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_2\n"
        "server 1: c1+s1_3\n"
        "server 1: a4+c4+s1_4\n"
        "server 2: s1_1+s2_1\n"
        "server 2: a1+b1+s1_2+s2_2\n"
        "server 2: c1+d1+s1_3+s2_3\n"
        "server 2: a4+b4+c4+d2+s1_4+s2_4\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_1\n"
        "server 3: d2+s2_4\n"
        "server 3: b3+d1+s2_3\n");
  CHECK(render_plan(g->desc(), g->tmpl(2)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_3\n"
        "server 1: c1+s1_2\n"
        "server 1: a2+c4+s1_4\n"
        "server 2: s1_2+s2_2\n"
        "server 2: a2+b2+s1_4+s2_3\n"
        "server 2: c2+d2+s1_1+s2_1\n"
        "server 2: a1+b4+c3+d4+s1_3+s2_4\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_3\n"
        "server 3: d2+s2_1\n"
        "server 3: b4+d4+s2_4\n");
  CHECK(render_plan(g->desc(), g->tmpl(3)) ==
        "server 1: s1_1\n"
        "server 1: a1+s1_3\n"
        "server 1: c1+s1_2\n"
        "server 1: a4+c4+s1_4\n"
        "server 2: s1_1+s2_1\n"
        "server 2: a1+b1+s1_3+s2_3\n"
        "server 2: c1+d1+s1_2+s2_2\n"
        "server 2: a4+b2+c4+d4+s1_4+s2_4\n"
        "server 3: s2_2\n"
        "server 3: b2+s2_4\n"
        "server 3: d2+s2_1\n"
        "server 3: b1+d3+s2_3\n");
}

TEST_CASE("multigraph conversions collapse at r = 1") {
  auto a = gr_multigraph_from_pir(pir_p3(), 1, 2);
  auto b = gr_from_pir(pir_p3(), 2);
  for (int k = 0; k < 2; ++k)
    CHECK(render_plan(a->desc(), a->tmpl(k)) == render_plan(b->desc(), b->tmpl(k)));
  auto c = fr_multigraph_from_pir(pir_p3(), 1, 2);
  auto d = fr_from_pir(pir_p3(), 2);
  for (int k = 0; k < 2; ++k)
    CHECK(render_plan(c->desc(), c->tmpl(k)) == render_plan(d->desc(), d->tmpl(k)));
}

TEST_CASE("multigraph graph-replicated rate is r-invariant") {
  for (int r = 1; r <= 3; ++r) {
    auto g = gr_multigraph_from_pir(pir_p3(), r, 2);
    CHECK(rate_of(*g) == Rat(1, 3));
    CHECK(*randomness_ratios(*g).rho == Rat(1));
  }
}

TEST_CASE("multigraph fully-replicated conversion matches the reference structure") {
  auto f = fr_multigraph_from_pir(pir_p3(), 2, 2);
  CHECK(f->desc().L == 8);
  CHECK(f->desc().pool_sizes[0] == 13);
  CHECK(rate_of(*f) == Rat(8, 21));
  // the closed form at N=3, r=2
  Rat closed = Rat(2) / (Rat(3) * (Rat(2) - Rat(1, 2)) + Rat(3, 2) * Rat(1, 2));
  CHECK(closed == Rat(8, 21));
  CHECK(rate_of(*f) == closed);

  // reference answer table for theta = (1,1), compared after canonical
  // renumbering of both sides (the reference table numbers pads in another
  // order and carries one inconsistent b-index that cancellation fixes to b6)
  Plan reference = parse_plan({
      {"s1", "a1+s2", "c1+s4", "a3+c2+s5", "a5+s8", "c5+s10", "a7+c6+s11"},
      {"s2", "a2+b2+s1+s3", "c2+d2+s5+s6", "a4+b4+c1+d4+s4+s7", "a6+b6+s8+s9",
       "c6+d6+s11+s12", "a8+b8+c5+d8+s10+s13"},
      {"s8", "b2+s3", "d2+s6", "b4+d4+s7", "b6+s9", "d6+s12", "b8+d8+s13"},
  });
  CHECK(canonical_table(f->desc(), f->tmpl(0)) == canonical_table(f->desc(), reference));
  check_pad_uniqueness_fr(*f);
}

TEST_CASE("converted transcripts decode the requested message") {
  auto f = fr_from_pir(pir_p3(), 3);
  PrimeField q3(3);
  std::mt19937_64 rng(41);
  auto db = MessageDatabase::random(q3, 2, 4, rng);
  auto pool = RandomnessPool::random(q3, {5}, rng);
  auto coins = random_coins(f->desc().coins, rng);
  auto tr = run_transcript(*f, db, pool, coins, 1);
  CHECK(tr.decoded == db.msgs[1]);
  CHECK(tr.downloads == std::vector<int>{3, 3, 3});

  auto g = gr_multigraph_from_pir(pir_p3(), 2, 3);
  auto db2 = MessageDatabase::random(q3, 4, 4, rng);
  auto pool2 = RandomnessPool::random(q3, {4, 4}, rng);
  for (int target = 0; target < 4; ++target) {
    auto coins2 = random_coins(g->desc().coins, rng);
    auto tr2 = run_transcript(*g, db2, pool2, coins2, target);
    CHECK(tr2.decoded == db2.msgs[target]);
  }
}

TEST_CASE("converter rate identities") {
  // rate = R_PIR / 2 for the two-phase conversions, any multiplicity
  for (const auto& T : {pir_p3(), pir_c3(), pir_s4()}) {
    auto g = gr_from_pir(T, 2);
    CHECK(rate_of(*g) == T.rate() / Rat(2));
    auto gm = gr_multigraph_from_pir(T, 2, 2);
    CHECK(rate_of(*gm) == T.rate() / Rat(2));
  }
  // 1/R_FR = 1/C_PIR + N/(2(N-1)), and rho_total = 1/R_FR - 1
  {
    auto f = fr_from_pir(pir_p3(), 2);
    Rat r = rate_of(*f);
    CHECK(r.inv() == Rat(2, 3).inv() + Rat(3, 2 * 2));
    CHECK(randomness_ratios(*f).rho_total == r.inv() - Rat(1));
  }
  {
    auto f = fr_from_pir(pir_c3(), 2);
    Rat r = rate_of(*f);
    CHECK(r.inv() == Rat(2, 4).inv() + Rat(3, 2 * 2));
    CHECK(randomness_ratios(*f).rho_total == r.inv() - Rat(1));
  }
}

TEST_CASE("conversions demand the symmetric retrieval property") {
  CHECK_THROWS_AS(fr_from_pir(pir_star_t(4, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(fr_multigraph_from_pir(pir_star_t(5, 2), 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(gr_multigraph_from_pir(pir_star_t(4, 2), 2, 2), std::invalid_argument);
}

TEST_CASE("graph-replicated pads stay off the phase-1 downloads") {
  for (const auto& T : {pir_p3(), pir_c3(), pir_s4()}) {
    PsiMap psi(T.L());
    const auto& d = T.table().desc();
    for (int k = 0; k < d.n_messages; ++k)
      for (int l = 0; l < d.n_messages; ++l) {
        if (l == k) continue;
        std::set<int> downloaded;
        for (int n = 0; n < d.n_servers; ++n)
          for (int idx : T.queried_indices(k, n, l)) downloaded.insert(idx);
        for (int idx : downloaded) CHECK_FALSE(downloaded.count(psi(idx)));
      }
  }
}
