#include <CLI11.hpp>
#include <iostream>
#include <memory>
#include <random>

#include "spir/analysis.hpp"
#include "spir/converters.hpp"
#include "spir/fault.hpp"
#include "spir/general_scheme.hpp"
#include "spir/pir_base.hpp"
#include "spir/render.hpp"
#include "spir/verifier.hpp"

using namespace spir;

namespace {

struct RunConfig {
  std::string graph = "path";
  int n = 3;
  int r = 1;
  uint32_t q = 3;
  std::string scheme = "general";
  std::string setting = "gr";
  std::string target = "1";
  int t = 2;
  std::string pir_table;
  uint64_t seed = 1;
  std::string format = "text";
  uint64_t budget = 1ull << 24;
  int jobs = 1;
  std::string engine = "auto";
  std::string fault;
};

GraphSpec make_graph(const RunConfig& c) {
  if (c.graph == "path") return path_graph(c.n);
  if (c.graph == "cycle") return cycle_graph(c.n);
  if (c.graph == "star") return star_graph(c.n);
  if (c.graph == "complete") return complete_graph(c.n);
  if (c.graph == "m") return m_graph();
  return load_edge_list_file(c.graph);  // a custom edge-list file
}

PirScheme base_pir(const RunConfig& c, const GraphSpec& g) {
  if (!c.pir_table.empty()) return load_pir_table_file(c.pir_table);
  if (c.graph == "path" && c.n == 3) return pir_p3();
  if (c.graph == "cycle" && c.n == 3) return pir_c3();
  if (c.graph == "star") return pir_star_simple(g.n_servers());
  throw std::invalid_argument(
      "no built-in base scheme for this graph; built-ins cover path 3, cycle 3 and star N "
      "(use --pir-table for anything else)");
}

std::shared_ptr<Scheme> build_scheme(const RunConfig& c) {
  GraphSpec g = make_graph(c);
  std::shared_ptr<Scheme> s;
  if (c.scheme == "general") {
    auto gs = std::make_shared<GeneralScheme>(MultiGraphSpec(g, c.r), c.q);
    if (c.fault == "flip-sign") gs->inject_sign_flip(g.edge(0).a - 1, 0);
    if (c.fault == "unblind") gs->inject_unblinded_pick();
    s = gs;
  } else if (c.scheme == "pir") {
    PirScheme T = base_pir(c, g);
    if (c.r > 1) T = lift_pir_multigraph(T, c.r);
    s = T.at_q(c.q).table_ptr();
  } else if (c.scheme == "gr-from-pir" || c.scheme == "gr-multigraph") {
    s = gr_multigraph_from_pir(base_pir(c, g), c.r, c.q);
  } else if (c.scheme == "fr-from-pir" || c.scheme == "fr-multigraph") {
    s = fr_multigraph_from_pir(base_pir(c, g), c.r, c.q);
  } else if (c.scheme == "fr-star") {
    bool starlike = c.graph == "star" || (c.graph == "path" && c.n == 3);
    if (!starlike)
      throw std::invalid_argument("fr-star needs a star graph (or the N=3 path, which is one)");
    s = fr_star(c.graph == "star" ? c.n : 3, c.t, c.q);
  } else {
    throw std::invalid_argument("unknown scheme: " + c.scheme);
  }
  if (c.fault == "drop-pad") s = std::make_shared<DropPads>(s);
  if (!c.fault.empty() && c.fault != "drop-pad" && c.fault != "flip-sign" &&
      c.fault != "unblind")
    throw std::invalid_argument("unknown fault: " + c.fault);
  if ((c.fault == "flip-sign" || c.fault == "unblind") && c.scheme != "general")
    throw std::invalid_argument("this fault applies to the general scheme");
  return s;
}

int parse_target(const RunConfig& c, const SchemeDescriptor& d) {
  int k = 0, t = 1;
  auto comma = c.target.find(',');
  if (comma == std::string::npos) {
    k = std::stoi(c.target);
  } else {
    k = std::stoi(c.target.substr(0, comma));
    t = std::stoi(c.target.substr(comma + 1));
  }
  if (k < 1 || k > d.n_bundles || t < 1 || t > d.n_messages / d.n_bundles)
    throw std::invalid_argument("target out of range");
  return (t - 1) * d.n_bundles + (k - 1);
}

int cmd_run(const RunConfig& c) {
  auto s = build_scheme(c);
  const auto& d = s->desc();
  int target = parse_target(c, d);
  std::mt19937_64 rng(c.seed);
  Coins coins = random_coins(d.coins, rng);
  PrimeField f(d.q);
  auto db = MessageDatabase::random(f, d.n_messages, d.L, rng);
  auto pool = RandomnessPool::random(f, d.pool_sizes, rng);
  Transcript tr = run_transcript(*s, db, pool, coins, target);

  std::cout << "scheme: " << d.name << "\n";
  std::cout << "target: " << d.target_names[target] << "  seed: " << c.seed << "\n";
  auto rows = render_rows(d, tr.queries);
  for (int srv = 0; srv < d.n_servers; ++srv)
    for (size_t i = 0; i < rows[srv].size(); ++i)
      std::cout << "server " << (srv + 1) << ": " << rows[srv][i] << " = "
                << tr.answers[srv][i].value() << "\n";
  std::cout << d.target_names[target] << " =";
  for (const auto& v : tr.decoded) std::cout << " " << v.value();
  std::cout << "\n";
  bool ok = true;
  for (int l = 0; l < d.L; ++l) ok = ok && tr.decoded[l] == db.msgs[target][l];
  std::cout << "decoded " << (ok ? "correctly" : "WRONGLY") << "\n";
  auto rr = randomness_ratios(*s);
  std::cout << "rate = " << rate_of(*s).str();
  if (rr.rho) std::cout << ", rho = " << rr.rho->str();
  std::cout << ", rho_total = " << rr.rho_total.str() << "\n";
  std::cout << "transcript:\n" << tr.to_text();
  return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
  auto s = build_scheme(c);
  Budget b;
  b.joint_states = c.budget;
  b.jobs = c.jobs;
  if (c.engine == "exhaustive") {
    // forced exhaustive run: refusal is a hard error
    VerificationReport rep;
    rep.scheme = s->desc().name;
    rep.q = s->desc().q;
    rep.checks.push_back(check_reliability_exhaustive(*s, b));
    rep.checks.push_back(check_user_privacy_enumeration(*s, b));
    for (int target = 0; target < s->desc().n_messages; ++target)
      for (auto& J : db_privacy_j_sets(s->desc(), target))
        rep.checks.push_back(check_db_privacy_exhaustive(*s, target, J, b));
    std::cout << rep.to_text();
    if (rep.refusals() > 0) {
      std::cerr << "exhaustive verification refused: domain exceeds --budget "
                << c.budget << "\n";
      return 2;
    }
    return rep.failures() == 0 ? 0 : 1;
  }
  if (c.engine == "linear") {
    VerificationReport rep;
    rep.scheme = s->desc().name;
    rep.q = s->desc().q;
    rep.checks.push_back(check_reliability_symbolic(*s, b));
    rep.checks.push_back(check_user_privacy_canonical(*s, b));
    for (int target = 0; target < s->desc().n_messages; ++target)
      for (auto& J : db_privacy_j_sets(s->desc(), target))
        rep.checks.push_back(check_db_privacy_linear(*s, target, J, b));
    std::cout << rep.to_text();
    return rep.failures() == 0 ? 0 : 1;
  }
  VerificationReport rep = verify_all(*s, b);
  std::cout << rep.to_text();
  return rep.all_passed() ? 0 : 1;
}

int cmd_rates(const RunConfig& c) {
  GraphFamily fam;
  if (c.graph == "path") fam = GraphFamily::Path;
  else if (c.graph == "cycle") fam = GraphFamily::Cycle;
  else if (c.graph == "star") fam = GraphFamily::Star;
  else if (c.graph == "complete") fam = GraphFamily::Complete;
  else throw std::invalid_argument("rates cover the named families");
  RandMode mode = c.setting == "fr" ? RandMode::FullyReplicated : RandMode::GraphReplicated;
  RateSummary s = multigraph_rates(fam, c.n, c.r, mode);
  std::cout << (c.format == "tsv" ? s.to_tsv() : s.to_text()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPIR on graph-replicated databases: run, verify, analyze"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph,-g", c.graph, "path|cycle|star|complete|m|<edge-list file>");
    sub->add_option("--n", c.n, "number of servers");
    sub->add_option("--r", c.r, "multigraph multiplicity");
    sub->add_option("--field-order,-q,--q", c.q, "prime field order");
    sub->add_option("--scheme", c.scheme,
                    "general|pir|gr-from-pir|fr-from-pir|fr-star|gr-multigraph|fr-multigraph");
    sub->add_option("--setting", c.setting, "gr|fr");
    sub->add_option("--t", c.t, "star scheme parameter");
    sub->add_option("--pir-table", c.pir_table, "base scheme from a declarative table file");
    sub->add_option("--budget", c.budget, "joint-state cap for exhaustive checks");
    sub->add_option("--jobs", c.jobs, "parallel verification tasks");
  };

  auto* run = app.add_subcommand("run", "execute one seeded protocol run");
  add_common(run);
  run->add_option("--target", c.target, "desired message, 1-based (multigraph: k,t)");
  run->add_option("--seed", c.seed, "coin/database seed");

  auto* verify = app.add_subcommand("verify", "verify reliability and both privacy notions");
  add_common(verify);
  verify->add_option("--engine", c.engine, "auto|exhaustive|linear");
  verify->add_option("--inject-fault", c.fault, "drop-pad|flip-sign|unblind");

  auto* rates = app.add_subcommand("rates", "closed-form rates and bounds");
  add_common(rates);
  rates->add_option("--format", c.format, "text|tsv");

  auto* t1 = app.add_subcommand("table1", "summary of graph-replicated rates");
  t1->add_option("--format", c.format, "text|tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(c);
    if (verify->parsed()) return cmd_verify(c);
    if (rates->parsed()) return cmd_rates(c);
    if (t1->parsed()) {
      std::cout << table1(c.format == "tsv");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
