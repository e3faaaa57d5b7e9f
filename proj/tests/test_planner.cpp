#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tstar/bench.hpp"
#include "tstar/planner.hpp"

using namespace tstar;

TEST_CASE("baseline_plan: D1 tour costs 6 and the oracle agrees") {
  GridWorkspace ws = fixtures::d1();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome out = baseline_plan(ws, b);
  REQUIRE(out.satisfiable());
  CHECK(out.result->suffix_cost == Cost::from_halves(12));

  // Exhaustive simple-cycle enumeration over the product confirms 6 is
  // minimal among all accepting cycles.
  ProductGraph g = build_product(ws, b);
  oracle::TinyGraph tiny = oracle::tiny_of(g);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint32_t f : g.finals) {
    auto c = oracle::min_cycle_through(tiny, f);
    if (c) best = std::min(best, *c);
  }
  CHECK(best == 12);

  // Suffix is a closed cycle through an accepting vertex; the prefix ends
  // where the suffix starts.
  CHECK(out.result->suffix.front() == out.result->suffix.back());
  CHECK(out.result->concrete_suffix.front() == out.result->concrete_suffix.back());
  if (!out.result->prefix.empty())
    CHECK(out.result->prefix.front().cell == ws.start());
}

TEST_CASE("baseline_plan: unsatisfiable cases") {
  SUBCASE("false formula") {
    CHECK(!baseline_plan(fixtures::d1(), translate_to_buchi(ltl::parse_ltl("false")))
               .satisfiable());
  }
  SUBCASE("walled-off p1 makes patrol unsatisfiable") {
    GridWorkspace ws = fixtures::walled_p1();
    CHECK(!baseline_plan(ws, translate_to_buchi(ltl::parse_ltl("[]<>p1"))).satisfiable());
    // p2 is reachable, so that query stays satisfiable
    CHECK(baseline_plan(ws, translate_to_buchi(ltl::parse_ltl("[]<>p2"))).satisfiable());
  }
}

TEST_CASE("dijkstra_shortest_cycle: product graph cases") {
  GridWorkspace ws = fixtures::d1();
  ProductGraph g = build_product(ws, fixtures::patrol2());
  oracle::TinyGraph tiny = oracle::tiny_of(g);
  for (std::uint32_t f : g.finals) {
    auto got = dijkstra_shortest_cycle(g, f);
    auto want = oracle::min_cycle_through(tiny, f);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK(got->first.halves() == *want);
      CHECK(got->second.v.front() == f);
      CHECK(got->second.v.back() == f);
      CHECK(run_cost(got->second, g) == got->first);
    }
  }
}

TEST_CASE("dijkstra_shortest_cycle: reduced self-edge and isolated final") {
  GridWorkspace ws = fixtures::d1();
  ReducedGraph g = build_reduced_graph(ws, fixtures::patrol2());

  SUBCASE("synthetic self-edge wins when cheapest") {
    ReducedGraph::Edge self;
    self.to = g.finals.at(0);
    self.w = Cost::from_halves(1);
    self.distant = true;
    g.out[g.finals.at(0)].insert(g.out[g.finals.at(0)].begin(), self);
    auto got = dijkstra_shortest_cycle(g, g.finals.at(0));
    REQUIRE(got.has_value());
    CHECK(got->first == Cost::from_halves(1));
    CHECK(got->second.v == std::vector<std::uint32_t>{g.finals.at(0), g.finals.at(0)});
  }
  SUBCASE("vertex with no outgoing edges has no cycle") {
    g.out[g.finals.at(0)].clear();
    CHECK(!dijkstra_shortest_cycle(g, g.finals.at(0)).has_value());
  }
  SUBCASE("infinite edges are ignored") {
    for (auto& e : g.out[g.finals.at(0)]) {
      e.w = Cost::infinity();
      e.updated = true;
    }
    CHECK(!dijkstra_shortest_cycle(g, g.finals.at(0)).has_value());
  }
}

TEST_CASE("tstar_plan: equals baseline on the worked examples") {
  for (const char* q : {"[](<>p1 && <>p2)", "[]<>p1", "[]<>p2"}) {
    BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl(q));
    for (auto ws : {fixtures::d1(), fixtures::detour()}) {
      PlanOutcome base = baseline_plan(ws, b);
      PlanOutcome fast = tstar_plan(ws, b);
      REQUIRE(base.satisfiable() == fast.satisfiable());
      if (base.satisfiable()) {
        CHECK(base.result->suffix_cost == fast.result->suffix_cost);
        LassoWord w = plan_trace(*fast.result, ws);
        CHECK(lasso_accepts(b, w));
      }
    }
  }
  // Unsatisfiable together.
  GridWorkspace walled = fixtures::walled_p1();
  BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl("[]<>p1"));
  CHECK(!baseline_plan(walled, b).satisfiable());
  CHECK(!tstar_plan(walled, b).satisfiable());
}

TEST_CASE("tstar_plan: random workspaces match baseline exactly") {
  std::mt19937_64 rng(555);
  const std::vector<std::string> queries = {
      "[]<>p1",
      "[](<>p1 && <>p2 && !p3)",
      bench::gather_upload_query(3, 2, false),  // phi_c family
      bench::gather_upload_query(3, 2, true),   // phi_d family
  };
  std::vector<BuchiAutomaton> automata;
  for (const auto& q : queries) automata.push_back(translate_to_buchi(ltl::parse_ltl(q)));

  int satisfiable = 0;
  for (int i = 0; i < 40; ++i) {
    bench::GenSpec spec;
    spec.width = 8 + static_cast<int>(rng() % 13);
    spec.height = 8 + static_cast<int>(rng() % 13);
    spec.conn = rng() % 2 ? Connectivity::Four : Connectivity::Eight;
    spec.density = static_cast<double>(rng() % 26) / 100.0;
    spec.gather = 3;
    spec.upload = 2;
    spec.seed = rng();
    GridWorkspace ws = bench::generate_workspace(spec);
    const auto& b = automata[i % automata.size()];
    PlanOutcome base = baseline_plan(ws, b);
    PlanOutcome fast = tstar_plan(ws, b);
    REQUIRE(base.satisfiable() == fast.satisfiable());
    if (base.satisfiable()) {
      ++satisfiable;
      CHECK(base.result->suffix_cost == fast.result->suffix_cost);
      CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));
      CHECK(lasso_accepts(b, plan_trace(*base.result, ws)));
    }
  }
  CHECK(satisfiable > 10);
}

TEST_CASE("find_prefix: identity, refinement, and collapse to infinity") {
  GridWorkspace ws = fixtures::d1();
  ReducedGraph g = build_reduced_graph(ws, fixtures::patrol2());

  SUBCASE("prefix to the initial vertex is empty with cost 0") {
    auto p = find_prefix(g, g.initial, g.initial, ws);
    REQUIRE(p.has_value());
    CHECK(p->first == Cost::zero());
    CHECK(p->second.v == std::vector<std::uint32_t>{g.initial});
  }
  SUBCASE("prefix cost matches a full-product oracle") {
    ProductGraph product = build_product(ws, fixtures::patrol2());
    for (std::uint32_t f : g.finals) {
      auto p = find_prefix(g, g.initial, f, ws);
      if (!p) continue;
      // All edges of the returned path are exact now.
      for (std::size_t i = 0; i + 1 < p->second.v.size(); ++i) {
        const auto* e = g.find_edge(p->second.v[i], p->second.v[i + 1]);
        REQUIRE(e != nullptr);
        CHECK((e->updated || !e->distant));
        CHECK(!e->w.is_infinite());
      }
      // Compare against Bellman-Ford over the full product.
      oracle::TinyGraph tiny = oracle::tiny_of(product);
      auto dist = oracle::bellman_ford(tiny, product.initial);
      // locate f in the product graph by (cell, state)
      for (std::uint32_t pv = 0; pv < product.num_vertices(); ++pv)
        if (product.vertices[pv].cell == g.vertices[f].cell &&
            product.vertices[pv].state == g.vertices[f].state)
          CHECK(dist[pv] == p->first.halves());
    }
  }
  SUBCASE("unreachable final yields no prefix") {
    GridWorkspace walled = fixtures::walled_p1();
    BuchiAutomaton b = fixtures::patrol2();
    ReducedGraph rg = build_reduced_graph(walled, b);
    for (std::uint32_t f : rg.finals) {
      if (walled.cell_at(rg.vertices[f].cell) != Cell{4, 4, 0}) continue;
      CHECK(!find_prefix(rg, rg.initial, f, walled).has_value());
    }
  }
}

TEST_CASE("project_run: cached paths splice with junctions dropped") {
  GridWorkspace ws(8, 1, 1, Connectivity::Four, {0, 0, 0});
  ws.add_label({3, 0, 0}, "p1");
  ws.add_label({7, 0, 0}, "p2");
  ws.validate();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome out = tstar_plan(ws, b);
  REQUIRE(out.satisfiable());
  // Corridor: cycle must walk 0..7 and back segments between p1 and p2.
  CHECK(out.result->suffix_cost == Cost::from_halves(16));
  const auto& cyc = out.result->concrete_suffix;
  CHECK(cyc.front() == cyc.back());
  for (std::size_t i = 0; i + 1 < cyc.size(); ++i) {
    CHECK(std::abs(cyc[i].x - cyc[i + 1].x) == 1);  // unit moves, no duplicates
  }
}

TEST_CASE("project_run: product runs map vertices to cells directly") {
  GridWorkspace ws = fixtures::d1();
  ProductGraph g = build_product(ws, fixtures::patrol2());
  auto cyc = dijkstra_shortest_cycle(g, g.finals.at(0));
  REQUIRE(cyc.has_value());
  auto cells = project_run(cyc->second, g, ws);
  CHECK(cells.size() == cyc->second.v.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    CHECK(ws.cell_index(cells[i]) == g.vertices[cyc->second.v[i]].cell);
}

TEST_CASE("project_run: unrefined distant edges are an error") {
  GridWorkspace ws = fixtures::d1();
  ReducedGraph g = build_reduced_graph(ws, fixtures::patrol2());
  for (std::uint32_t v = 0; v < g.num_vertices(); ++v)
    for (const auto& e : g.out[v])
      if (e.distant && !e.updated) {
        Run run{{v, e.to}};
        CHECK_THROWS_AS(project_run(run, g, ws), std::logic_error);
        return;
      }
  FAIL("no distant edge found");
}

TEST_CASE("run_cost: empty, worked example, and random fold") {
  GridWorkspace ws = fixtures::d1();
  ReducedGraph g = build_reduced_graph(ws, fixtures::patrol2());
  CHECK(run_cost(Run{}, g) == Cost::zero());
  CHECK(run_cost(Run{{g.initial}}, g) == Cost::zero());

  // A three-leg suffix of costs 1, 7, 8 sums to 16.
  ReducedGraph synth;
  synth.vertices.resize(3);
  synth.out.resize(3);
  synth.out[0].push_back({1, Cost::from_halves(2), false, true, {}});
  synth.out[1].push_back({2, Cost::from_halves(14), false, true, {}});
  synth.out[2].push_back({0, Cost::from_halves(16), false, true, {}});
  Run loop{{0, 1, 2, 0}};
  CHECK(run_cost(loop, synth) == Cost::from_halves(32));
  CHECK(run_cost(loop, synth).str() == "16");

  // Infinity absorbs.
  synth.out[1][0].w = Cost::infinity();
  CHECK(run_cost(loop, synth).is_infinite());
}

TEST_CASE("plan_trace: word starts after the start cell") {
  GridWorkspace ws = fixtures::d1();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome out = tstar_plan(ws, b);
  REQUIRE(out.satisfiable());
  LassoWord w = plan_trace(*out.result, ws);
  CHECK(w.period.size() == out.result->concrete_suffix.size() - 1);
  if (!out.result->concrete_prefix.empty())
    CHECK(w.prefix.size() == out.result->concrete_prefix.size() - 1);
  CHECK(lasso_accepts(b, w));
}

TEST_CASE("tstar_plan: safety queries park on a negative self-loop") {
  // []!p2 has an accepting state with only a negative self-loop; the plan
  // is an out-and-back loop near the start rather than a tour.
  GridWorkspace ws(5, 5, 1, Connectivity::Four, {2, 2, 0});
  ws.add_label({4, 4, 0}, "p2");
  ws.validate();
  BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl("[]!p2"));
  PlanOutcome base = baseline_plan(ws, b);
  PlanOutcome fast = tstar_plan(ws, b);
  REQUIRE(base.satisfiable());
  REQUIRE(fast.satisfiable());
  CHECK(base.result->suffix_cost == Cost::from_halves(4));
  CHECK(fast.result->suffix_cost == Cost::from_halves(4));
  CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));
  for (const Cell& c : fast.result->concrete_suffix) CHECK(!ws.label_of(c).count("p2"));
}

TEST_CASE("tstar_plan: respond and avoidance patterns match baseline") {
  std::mt19937_64 rng(9001);
  const std::vector<std::string> queries = {
      "[](<>p1 && <>p2) && []!p3",
      "[](p3 -> X(!p3 U p1)) && []<>p3 && []<>p1",
      "[](<>p1 && <>p2) && [](p2 -> X(!p2 U p1))",
      "[]!p1",
      "[](p1 -> <>p2)",
  };
  int satisfiable = 0;
  for (int i = 0; i < 25; ++i) {
    bench::GenSpec spec;
    spec.width = 7 + static_cast<int>(rng() % 8);
    spec.height = 7 + static_cast<int>(rng() % 8);
    spec.conn = rng() % 2 ? Connectivity::Four : Connectivity::Eight;
    spec.density = static_cast<double>(rng() % 21) / 100.0;
    spec.gather = 2;
    spec.upload = 1;
    spec.seed = rng();
    GridWorkspace ws = bench::generate_workspace(spec);
    const auto& q = queries[i % queries.size()];
    BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl(q));
    PlanOutcome base = baseline_plan(ws, b);
    PlanOutcome fast = tstar_plan(ws, b);
    CAPTURE(q);
    CAPTURE(i);
    REQUIRE(base.satisfiable() == fast.satisfiable());
    if (base.satisfiable()) {
      ++satisfiable;
      CHECK(base.result->suffix_cost == fast.result->suffix_cost);
      CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));
    }
  }
  CHECK(satisfiable > 5);
}

TEST_CASE("tstar_plan: 3-D workspaces") {
  GridWorkspace ws(5, 4, 3, Connectivity::TwentySix, {0, 0, 0});
  ws.add_label({4, 3, 2}, "p1");
  ws.add_label({0, 3, 0}, "p2");
  ws.add_obstacle({2, 2, 1});
  ws.validate();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome base = baseline_plan(ws, b);
  PlanOutcome fast = tstar_plan(ws, b);
  REQUIRE(base.satisfiable());
  REQUIRE(fast.satisfiable());
  CHECK(base.result->suffix_cost == fast.result->suffix_cost);
  CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));

  GridWorkspace ws6(5, 4, 3, Connectivity::Six, {0, 0, 0});
  ws6.add_label({4, 3, 2}, "p1");
  ws6.add_label({0, 3, 0}, "p2");
  ws6.validate();
  PlanOutcome base6 = baseline_plan(ws6, b);
  PlanOutcome fast6 = tstar_plan(ws6, b);
  REQUIRE(base6.satisfiable());
  CHECK(base6.result->suffix_cost == fast6.result->suffix_cost);
}

TEST_CASE("tstar_plan: labeled start cell follows the read-on-entry convention") {
  // The start cell's own labels are never read, so a plan must re-enter
  // the start (or another p1 cell) to satisfy the query.
  GridWorkspace ws(4, 4, 1, Connectivity::Four, {0, 0, 0});
  ws.add_label({0, 0, 0}, "p1");
  ws.validate();
  BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl("[]<>p1"));
  PlanOutcome base = baseline_plan(ws, b);
  PlanOutcome fast = tstar_plan(ws, b);
  REQUIRE(base.satisfiable());
  REQUIRE(fast.satisfiable());
  CHECK(base.result->suffix_cost == fast.result->suffix_cost);
  CHECK(fast.result->suffix_cost == Cost::from_halves(4));  // leave and re-enter
  CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));
}

TEST_CASE("concrete suffix costs re-add to the reported suffix cost") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 10; ++i) {
    bench::GenSpec spec;
    spec.width = 9 + static_cast<int>(rng() % 8);
    spec.height = 9 + static_cast<int>(rng() % 8);
    spec.conn = rng() % 2 ? Connectivity::Four : Connectivity::Eight;
    spec.density = 0.15;
    spec.gather = 2;
    spec.upload = 1;
    spec.seed = rng();
    GridWorkspace ws = bench::generate_workspace(spec);
    BuchiAutomaton b = translate_to_buchi(
        ltl::parse_ltl(bench::gather_upload_query(2, 1, false)));
    for (auto* planner : {&baseline_plan, &tstar_plan}) {
      PlanOutcome out = (*planner)(ws, b);
      if (!out.satisfiable()) continue;
      auto move_sum = [&](const std::vector<Cell>& cells) {
        Cost total;
        for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
          bool stepped = false;
          for (const auto& [n, w] : ws.neighbors(cells[k]))
            if (n == cells[k + 1]) {
              total += w;
              stepped = true;
            }
          REQUIRE(stepped);
        }
        return total;
      };
      CHECK(move_sum(out.result->concrete_suffix) == out.result->suffix_cost);
      std::vector<Cell> full = out.result->concrete_prefix;
      if (!full.empty()) {
        full.push_back(out.result->concrete_suffix.front());
        CHECK(move_sum(full) == out.result->prefix_cost);
      }
    }
  }
}

TEST_CASE("tstar_plan: parking loops relocate to the cheapest anchor in the region") {
  // Start can only leave diagonally, so the loop through the start costs
  // 3; interior cells loop for 2. The planners must agree on 2.
  GridWorkspace ws(4, 4, 1, Connectivity::Eight, {0, 0, 0});
  ws.add_obstacle({1, 0, 0});
  ws.add_obstacle({0, 1, 0});
  ws.add_label({3, 3, 0}, "p3");
  ws.validate();
  BuchiAutomaton b = translate_to_buchi(ltl::parse_ltl("[]!p3"));
  PlanOutcome base = baseline_plan(ws, b);
  PlanOutcome fast = tstar_plan(ws, b);
  REQUIRE(base.satisfiable());
  REQUIRE(fast.satisfiable());
  CHECK(base.result->suffix_cost == Cost::from_halves(4));
  CHECK(fast.result->suffix_cost == Cost::from_halves(4));
  CHECK(lasso_accepts(b, plan_trace(*fast.result, ws)));
  CHECK(fast.result->concrete_suffix.front() != Cell{0, 0, 0});
}
