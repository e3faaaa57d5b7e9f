#include <doctest.h>

#include "support/fixtures.hpp"
#include "tstar/bench.hpp"
#include "tstar/svg.hpp"

using namespace tstar;

TEST_CASE("generate_workspace: obstacle counts and determinism") {
  bench::GenSpec spec;
  spec.width = 100;
  spec.height = 100;
  spec.conn = Connectivity::Eight;
  spec.density = 0.2;
  spec.gather = 3;
  spec.upload = 2;
  spec.seed = 11;
  GridWorkspace ws = bench::generate_workspace(spec);
  std::size_t obstacles = ws.num_cells() - ws.num_free_cells();
  CHECK(obstacles == 2000);  // exact count, not an approximation
  CHECK(ws.labels().size() == 5);
  CHECK(ws.propositions() == std::vector<std::string>{"p1", "p2", "p3", "p4", "p5"});
  CHECK(!ws.is_obstacle(ws.start()));

  GridWorkspace again = bench::generate_workspace(spec);
  CHECK(again.to_json() == ws.to_json());

  SUBCASE("density 0 means no obstacles") {
    spec.density = 0;
    CHECK(bench::generate_workspace(spec).num_free_cells() == 10000);
  }
  SUBCASE("regions exceeding free space fail") {
    bench::GenSpec tiny;
    tiny.width = 2;
    tiny.height = 2;
    tiny.conn = Connectivity::Four;
    tiny.gather = 4;
    tiny.upload = 2;
    CHECK_THROWS(bench::generate_workspace(tiny));
  }
  SUBCASE("density bounds are validated") {
    spec.density = 1.0;
    CHECK_THROWS_AS(bench::generate_workspace(spec), std::invalid_argument);
  }
}

TEST_CASE("run_compare: equal costs, averaged timings") {
  GridWorkspace ws = fixtures::d1();
  BuchiAutomaton b = fixtures::patrol2();
  bench::CompareResult r = bench::run_compare(ws, b, 3, "d1", "patrol2");
  CHECK(r.satisfiable);
  CHECK(r.baseline.suffix_cost == r.tstar.suffix_cost);
  CHECK(r.baseline.wall_seconds >= 0);
  CHECK(r.tstar.wall_seconds >= 0);
  CHECK(r.baseline.algorithm == "baseline");
  CHECK(r.tstar.algorithm == "tstar");
  CHECK(r.tstar.memory_bytes <= r.baseline.memory_bytes);
  CHECK(r.baseline.workspace_id == "d1");
}

TEST_CASE("builtin queries: names resolve, raw text passes through") {
  CHECK(bench::resolve_query("@phi_c") == bench::gather_upload_query(3, 2, false));
  CHECK(bench::resolve_query("@phi_d") == bench::gather_upload_query(3, 2, true));
  CHECK(bench::resolve_query("[]<>p1") == "[]<>p1");
  CHECK_THROWS(bench::resolve_query("@no_such_query"));
  CHECK(bench::builtin_queries().size() == 6);
  // every built-in parses and translates
  for (const auto& [name, text] : bench::builtin_queries())
    CHECK(translate_to_buchi(ltl::parse_ltl(text)).num_states() >= 1);
}

TEST_CASE("run_sweep: density axis produces rows; size axis keeps the reduced graph fixed") {
  bench::GenSpec spec;
  spec.width = 24;
  spec.height = 24;
  spec.conn = Connectivity::Eight;
  spec.density = 0.1;
  spec.gather = 3;
  spec.upload = 2;
  spec.seed = 3;
  GridWorkspace base = bench::generate_workspace(spec);

  SUBCASE("obstacle density") {
    bench::SweepSpec sw;
    sw.axis = bench::SweepAxis::ObstacleDensity;
    sw.values = {0.05, 0.15, 0.25};
    sw.reps = 1;
    sw.seed = 9;
    bench::SweepContext ctx;
    ctx.base = &base;
    ctx.query = "@phi_d";
    auto rows = bench::run_sweep(sw, ctx);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(!r.skipped);
      CHECK(r.baseline.suffix_cost == r.tstar.suffix_cost);
      CHECK(r.speedup > 0);
    }
    // determinism: the stable-output table is byte-identical across runs,
    // including when rows run on parallel workers
    auto rows2 = bench::run_sweep(sw, ctx);
    CHECK(bench::sweep_to_csv(rows, true) == bench::sweep_to_csv(rows2, true));
    ctx.jobs = 2;
    auto rows3 = bench::run_sweep(sw, ctx);
    CHECK(bench::sweep_to_csv(rows, true) == bench::sweep_to_csv(rows3, true));
  }
  SUBCASE("workspace size: reduced vertex count is constant") {
    bench::SweepSpec sw;
    sw.axis = bench::SweepAxis::WorkspaceSize;
    sw.values = {24, 32, 40};
    sw.reps = 1;
    sw.seed = 1;
    bench::SweepContext ctx;
    ctx.base = &base;
    ctx.query = "@phi_d";
    auto rows = bench::run_sweep(sw, ctx);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].tstar.graph_vertices == rows[1].tstar.graph_vertices);
    CHECK(rows[1].tstar.graph_vertices == rows[2].tstar.graph_vertices);
    CHECK(rows[0].baseline.graph_vertices < rows[2].baseline.graph_vertices);
  }
  SUBCASE("query size grows the location family") {
    bench::SweepSpec sw;
    sw.axis = bench::SweepAxis::QuerySize;
    sw.values = {3, 6};
    sw.reps = 1;
    sw.seed = 4;
    bench::SweepContext ctx;
    ctx.base = &base;
    auto rows = bench::run_sweep(sw, ctx);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows)
      if (!r.skipped) CHECK(r.baseline.suffix_cost == r.tstar.suffix_cost);
  }
  SUBCASE("values must increase strictly") {
    bench::SweepSpec sw;
    sw.axis = bench::SweepAxis::ObstacleDensity;
    sw.values = {0.2, 0.2};
    bench::SweepContext ctx;
    ctx.base = &base;
    ctx.query = "@phi_d";
    CHECK_THROWS_AS(bench::run_sweep(sw, ctx), std::invalid_argument);
  }
}

TEST_CASE("trajectory documents: byte-stable and loadable") {
  GridWorkspace ws = fixtures::d1();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome out = tstar_plan(ws, b);
  REQUIRE(out.satisfiable());
  std::string doc = bench::trajectory_json("d1", "patrol2", "tstar", out);
  CHECK(doc == bench::trajectory_json("d1", "patrol2", "tstar", out));
  CHECK(doc.find("\"workspace\"") != std::string::npos);
  CHECK(doc.find("\"suffix_cost\"") != std::string::npos);
  CHECK(doc.find("\"counters\"") != std::string::npos);
  PlanResult back = bench::trajectory_from_json(doc);
  CHECK(back.concrete_suffix == out.result->concrete_suffix);
  CHECK(back.concrete_prefix == out.result->concrete_prefix);
  CHECK(back.suffix_cost == out.result->suffix_cost);
}

TEST_CASE("bench CSV rows: stable timing mode zeroes the clock column") {
  bench::BenchRecord r;
  r.workspace_id = "w";
  r.query_id = "q";
  r.algorithm = "tstar";
  r.wall_seconds = 1.25;
  r.suffix_cost = Cost::from_halves(13);
  r.prefix_cost = Cost::from_halves(4);
  std::string live = bench::to_csv_row(r, false);
  std::string stable = bench::to_csv_row(r, true);
  CHECK(live.find("1.250000") != std::string::npos);
  CHECK(stable.find("0.000000") != std::string::npos);
  CHECK(live.find("6.5") != std::string::npos);
  CHECK(bench::bench_csv_header().find("suffix_cost") != std::string::npos);
}

TEST_CASE("render_svg: polylines and obstacles") {
  GridWorkspace ws = fixtures::detour();
  BuchiAutomaton b = fixtures::patrol2();
  PlanOutcome out = tstar_plan(ws, b);
  REQUIRE(out.satisfiable());
  std::string svg = render_svg(ws, &*out.result);

  auto count = [&](const std::string& needle) {
    std::size_t n = 0, at = 0;
    while ((at = svg.find(needle, at)) != std::string::npos) {
      ++n;
      at += needle.size();
    }
    return n;
  };
  CHECK(count("class=\"suffix\"") == 1);
  CHECK(count("class=\"obstacle\"") == 3);
  CHECK(svg.find("suffix cost") != std::string::npos);

  SUBCASE("empty prefix leaves only the suffix polyline") {
    PlanResult r = *out.result;
    r.concrete_prefix.clear();
    std::string svg2 = render_svg(ws, &r);
    CHECK(svg2.find("class=\"prefix\"") == std::string::npos);
    CHECK(svg2.find("class=\"suffix\"") != std::string::npos);
  }
  SUBCASE("obstacle-free grids render no obstacle rects") {
    GridWorkspace open = fixtures::d1();
    PlanOutcome o2 = tstar_plan(open, b);
    std::string svg2 = render_svg(open, &*o2.result);
    CHECK(svg2.find("class=\"obstacle\"") == std::string::npos);
  }
  SUBCASE("3-D needs the layer flag") {
    GridWorkspace w3(3, 3, 2, Connectivity::Six, {0, 0, 0});
    CHECK_THROWS_AS(render_svg(w3, nullptr), ValidationError);
    SvgOptions opt;
    opt.layer_slices = true;
    CHECK(render_svg(w3, nullptr, opt).find("<svg") == 0);
  }
}

TEST_CASE("run_sweep: persistently unsatisfiable values become skipped rows") {
  // Center start, labels in opposite corners, and a density that turns
  // every other cell into an obstacle: each draw walls the start in.
  GridWorkspace base(3, 3, 1, Connectivity::Four, {1, 1, 0});
  base.add_label({0, 0, 0}, "p1");
  base.add_label({2, 2, 0}, "p2");
  base.validate();
  bench::SweepSpec sw;
  sw.axis = bench::SweepAxis::ObstacleDensity;
  sw.values = {2.0 / 3.0};
  sw.reps = 1;
  sw.seed = 12;
  bench::SweepContext ctx;
  ctx.base = &base;
  ctx.query = "[](<>p1 && <>p2)";
  auto rows = bench::run_sweep(sw, ctx);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].skipped);
  std::string csv = bench::sweep_to_csv(rows, true);
  CHECK(csv.find("skipped") != std::string::npos);
}

TEST_CASE("trajectory_from_json: malformed documents are rejected") {
  CHECK_THROWS_AS(bench::trajectory_from_json("not json"), std::invalid_argument);
  CHECK_THROWS(bench::trajectory_from_json("{}"));
}
