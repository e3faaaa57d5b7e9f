#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"

// End-to-end checks of the command-line surface: exit codes, file outputs,
// and determinism, run against the installed binary.
namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(TSTAR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[512];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/tstar_cli_test_") + name;
}

void write_temp(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli plan: success, trajectory and svg are written") {
  std::string ws = temp_path("d1.json");
  write_temp(ws, fixtures::d1().to_json());
  std::string traj = temp_path("d1_traj.json");
  std::string svg = temp_path("d1.svg");

  auto r = run_cli("plan --workspace " + ws + " --query \"[](<>p1 && <>p2)\" --algo tstar --out " +
                   traj + " --svg " + svg);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("suffix cost: 6") != std::string::npos);
  CHECK(slurp(traj).find("\"suffix_cost\"") != std::string::npos);
  CHECK(slurp(svg).find("<svg") == 0);

  SUBCASE("render draws the stored trajectory") {
    std::string svg2 = temp_path("d1_render.svg");
    auto rr = run_cli("render --workspace " + ws + " --traj " + traj + " --out " + svg2);
    CHECK(rr.exit_code == 0);
    CHECK(slurp(svg2).find("class=\"suffix\"") != std::string::npos);
  }
  SUBCASE("both algorithms agree through the CLI") {
    auto rb = run_cli("plan --workspace " + ws + " --query \"[](<>p1 && <>p2)\" --algo baseline");
    CHECK(rb.exit_code == 0);
    CHECK(rb.output.find("suffix cost: 6") != std::string::npos);
  }
}

TEST_CASE("cli plan: unsatisfiable exits 2, bad input exits 1") {
  std::string ws = temp_path("d1b.json");
  write_temp(ws, fixtures::d1().to_json());

  auto r = run_cli("plan --workspace " + ws + " --query false");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unsatisfiable") != std::string::npos);

  std::string bad = temp_path("bad.txt");
  write_temp(bad, "dims: 2 2\nconnectivity: 4\nS?\n..\n");
  auto rb = run_cli("plan --workspace " + bad + " --query \"[]<>p1\"");
  CHECK(rb.exit_code == 1);
  CHECK(rb.output.find("error") != std::string::npos);

  auto rq = run_cli("plan --workspace " + ws + " --query \"p1 U\"");
  CHECK(rq.exit_code == 1);
  CHECK(rq.output.find("offset") != std::string::npos);

  auto rm = run_cli("plan --workspace /no/such/file --query \"[]<>p1\"");
  CHECK(rm.exit_code == 1);
}

TEST_CASE("cli plan: imported automaton document") {
  std::string ws = temp_path("grid8.txt");
  std::ifstream fixture(std::string(TSTAR_TEST_DATA_DIR) + "/example_grid.txt");
  std::ostringstream ss;
  ss << fixture.rdbuf();
  write_temp(ws, ss.str());

  auto r = run_cli("plan --workspace " + ws + " --automaton " +
                   std::string(TSTAR_TEST_DATA_DIR) + "/fig2_automaton.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("suffix cost:") != std::string::npos);
}

TEST_CASE("cli compare: reports both algorithms and the speedup") {
  std::string ws = temp_path("d1c.json");
  write_temp(ws, fixtures::d1().to_json());
  auto r = run_cli("compare --workspace " + ws + " --query \"@phi_c\" --reps 2");
  CHECK(r.exit_code == 2);  // d1 lacks p3..p5, phi_c is unsatisfiable here

  auto r2 = run_cli("compare --workspace " + ws + " --query \"[](<>p1 && <>p2)\" --reps 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("baseline") != std::string::npos);
  CHECK(r2.output.find("tstar") != std::string::npos);
  CHECK(r2.output.find("speedup") != std::string::npos);
}

TEST_CASE("cli generate + sweep: determinism end to end") {
  std::string ws = temp_path("gen.json");
  auto g = run_cli("generate --dims 20x20 --connectivity 8 --density 0.1 --gather 3 --upload 2 "
                   "--seed 5 --out " + ws);
  CHECK(g.exit_code == 0);
  std::string first = slurp(ws);
  run_cli("generate --dims 20x20 --connectivity 8 --density 0.1 --gather 3 --upload 2 --seed 5 "
          "--out " + ws);
  CHECK(slurp(ws) == first);

  std::string table = temp_path("sweep.csv");
  std::string cmd = "sweep --workspace " + ws +
                    " --query \"@phi_d\" --axis obstacle-density --values 0.05,0.15 --reps 1 "
                    "--seed 5 --stable-output --out " + table;
  auto s1 = run_cli(cmd);
  CHECK(s1.exit_code == 0);
  std::string t1 = slurp(table);
  auto s2 = run_cli(cmd);
  CHECK(s2.exit_code == 0);
  CHECK(slurp(table) == t1);
  CHECK(t1.find("value,workspace") == 0);
}

TEST_CASE("cli render: 3-D workspaces need --layers") {
  std::string ws = temp_path("w3.json");
  tstar::GridWorkspace w3(3, 3, 2, tstar::Connectivity::Six, {0, 0, 0});
  w3.add_label({2, 2, 1}, "p1");
  w3.validate();
  write_temp(ws, w3.to_json());

  std::string traj = temp_path("w3_traj.json");
  auto p = run_cli("plan --workspace " + ws + " --query \"[]<>p1\" --out " + traj);
  CHECK(p.exit_code == 0);

  std::string svg = temp_path("w3.svg");
  auto flat = run_cli("render --workspace " + ws + " --traj " + traj + " --out " + svg);
  CHECK(flat.exit_code == 1);
  CHECK(flat.output.find("3-D") != std::string::npos);

  auto sliced = run_cli("render --workspace " + ws + " --traj " + traj + " --out " + svg +
                        " --layers");
  CHECK(sliced.exit_code == 0);
  CHECK(slurp(svg).find("<svg") == 0);
}
