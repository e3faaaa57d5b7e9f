#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tstar/planner.hpp"
#include "tstar/translate.hpp"

namespace tstar::bench {

/// Queries shipped with the harness, addressable as "@name" wherever a
/// query string is accepted. phi_c and phi_d are the classic
/// gather-then-upload surveillance queries over p1..p3 (gather) and
/// p4, p5 (upload); the rest are additional patterns defined here.
const std::map<std::string, std::string>& builtin_queries();

/// Expands "@name" to the stored query text; anything else passes through.
std::string resolve_query(const std::string& query);

/// The phi_c / phi_d query family for arbitrary region counts; gather
/// propositions are p1..pg, uploads p{g+1}..p{g+u}.
std::string gather_upload_query(int gathers, int uploads, bool exclusive_gather);

struct BenchRecord {
  std::string workspace_id, query_id, algorithm;
  double wall_seconds = 0;
  Cost suffix_cost = Cost::infinity();
  Cost prefix_cost = Cost::infinity();
  std::uint64_t graph_vertices = 0, graph_edges = 0;
  std::uint64_t edges_updated = 0, astar_calls = 0;
  std::uint64_t memory_bytes = 0;
};

std::string bench_csv_header();
/// stable_timing zeroes the wall-clock column so outputs diff cleanly.
std::string to_csv_row(const BenchRecord& r, bool stable_timing);

struct CompareResult {
  BenchRecord baseline, tstar;
  double speedup = 0;  // baseline mean seconds / tstar mean seconds
  bool satisfiable = false;
  PlanOutcome tstar_outcome;
};

/// Runs both planners `reps` times on the same instance and reports mean
/// wall times (translation happens before, so it is excluded). Throws
/// std::logic_error if the two planners ever disagree on the suffix cost
/// or on satisfiability.
CompareResult run_compare(const GridWorkspace& ws, const BuchiAutomaton& b, int reps,
                          const std::string& workspace_id, const std::string& query_id);

struct GenSpec {
  int width = 0, height = 0, depth = 1;
  Connectivity conn = Connectivity::Eight;
  double density = 0;           // fraction of all cells turned into obstacles
  int gather = 0, upload = 0;   // singleton labeled regions
  std::uint64_t seed = 0;
};

/// Random workspace: uniformly placed obstacles, then singleton gather /
/// upload cells on free space; the start never collides with anything.
/// Deterministic for a given spec. Throws when regions cannot be packed.
GridWorkspace generate_workspace(const GenSpec& spec);

enum class SweepAxis { ObstacleDensity, QuerySize, WorkspaceSize };

struct SweepSpec {
  SweepAxis axis;
  std::vector<double> values;  // strictly increasing
  int reps = 1;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double value = 0;
  bool skipped = false;
  BenchRecord baseline, tstar;
  double speedup = 0;
};

struct SweepContext {
  const GridWorkspace* base = nullptr;  // dims / connectivity / regions template
  std::string query;                    // ignored by the query-size axis
  int jobs = 1;
};

/// One comparison per axis value. Obstacle-density rows regenerate
/// obstacles per value, retrying up to 20 seed substreams when the query
/// comes out unsatisfiable (then the row is marked skipped). The
/// workspace-size axis rescales the grid keeping labeled cells and
/// obstacles fixed; the query-size axis grows the gather/upload family.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepContext& ctx);

std::string sweep_csv_header();
std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool stable_timing);

/// Trajectory document for a computed plan; byte-stable for fixed inputs.
std::string trajectory_json(const std::string& workspace_id, const std::string& query_id,
                            const std::string& algorithm, const PlanOutcome& outcome);

/// Reads back the concrete trajectory (costs plus cell sequences) for
/// rendering. Abstract runs are not serialized.
PlanResult trajectory_from_json(std::string_view text);

}  // namespace tstar::bench
