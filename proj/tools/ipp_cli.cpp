// Experiment driver: graph generation, benchmark sweeps, simulator
// episodes, trace replay and a quick property-check suite.
//
// Subcommands: gen-graph, bench, sim, replay, verify. Options may come
// from a JSON config file (--config); command-line flags override it.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipp/executor.hpp"
#include "ipp/worldsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ipp;

namespace {

// --- Shared helpers ---------------------------------------------------------

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  in >> j;
  return j;
}

template <class T>
void cfg_override(const CLI::Option* opt, const json& cfg, const char* key,
                  T& target) {
  if (opt->count() == 0 && cfg.contains(key)) target = cfg.at(key).get<T>();
}

// Planner token: nbs:B, dbs:B, spt:ALPHA, tsp:ALPHA, oracle.
PlannerSpec planner_from_token(const std::string& token) {
  auto colon = token.find(':');
  std::string name = token.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
  if (name == "oracle") return PlannerSpec::oracle();
  if (arg.empty())
    throw std::invalid_argument("planner token needs a parameter: " + token);
  if (name == "nbs") return PlannerSpec::nbs(std::stoul(arg));
  if (name == "dbs") return PlannerSpec::dbs(std::stoul(arg));
  if (name == "spt") return PlannerSpec::spt(std::stod(arg));
  if (name == "tsp") return PlannerSpec::tsp(std::stod(arg));
  throw std::invalid_argument("unknown planner: " + token);
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs), s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / (xs.size() - 1));
}

GainMode mode_from_name(const std::string& name) {
  if (name == "scattered") return GainMode::Scattered;
  if (name == "clustered") return GainMode::Clustered;
  throw std::invalid_argument("unknown gain mode: " + name);
}

// --- gen-graph --------------------------------------------------------------

int cmd_gen_graph(const GridGraphSpec& spec, const std::string& out) {
  PlanGraph g = generate_grid(spec);
  save_graph(g, out);
  std::cout << "wrote " << out << " (" << g.num_vertices() << " vertices, "
            << g.num_edges() << " directed edges)\n";
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchOptions {
  double extent = 25.0;
  std::string mode = "scattered";
  double budget = 50.0;
  int seeds = 5;
  std::uint64_t seed_base = 0;
  bool online = false;
  double rho = 5.0;
  std::vector<std::string> planners;    // empty => default grid
  std::vector<std::string> criteria{"expected_gain"};
  std::vector<std::string> strategies{"every_node"};
  std::string out_dir = "bench_out";
  unsigned threads = std::thread::hardware_concurrency();
};

struct BenchCell {
  PlannerSpec planner;
  Criterion criterion;
  ReplanStrategy strategy;
};

struct EpisodeRow {
  std::string planner, criterion, strategy;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double gain = 0.0, cost = 0.0, plan_time = 0.0;
  std::uint64_t plans = 0;
  std::vector<VertexId> visited;
};

std::vector<std::string> default_planner_grid() {
  return {"dbs:1", "dbs:100", "dbs:10000", "nbs:1",   "nbs:10",
          "nbs:100", "spt:0.5", "spt:0.75", "spt:1.0", "tsp:0.5",
          "tsp:0.75", "tsp:1.0"};
}

int cmd_bench(const BenchOptions& opt) {
  std::vector<std::string> planner_tokens =
      opt.planners.empty() ? default_planner_grid() : opt.planners;

  std::vector<BenchCell> cells;
  for (const auto& pt : planner_tokens)
    for (const auto& cn : opt.criteria)
      for (const auto& sn : opt.strategies) {
        BenchCell cell{planner_from_token(pt), criterion_from_name(cn),
                       strategy_from_name(sn)};
        // Skip combinations the executor rejects by rule.
        if (cell.criterion == Criterion::PathRatio &&
            cell.strategy == ReplanStrategy::NoReplan)
          continue;
        if (opt.online && cell.strategy == ReplanStrategy::NoReplan) continue;
        cells.push_back(cell);
      }

  std::vector<std::vector<EpisodeRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = std::max(1u, opt.threads);

  auto run_cell = [&](std::size_t ci) {
    const BenchCell& cell = cells[ci];
    for (int s = 0; s < opt.seeds; ++s) {
      EpisodeRow row;
      row.planner = cell.planner.label();
      row.criterion = criterion_name(cell.criterion);
      row.strategy = strategy_name(cell.strategy);
      row.seed = opt.seed_base + static_cast<std::uint64_t>(s);
      GridGraphSpec spec;
      spec.extent = opt.extent;
      spec.gain_mode = mode_from_name(opt.mode);
      spec.cluster_radius = opt.extent >= 50.0 ? 5.0 : 2.5;
      spec.seed = row.seed;
      try {
        PlanGraph g = generate_grid(spec);
        std::optional<PerceptionState> per;
        if (opt.online) per.emplace(g, opt.rho);
        EpisodeResult r =
            run_episode(g, 0, opt.budget, cell.planner, cell.criterion,
                        cell.strategy, per ? &*per : nullptr);
        row.gain = r.collected_gain;
        row.cost = r.cost_used;
        row.plan_time = r.plan_time_total;
        row.plans = r.plans;
        row.visited = r.visited;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      results[ci].push_back(std::move(row));
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t ci = next.fetch_add(1);
        if (ci >= cells.size()) return;
        run_cell(ci);
      }
    });
  for (auto& t : pool) t.join();

  // Single collector writes both files.
  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "summary.csv");
  std::ofstream traces(fs::path(opt.out_dir) / "traces.jsonl");
  csv << "scenario,planner,criterion,strategy,seeds,failures,mean_gain,"
         "std_gain,mean_plan_time_s,std_plan_time_s,mean_plans\n";
  std::ostringstream scenario;
  scenario << (opt.online ? "online" : "a_priori") << "_" << opt.mode << "_"
           << opt.extent << "m_C" << opt.budget;

  int failures = 0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> gains, times, plans;
    int cell_failures = 0;
    for (const auto& row : results[ci]) {
      json t{{"planner", row.planner},
             {"criterion", row.criterion},
             {"strategy", row.strategy},
             {"seed", row.seed},
             {"failed", row.failed}};
      if (row.failed) {
        t["error"] = row.error;
      } else {
        t["gain"] = row.gain;
        t["cost"] = row.cost;
        t["plan_time_s"] = row.plan_time;
        t["plans"] = row.plans;
        t["visited"] = row.visited;
      }
      traces << t.dump() << "\n";
      if (row.failed) {
        ++cell_failures;
        continue;
      }
      gains.push_back(row.gain);
      times.push_back(row.plan_time);
      plans.push_back(static_cast<double>(row.plans));
    }
    failures += cell_failures;
    const auto& first = results[ci].front();
    csv << scenario.str() << "," << first.planner << "," << first.criterion
        << "," << first.strategy << "," << opt.seeds << "," << cell_failures
        << "," << mean(gains) << "," << stddev(gains) << "," << mean(times)
        << "," << stddev(times) << "," << mean(plans) << "\n";
  }
  std::cout << "bench: " << cells.size() << " cells x " << opt.seeds
            << " seeds, " << failures << " failed episodes -> " << opt.out_dir
            << "\n";
  return failures == 0 ? 0 : 1;
}

// --- sim --------------------------------------------------------------------

struct SimOptions {
  std::string task = "points";  // points | exploration | surface
  double budget = 120.0;
  int seeds = 10;
  std::uint64_t seed_base = 0;
  std::vector<std::string> planners{"nbs:1"};
  std::string criterion = "expected_gain";
  std::string world_file;  // optional fixed world template
  std::string out_dir = "sim_out";
  double world_size = 10.0;
  int world_walls = 2;
  int world_points = 40;
  unsigned threads = std::thread::hardware_concurrency();
};

SimConfig sim_config_for(const std::string& task, const PlannerSpec& planner,
                         const std::string& criterion, double budget,
                         std::uint64_t seed) {
  SimConfig cfg;
  cfg.planner = planner;
  cfg.criterion = criterion_from_name(criterion);
  cfg.budget_s = budget;
  cfg.seed = seed;
  if (task == "points") {
    cfg.gain.kind = GainKind::PointCollection;
    cfg.annulus = AnnulusParams(1.0, 2.0, 20, 15);
  } else if (task == "exploration") {
    cfg.gain.kind = GainKind::Volumetric;
    cfg.annulus = AnnulusParams(1.5, 3.0, 20, 10);
  } else if (task == "surface") {
    cfg.gain.kind = GainKind::SurfaceFrontier;
    cfg.annulus = AnnulusParams(1.5, 3.0, 20, 10);
  } else {
    throw std::invalid_argument("unknown task: " + task);
  }
  return cfg;
}

World2D sim_world_for(const SimOptions& opt, std::uint64_t seed) {
  if (!opt.world_file.empty()) {
    std::ifstream in(opt.world_file);
    if (!in) throw std::runtime_error("cannot open " + opt.world_file);
    json j;
    in >> j;
    return world_from_json(j);
  }
  Rng rng(derive_seed(seed, 7));
  return make_room_world(rng, opt.world_size, opt.world_size, opt.world_walls,
                         opt.task == "points" ? opt.world_points : 0);
}

struct SimRow {
  std::string planner;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double realized = 0.0;
  std::uint64_t plans = 0;
  std::size_t steps = 0;
  std::size_t unknown_final = 0;
  json episode;  // replayable record
};

int cmd_sim(const SimOptions& opt) {
  struct Task {
    PlannerSpec planner;
    std::string token;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& token : opt.planners)
    for (int s = 0; s < opt.seeds; ++s)
      tasks.push_back({planner_from_token(token), token,
                       opt.seed_base + static_cast<std::uint64_t>(s)});

  std::vector<SimRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, opt.threads); ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        const Task& task = tasks[i];
        SimRow& row = rows[i];
        row.planner = task.planner.label();
        row.seed = task.seed;
        try {
          World2D world = sim_world_for(opt, task.seed);
          SimConfig cfg = sim_config_for(opt.task, task.planner, opt.criterion,
                                         opt.budget, task.seed);
          Pose start = default_start(world);
          SimResult r = run_sim(world, start, cfg);
          row.realized = r.realized_gain;
          row.plans = r.plans;
          row.steps = r.trace.size();
          row.unknown_final = r.trace.empty() ? 0 : r.trace.back().unknown;
          row.episode = json{{"task", opt.task},
                             {"planner", task.token},
                             {"criterion", opt.criterion},
                             {"budget", opt.budget},
                             {"seed", task.seed},
                             {"start", {start.position.x, start.position.y,
                                        start.yaw}},
                             {"world", world_to_json(world)},
                             {"trace", r.trace_jsonl()}};
        } catch (const std::exception& e) {
          row.failed = true;
          row.error = e.what();
        }
      }
    });
  for (auto& t : pool) t.join();

  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "sim_summary.csv");
  csv << "task,planner,seed,failed,realized_gain,plans,steps,unknown_final\n";
  int failures = 0;
  for (auto& row : rows) {
    csv << opt.task << "," << row.planner << "," << row.seed << ","
        << (row.failed ? 1 : 0) << "," << row.realized << "," << row.plans
        << "," << row.steps << "," << row.unknown_final << "\n";
    if (row.failed) {
      std::cerr << "episode " << row.planner << " seed " << row.seed
                << " failed: " << row.error << "\n";
      ++failures;
      continue;
    }
    std::ostringstream name;
    name << "episode_" << row.planner << "_" << row.seed << ".json";
    std::ofstream out(fs::path(opt.out_dir) / name.str());
    out << row.episode.dump() << "\n";
  }
  std::cout << "sim: " << rows.size() << " episodes, " << failures
            << " failed -> " << opt.out_dir << "\n";
  return failures == 0 ? 0 : 1;
}

// --- replay -----------------------------------------------------------------

int cmd_replay(const std::string& episode_file) {
  std::ifstream in(episode_file);
  if (!in) {
    std::cerr << "cannot open " << episode_file << "\n";
    return 1;
  }
  json j;
  in >> j;
  World2D world = world_from_json(j.at("world"));
  SimConfig cfg = sim_config_for(
      j.at("task").get<std::string>(),
      planner_from_token(j.at("planner").get<std::string>()),
      j.at("criterion").get<std::string>(), j.at("budget").get<double>(),
      j.at("seed").get<std::uint64_t>());
  auto s = j.at("start");
  Pose start{{s.at(0).get<double>(), s.at(1).get<double>()},
             s.at(2).get<double>()};
  SimResult r = run_sim(world, start, cfg);
  if (r.trace_jsonl() == j.at("trace").get<std::string>()) {
    std::cout << "replay OK: trace is byte-identical (" << r.trace.size()
              << " steps)\n";
    return 0;
  }
  std::cerr << "replay MISMATCH\n";
  return 1;
}

// --- verify -----------------------------------------------------------------

bool check(const char* name, bool ok, int& failures) {
  std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
  if (!ok) ++failures;
  return ok;
}

PlanGraph small_random_graph(Rng& rng, int vertices, int undirected) {
  PlanGraph g;
  for (int i = 0; i < vertices; ++i)
    g.add_vertex(Vec2{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)},
                 rng.uniform(0.0, 10.0));
  int edges = 0;
  for (int i = 1; i < vertices && edges < undirected; ++i) {
    auto j2 = static_cast<VertexId>(rng.uniform_index(i));
    g.add_edge_sym(j2, static_cast<VertexId>(i), rng.uniform(0.5, 4.0));
    ++edges;
  }
  int attempts = 4 * undirected;
  while (edges < undirected && attempts-- > 0) {
    auto a = static_cast<VertexId>(rng.uniform_index(vertices));
    auto b = static_cast<VertexId>(rng.uniform_index(vertices));
    if (a == b || g.has_edge(a, b)) continue;
    g.add_edge_sym(a, b, rng.uniform(0.5, 4.0));
    ++edges;
  }
  return g;
}

int cmd_verify() {
  int failures = 0;
  Rng rng(7001);

  {  // Ratio-vs-expected-gain maximizer equality on random candidate sets.
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      PlanGraph g = small_random_graph(rng, 8, 12);
      std::vector<Path> cands;
      while (cands.size() < 20) {
        Path p(g, static_cast<VertexId>(rng.uniform_index(g.num_vertices())));
        int len = 1 + static_cast<int>(rng.uniform_index(6));
        for (int i = 0; i < len; ++i) {
          const auto& adj = g.out_edges(p.back());
          if (adj.empty()) break;
          p = p.extend(adj[rng.uniform_index(adj.size())].to);
        }
        if (p.cost() > 0.0) cands.push_back(p);
      }
      ok = argmax_equivalence_check(cands, 30.0);
    }
    check("expected-gain maximizer equivalence", ok, failures);
  }

  {  // Trail optimum equals the two-use walk optimum.
    bool ok = true;
    for (int trial = 0; trial < 10 && ok; ++trial) {
      PlanGraph g = small_random_graph(rng, 6, 8);
      CriterionContext ctx(Criterion::PathGain, 12.0);
      auto trails = oracle_trails(g, 0, 12.0, ctx);
      auto walks = oracle_walks(g, 0, 12.0, ctx, 2);
      ok = std::abs(quality(trails.best_path, ctx) -
                    quality(walks.best_path, ctx)) < 1e-9;
    }
    check("trail optimum matches two-use walk optimum", ok, failures);
  }

  {  // Saturating NBS matches the oracle; expansion audits hold.
    bool ok = true, audit_ok = true;
    for (int trial = 0; trial < 5 && ok; ++trial) {
      PlanGraph g = small_random_graph(rng, 7, 9);
      CriterionContext ctx(Criterion::PathGain, 14.0);
      BeamParams sat(100000, g.num_edges());
      auto beam = nbs(g, 0, 14.0, sat, ctx);
      auto oracle = oracle_trails(g, 0, 14.0, ctx);
      ok = std::abs(quality(beam.best_path, ctx) -
                    quality(oracle.best_path, ctx)) < 1e-9;
      audit_ok = audit_ok &&
                 expansion_count_audit(beam, g, sat, BeamKind::Nbs) &&
                 expansion_count_audit(dbs(g, 0, 14.0, BeamParams(4, 20), ctx),
                                       g, BeamParams(4, 20), BeamKind::Dbs);
    }
    check("saturating beam matches trail oracle", ok, failures);
    check("expansion-count audits", audit_ok, failures);
  }

  {  // Annulus connectivity, both directions, plus the degree bound.
    Grid2D grid(200, 200, 0.1, Cell::Free);
    ClearanceField xi(grid, 0.3, false);
    AnnulusParams params(1.0, 2.0, 20, 60);
    MotionModel motion;
    Rng sample_rng(7002);
    ClusterGraph cg;
    add_cluster(cg, Vec2{10.0, 10.0}, params, motion);
    for (int round = 0; round < 8; ++round)
      rrag_expand(cg, params, xi, motion, sample_rng, false);
    bool connected = cluster_components(cg) == 1;
    bool degree_ok = true;
    double bound = 4.0 * (params.l_max / params.l_min) *
                   (params.l_max / params.l_min);
    for (ClusterId c = 0; c < cg.num_clusters(); ++c)
      degree_ok = degree_ok &&
                  cg.inter_cluster_out_degree(c) <=
                      static_cast<std::size_t>(bound) * params.yaw_count;
    check("annulus graph connected at l_max = 2 l_min", connected, failures);
    check("inter-cluster degree bound", degree_ok, failures);

    // 1D counterexample: two nodes farther than l_max but closer than
    // 2 l_min can never connect.
    Grid2D strip(60, 12, 0.1, Cell::Free);
    ClearanceField sxi(strip, 0.3, false);
    AnnulusParams tight(1.0, 1.4, 40, 40);
    ClusterGraph two;
    add_cluster(two, Vec2{1.0, 0.6}, tight, motion);
    add_cluster(two, Vec2{2.7, 0.6}, tight, motion);
    check("1D counterexample stays disconnected",
          cluster_components(two) == 2, failures);
  }

  {  // Shortcut agrees with the dense interpolation oracle.
    Grid2D grid(100, 100, 0.1, Cell::Free);
    for (int iy = 30; iy < 70; ++iy)
      for (int ix = 48; ix < 52; ++ix) grid.set(ix, iy, Cell::Occupied);
    ClearanceField xi(grid, 0.3, false);
    Rng prng(7003);
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
      Vec2 a{prng.uniform(0.5, 9.5), prng.uniform(0.5, 9.5)};
      Vec2 b{prng.uniform(0.5, 9.5), prng.uniform(0.5, 9.5)};
      if (!(xi.clearance(a) > 0.0) || !(xi.clearance(b) > 0.0)) continue;
      bool dense = true;
      double len = distance(a, b);
      for (double t = 0.0; t <= len; t += 0.01)
        if (!(xi.clearance(Vec2{a.x + (b.x - a.x) * t / std::max(len, 1e-12),
                                a.y + (b.y - a.y) * t / std::max(len, 1e-12)}) >
              0.0)) {
          dense = false;
          break;
        }
      if (collision_free_edge(a, b, xi) && !dense) ok = false;
    }
    check("collision shortcut has no false accepts", ok, failures);
  }

  std::cout << (failures == 0 ? "verify: all checks passed\n"
                              : "verify: FAILURES\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informative path planning benchmark and simulation driver"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Generate a benchmark graph");
  GridGraphSpec gspec;
  std::string gen_mode = "scattered", gen_out = "graph.json", gen_config;
  auto* gen_cfg_opt = gen->add_option("--config", gen_config, "JSON config");
  auto* o_extent = gen->add_option("--extent", gspec.extent, "side length, m");
  auto* o_mode = gen->add_option("--mode", gen_mode, "scattered|clustered");
  auto* o_seed = gen->add_option("--seed", gspec.seed, "graph seed");
  auto* o_clusters =
      gen->add_option("--clusters", gspec.cluster_count, "gain clusters");
  auto* o_radius =
      gen->add_option("--cluster-radius", gspec.cluster_radius, "cluster radius");
  auto* o_out = gen->add_option("--out", gen_out, "output file");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark sweep");
  BenchOptions bopt;
  std::string bench_config;
  auto* b_cfg = bench->add_option("--config", bench_config, "JSON config");
  auto* b_extent = bench->add_option("--extent", bopt.extent, "grid extent, m");
  auto* b_mode = bench->add_option("--mode", bopt.mode, "scattered|clustered");
  auto* b_budget = bench->add_option("--budget", bopt.budget, "path budget C");
  auto* b_seeds = bench->add_option("--seeds", bopt.seeds, "instances per cell");
  auto* b_seed_base =
      bench->add_option("--seed-base", bopt.seed_base, "first seed");
  auto* b_online = bench->add_flag("--online", bopt.online, "online perception");
  auto* b_rho = bench->add_option("--rho", bopt.rho, "perception radius, m");
  auto* b_planners = bench->add_option("--planner", bopt.planners,
                                       "planner tokens (default: full grid)");
  auto* b_criteria =
      bench->add_option("--criterion", bopt.criteria, "criterion names");
  auto* b_strategies =
      bench->add_option("--strategy", bopt.strategies, "replan strategies");
  auto* b_out = bench->add_option("--out-dir", bopt.out_dir, "output directory");
  auto* b_threads = bench->add_option("--threads", bopt.threads, "worker threads");

  // sim
  auto* sim = app.add_subcommand("sim", "Run simulator episodes");
  SimOptions sopt;
  std::string sim_config;
  auto* s_cfg = sim->add_option("--config", sim_config, "JSON config");
  auto* s_task =
      sim->add_option("--task", sopt.task, "points|exploration|surface");
  auto* s_budget = sim->add_option("--budget", sopt.budget, "sim-seconds");
  auto* s_seeds = sim->add_option("--seeds", sopt.seeds, "episodes per planner");
  auto* s_seed_base =
      sim->add_option("--seed-base", sopt.seed_base, "first seed");
  auto* s_planners =
      sim->add_option("--planner", sopt.planners, "planner tokens");
  auto* s_criterion =
      sim->add_option("--criterion", sopt.criterion, "criterion name");
  auto* s_world = sim->add_option("--world", sopt.world_file,
                                  "fixed world template JSON");
  auto* s_out = sim->add_option("--out-dir", sopt.out_dir, "output directory");
  auto* s_size = sim->add_option("--world-size", sopt.world_size, "room size, m");
  auto* s_walls =
      sim->add_option("--world-walls", sopt.world_walls, "interior walls");
  auto* s_points =
      sim->add_option("--world-points", sopt.world_points, "collectible points");
  auto* s_threads = sim->add_option("--threads", sopt.threads, "worker threads");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a stored episode");
  std::string episode_file;
  replay->add_option("episode", episode_file, "episode record JSON")
      ->required();

  // verify
  app.add_subcommand("verify", "Run the quick property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      json cfg = load_config(gen_config);
      (void)gen_cfg_opt;
      cfg_override(o_extent, cfg, "extent", gspec.extent);
      cfg_override(o_mode, cfg, "mode", gen_mode);
      cfg_override(o_seed, cfg, "seed", gspec.seed);
      cfg_override(o_clusters, cfg, "clusters", gspec.cluster_count);
      cfg_override(o_radius, cfg, "cluster_radius", gspec.cluster_radius);
      cfg_override(o_out, cfg, "out", gen_out);
      gspec.gain_mode = mode_from_name(gen_mode);
      return cmd_gen_graph(gspec, gen_out);
    }
    if (bench->parsed()) {
      json cfg = load_config(bench_config);
      cfg_override(b_extent, cfg, "extent", bopt.extent);
      cfg_override(b_mode, cfg, "mode", bopt.mode);
      cfg_override(b_budget, cfg, "budget", bopt.budget);
      cfg_override(b_seeds, cfg, "seeds", bopt.seeds);
      cfg_override(b_seed_base, cfg, "seed_base", bopt.seed_base);
      cfg_override(b_online, cfg, "online", bopt.online);
      cfg_override(b_rho, cfg, "rho", bopt.rho);
      cfg_override(b_planners, cfg, "planners", bopt.planners);
      cfg_override(b_criteria, cfg, "criteria", bopt.criteria);
      cfg_override(b_strategies, cfg, "strategies", bopt.strategies);
      cfg_override(b_out, cfg, "out_dir", bopt.out_dir);
      cfg_override(b_threads, cfg, "threads", bopt.threads);
      return cmd_bench(bopt);
    }
    if (sim->parsed()) {
      json cfg = load_config(sim_config);
      cfg_override(s_task, cfg, "task", sopt.task);
      cfg_override(s_budget, cfg, "budget", sopt.budget);
      cfg_override(s_seeds, cfg, "seeds", sopt.seeds);
      cfg_override(s_seed_base, cfg, "seed_base", sopt.seed_base);
      cfg_override(s_planners, cfg, "planners", sopt.planners);
      cfg_override(s_criterion, cfg, "criterion", sopt.criterion);
      cfg_override(s_world, cfg, "world", sopt.world_file);
      cfg_override(s_out, cfg, "out_dir", sopt.out_dir);
      cfg_override(s_size, cfg, "world_size", sopt.world_size);
      cfg_override(s_walls, cfg, "world_walls", sopt.world_walls);
      cfg_override(s_points, cfg, "world_points", sopt.world_points);
      cfg_override(s_threads, cfg, "threads", sopt.threads);
      return cmd_sim(sopt);
    }
    if (replay->parsed()) return cmd_replay(episode_file);
    return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
