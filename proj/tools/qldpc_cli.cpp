#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qldpc/classical.hpp"
#include "qldpc/errors.hpp"
#include "qldpc/graph.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/io.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/sim.hpp"
#include "qldpc/ssf.hpp"
#include "qldpc/toric.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qldpc;

namespace {

// Options shared with the JSON config file. Anything given on the command
// line wins; QLDPC_WORKERS sits between the config and the flag.
struct Settings {
  std::size_t n = 0, m = 0, dv = 0, dc = 0;
  std::size_t candidates = 1;
  double select_p = 0.05;
  std::size_t select_trials = 1000;
  std::vector<double> p_grid;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

void apply_config(const std::string& path, Settings& s, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config " + path);
  const auto cfg = nlohmann::json::parse(in);
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  if (cfg.contains("graph")) {
    const auto& g = cfg["graph"];
    if (g.contains("n") && !given("--n")) s.n = g["n"];
    if (g.contains("m") && !given("--m")) s.m = g["m"];
    if (g.contains("dv") && !given("--dv")) s.dv = g["dv"];
    if (g.contains("dc") && !given("--dc")) s.dc = g["dc"];
    if (g.contains("candidates") && !given("--candidates")) s.candidates = g["candidates"];
    if (g.contains("selection")) {
      const auto& sel = g["selection"];
      if (sel.contains("p") && !given("--select-p")) s.select_p = sel["p"];
      if (sel.contains("trials") && !given("--select-trials")) s.select_trials = sel["trials"];
    }
  }
  if (cfg.contains("sweep")) {
    const auto& sw = cfg["sweep"];
    if (sw.contains("p_grid") && !given("--p-grid")) s.p_grid = sw["p_grid"].get<std::vector<double>>();
    if (sw.contains("trials") && !given("--trials")) s.trials = sw["trials"];
  }
  if (cfg.contains("seed") && !given("--seed")) s.seed = cfg["seed"];
  if (cfg.contains("workers") && !given("--workers")) s.workers = cfg["workers"];
}

unsigned resolve_workers(const Settings& s, const CLI::App& cmd) {
  if (cmd.count("--workers") > 0) return std::max(1u, s.workers);
  if (const char* env = std::getenv("QLDPC_WORKERS"); env && *env) {
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) throw ParameterError(std::string("QLDPC_WORKERS must be a positive integer, got ") + env);
    return static_cast<unsigned>(v);
  }
  if (s.workers > 0) return s.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

BiregularBipartiteGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read graph " + path);
  return read_graph(in);
}

void save_graph(const std::string& path, const BiregularBipartiteGraph& g) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write graph " + path);
  write_graph(out, g);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Graph of a parity-check matrix: variables on the left, checks on the right.
BiregularBipartiteGraph graph_of_matrix(const SparseBitMatrix& h) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < h.n_rows(); ++r) {
    for (Index c : h.row(r)) edges.push_back({c, static_cast<Index>(r)});
  }
  const std::size_t dl = h.n_cols() == 0 ? 0 : edges.size() / h.n_cols();
  const std::size_t dr = h.n_rows() == 0 ? 0 : edges.size() / h.n_rows();
  return BiregularBipartiteGraph(h.n_cols(), h.n_rows(), dl, dr, std::move(edges));
}

json graph_summary(const BiregularBipartiteGraph& g) {
  return json{{"n", g.n_left()}, {"m", g.n_right()}, {"dv", g.deg_left()}, {"dc", g.deg_right()}};
}

// Generates `candidates` graphs and keeps the one flip decodes best.
BiregularBipartiteGraph generate_selected(const Settings& s, unsigned workers, json* report) {
  if (s.candidates == 0) throw ParameterError("--candidates must be at least 1");
  std::vector<BiregularBipartiteGraph> pool;
  for (std::size_t i = 0; i < s.candidates; ++i) {
    const std::uint64_t seed = s.candidates == 1 ? s.seed : derive_seed(s.seed, i);
    pool.push_back(generate_configuration_model(s.n, s.m, s.dv, s.dc, seed));
  }
  if (pool.size() == 1) return pool.front();
  const auto sel = select_best_graph(pool, s.select_p, s.select_trials, s.seed, workers);
  if (report) {
    json rates = json::array();
    for (const auto& b : sel.benchmarks) rates.push_back(b.failure_rate);
    (*report)["selection"] = {{"p", s.select_p}, {"trials", s.select_trials},
                              {"chosen", sel.index}, {"failure_rates", rates}};
  }
  return pool[sel.index];
}

json profile_json(const WeightProfile& w) {
  return json{{"qubit_degrees", w.qubit_degrees},
              {"x_weights", w.x_weights},
              {"z_weights", w.z_weights},
              {"v_block_degrees", w.v_block_degrees},
              {"c_block_degrees", w.c_block_degrees}};
}

CssCode load_code_dir(const fs::path& dir) {
  return make_css_code(load_matrix(dir / "HX.txt"), load_matrix(dir / "HZ.txt"));
}

EstimateWithCI estimate_from_json(const json& j) {
  const double p = j.value("p", 0.0);
  if (j.contains("failures")) {
    return make_estimate(p, j["failures"].get<std::size_t>(), j["trials"].get<std::size_t>());
  }
  EstimateWithCI e;
  e.p = p;
  e.trials = j.value("trials", std::size_t{0});
  e.p_log = j.contains("q_log") ? j["q_log"].get<double>() : j["p_log"].get<double>();
  e.ci99 = j.value("ci99", 0.0);
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph product codes with small-set-flip decoding"};
  app.require_subcommand(1);
  Settings s;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--seed", s.seed, "Master seed");
    cmd->add_option("--workers", s.workers, "Worker threads");
  };

  // gen-graph
  std::string out_path, dump_matrix;
  auto* gen = app.add_subcommand("gen-graph", "Sample a biregular bipartite graph");
  gen->add_option("--n", s.n, "Left (variable) nodes");
  gen->add_option("--m", s.m, "Right (check) nodes");
  gen->add_option("--dv", s.dv, "Left degree");
  gen->add_option("--dc", s.dc, "Right degree");
  gen->add_option("--candidates", s.candidates, "Graphs to sample before selecting the best by flip");
  gen->add_option("--select-p", s.select_p, "Flip benchmark error rate for selection");
  gen->add_option("--select-trials", s.select_trials, "Flip benchmark trials per candidate");
  gen->add_option("--out", out_path, "Graph file to write")->required();
  gen->add_option("--dump-matrix", dump_matrix, "Also write H in the matrix text format");
  add_common(gen);

  // audit-graph
  std::string graph_path, graph2_path, side_name = "left";
  std::size_t s_max = 3;
  auto* audit = app.add_subcommand("audit-graph", "Exhaustive small-set expansion audit");
  audit->add_option("--graph", graph_path, "Graph file")->required();
  audit->add_option("--side", side_name, "left or right")->check(CLI::IsMember({"left", "right"}));
  audit->add_option("--s-max", s_max, "Largest subset size");

  // bench-flip
  std::string load_matrix_path;
  double p = 0.0;
  auto* bench = app.add_subcommand("bench-flip", "Flip decoder failure rate on a classical code");
  bench->add_option("--graph", graph_path, "Graph file");
  bench->add_option("--load-matrix", load_matrix_path, "Parity-check matrix file instead of a graph");
  bench->add_option("--p", p, "Bit-flip probability")->required();
  bench->add_option("--trials", s.trials, "Trials");
  add_common(bench);

  // build-code
  auto* build = app.add_subcommand("build-code", "Hypergraph product of one or two graphs");
  build->add_option("--graph", graph_path, "First factor graph")->required();
  build->add_option("--graph2", graph2_path, "Second factor graph (defaults to the first)");
  build->add_option("--out", out_path, "Output directory")->required();

  // decode
  std::string code_dir, syndrome_path, sector_name = "z";
  auto* dec = app.add_subcommand("decode", "Small-set-flip decoding of one syndrome");
  dec->add_option("--code", code_dir, "Directory written by build-code")->required();
  dec->add_option("--syndrome", syndrome_path, "Unsatisfied checks, one per line")->required();
  dec->add_option("--errors", sector_name, "Error type: z (X syndrome) or x (Z syndrome)")
      ->check(CLI::IsMember({"x", "z"}));

  // sweep
  std::string csv_path, json_path, code_id = "code";
  auto* sw = app.add_subcommand("sweep", "Logical error rate over a p grid");
  sw->add_option("--graph", graph_path, "First factor graph (otherwise generated from the config)");
  sw->add_option("--graph2", graph2_path, "Second factor graph");
  sw->add_option("--code", code_dir, "Directory written by build-code");
  sw->add_option("--n", s.n, "Left nodes of a generated graph");
  sw->add_option("--m", s.m, "Right nodes of a generated graph");
  sw->add_option("--dv", s.dv, "Left degree of a generated graph");
  sw->add_option("--dc", s.dc, "Right degree of a generated graph");
  sw->add_option("--candidates", s.candidates, "Graph candidates");
  sw->add_option("--select-p", s.select_p, "Selection error rate");
  sw->add_option("--select-trials", s.select_trials, "Selection trials");
  sw->add_option("--p-grid", s.p_grid, "Physical error rates")->delimiter(',');
  sw->add_option("--trials", s.trials, "Trials per grid point");
  sw->add_option("--code-id", code_id, "Identifier written to every row");
  sw->add_option("--csv", csv_path, "CSV output (stdout if omitted)");
  sw->add_option("--json", json_path, "JSON output");
  add_common(sw);

  // toric-sim
  std::size_t L = 8;
  auto* tor = app.add_subcommand("toric-sim", "Toric code with minimum-weight matching");
  tor->add_option("--L", L, "Lattice side")->required();
  tor->add_option("--p", p, "Physical error rate")->required();
  tor->add_option("--trials", s.trials, "Trials");
  add_common(tor);

  // compare
  std::string toric_path;
  auto* cmp = app.add_subcommand("compare", "Product code vs k/2 toric copies");
  cmp->add_option("--sweep", json_path, "Sweep JSON of the product code")->required();
  cmp->add_option("--toric", toric_path, "toric-sim JSON (one point or a list under \"points\")")->required();

  // threshold
  std::vector<std::string> sweep_paths;
  auto* thr = app.add_subcommand("threshold", "Sub-threshold ordering estimate");
  thr->add_option("--sweeps", sweep_paths, "Sweep JSON files of increasing N")->required()->expected(2, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!config_path.empty()) apply_config(config_path, s, *cmd);

    if (cmd == gen) {
      if (s.n == 0 || s.m == 0 || s.dv == 0 || s.dc == 0) {
        throw ParameterError("gen-graph needs --n, --m, --dv and --dc (or a config)");
      }
      json report;
      const auto g = generate_selected(s, resolve_workers(s, *cmd), &report);
      save_graph(out_path, g);
      if (!dump_matrix.empty()) save_matrix(dump_matrix, code_from_graph(g).H);
      report["graph"] = graph_summary(g);
      report["seed"] = s.seed;
      report["out"] = out_path;
      std::cout << report.dump(2) << '\n';
    } else if (cmd == audit) {
      const auto g = load_graph(graph_path);
      const Side side = side_name == "left" ? Side::kLeft : Side::kRight;
      const auto r = expansion_audit(g, side, s_max);
      std::cout << json{{"side", side_name},
                        {"max_subset_size", r.max_subset_size},
                        {"worst_ratio", r.worst_ratio},
                        {"worst_neighborhood", r.worst_neighborhood},
                        {"delta_hat", r.delta_hat},
                        {"gamma_hat", r.gamma_hat}}
                       .dump(2)
                << '\n';
    } else if (cmd == bench) {
      if (graph_path.empty() == load_matrix_path.empty()) {
        throw ParameterError("bench-flip needs exactly one of --graph and --load-matrix");
      }
      const auto g = graph_path.empty() ? graph_of_matrix(load_matrix(load_matrix_path)) : load_graph(graph_path);
      const auto b = flip_benchmark(code_from_graph(g), p, s.trials, s.seed, resolve_workers(s, *cmd));
      std::cout << json{{"failure_rate", b.failure_rate},
                        {"trials", b.trials},
                        {"ci99", b.ci99},
                        {"failures", b.failures},
                        {"p", p},
                        {"seed", s.seed}}
                       .dump(2)
                << '\n';
    } else if (cmd == build) {
      const auto g1 = load_graph(graph_path);
      const auto g2 = graph2_path.empty() ? g1 : load_graph(graph2_path);
      const CssCode code = hypergraph_product(g1, g2);
      const auto params = code_parameters(code);
      fs::create_directories(out_path);
      save_matrix(fs::path(out_path) / "HX.txt", code.hx);
      save_matrix(fs::path(out_path) / "HZ.txt", code.hz);
      json manifest{{"N", params.n},
                    {"k", params.k},
                    {"rate", params.rate},
                    {"block_split", {{"v_block", code.blocks.v_block}, {"c_block", code.blocks.c_block}}},
                    {"weight_profile", profile_json(weight_profile(code))},
                    {"graphs", {graph_path, graph2_path.empty() ? graph_path : graph2_path}}};
      std::ofstream(fs::path(out_path) / "code.json") << manifest.dump(2) << '\n';
      std::cout << manifest.dump(2) << '\n';
    } else if (cmd == dec) {
      const CssCode code = load_code_dir(code_dir);
      const Sector errors = sector_name == "z" ? Sector::kZ : Sector::kX;
      const auto catalog = build_catalog(code, errors);
      const auto support = load_support_list(syndrome_path);
      const BitVector syndrome = BitVector::from_support(code.checks_for(errors).n_rows(), support);
      DecoderOptions opts;
      opts.record_trace = true;
      const auto out = small_set_flip(catalog, syndrome, opts);
      std::cout << json{{"status", out.converged() ? "CONVERGED" : "FAIL"},
                        {"estimate", out.estimate.support()},
                        {"iterations", out.iterations},
                        {"final_syndrome_weight", out.final_syndrome_weight},
                        {"syndrome_weights", out.syndrome_weights}}
                       .dump(2)
                << '\n';
    } else if (cmd == sw) {
      const unsigned workers = resolve_workers(s, *cmd);
      if (s.p_grid.empty()) throw ParameterError("sweep needs --p-grid (or sweep.p_grid in the config)");
      std::vector<std::string> graph_files;
      std::optional<CssCode> code;
      if (!code_dir.empty()) {
        code = load_code_dir(code_dir);
        graph_files.push_back(code_dir);
      } else if (!graph_path.empty()) {
        const auto g1 = load_graph(graph_path);
        const auto g2 = graph2_path.empty() ? g1 : load_graph(graph2_path);
        code = hypergraph_product(g1, g2);
        graph_files = {graph_path, graph2_path.empty() ? graph_path : graph2_path};
      } else {
        if (s.n == 0 || s.m == 0 || s.dv == 0 || s.dc == 0) {
          throw ParameterError("sweep needs --code, --graph or graph parameters");
        }
        const auto g = generate_selected(s, workers, nullptr);
        code = hypergraph_product(g, g);
      }
      const auto catalogs = build_catalogs(*code);
      auto result = sweep(*code, catalogs, s.p_grid, s.trials, s.seed, workers, code_id);
      result.graph_files = graph_files;
      if (csv_path.empty()) {
        write_sweep_csv(std::cout, result);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw ParameterError("cannot write " + csv_path);
        write_sweep_csv(out, result);
      }
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw ParameterError("cannot write " + json_path);
        out << sweep_to_json(result) << '\n';
      }
    } else if (cmd == tor) {
      const auto code = build_toric(L);
      const auto e = toric_estimate(code, p, s.trials, s.seed, resolve_workers(s, *cmd));
      std::cout << json{{"q_log", e.p_log},
                        {"ci99", e.ci99},
                        {"trials", e.trials},
                        {"failures", e.failures},
                        {"p", p},
                        {"L", L},
                        {"seed", s.seed}}
                       .dump(2)
                << '\n';
    } else if (cmd == cmp) {
      const auto hgp = sweep_from_json(read_text(json_path));
      const auto toric_json = json::parse(read_text(toric_path));
      std::vector<EstimateWithCI> toric_points;
      if (toric_json.contains("points")) {
        for (const auto& o : toric_json["points"]) toric_points.push_back(estimate_from_json(o));
      } else {
        toric_points.push_back(estimate_from_json(toric_json));
      }
      json rows = json::array();
      for (const auto& pt : hgp.points) {
        for (const auto& t : toric_points) {
          if (t.p != pt.estimate.p) continue;
          const auto c = compare_with_toric(pt.estimate, t, hgp.k);
          rows.push_back({{"p", t.p},
                          {"k", c.k},
                          {"hgp_block_fail", c.hgp_block_fail},
                          {"hgp_ci99", c.hgp_ci99},
                          {"toric_block_fail", c.toric_block_fail},
                          {"toric_ci99", c.toric_ci99}});
        }
      }
      if (rows.empty()) throw ParameterError("no common p between the sweep and the toric results");
      std::cout << json{{"code_id", hgp.code_id}, {"N", hgp.n}, {"comparisons", rows}}.dump(2) << '\n';
    } else if (cmd == thr) {
      std::vector<SweepResult> sweeps;
      for (const auto& path : sweep_paths) sweeps.push_back(sweep_from_json(read_text(path)));
      const auto r = threshold_estimate(sweeps);
      json out{{"p_th", nullptr}, {"method_note", r.method_note}};
      if (r.p_th) out["p_th"] = *r.p_th;
      std::cout << out.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
