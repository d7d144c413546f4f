// fracfem command line: Mittag-Leffler evaluation, single solves, the three
// convergence studies and the stability probe. Every config-driven run writes
// CSV files plus manifest.json into the configured output directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <CLI11.hpp>
#include <json.hpp>

#include "fracfem/cases.hpp"
#include "fracfem/config.hpp"
#include "fracfem/convergence.hpp"
#include "fracfem/fem.hpp"
#include "fracfem/mittag_leffler.hpp"
#include "fracfem/parallel.hpp"
#include "fracfem/semidiscrete.hpp"
#include "fracfem/timestepper.hpp"

namespace fs = std::filesystem;
using namespace fracfem;
using nlohmann::ordered_json;

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Run {
 public:
  Run(std::string command, const fs::path& config_path)
      : command_(std::move(command)), config_(load_config(config_path)), start_(clock::now()) {
    fs::create_directories(config_.output_dir);
  }

  const RunConfig& config() const { return config_; }
  DataCase data() const { return make_case(config_.case_name, config_.orders); }

  void write(const std::string& name, const std::string& text) {
    std::ofstream os(config_.output_dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (config_.output_dir / name).string());
    os << text;
    outputs_.push_back(name);
  }

  void record(const std::string& name) { outputs_.push_back(name); }

  void lap(const std::string& stage) {
    const auto now = clock::now();
    timings_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

  void finish() {
    ordered_json m;
    m["command"] = command_;
    m["case"] = config_.case_name;
    m["config_hash"] = hex64(config_.hash);
    m["config"] = ordered_json::parse(config_.canonical);
    m["versions"] = {{"fracfem", FRACFEM_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION},
                     {"compiler", __VERSION__}};
    m["threads"] = worker_count();
    m["timings"] = timings_;
    m["timings"]["total_seconds"] = std::chrono::duration<double>(clock::now() - start_).count();
    m["outputs"] = outputs_;
    std::ofstream os(config_.output_dir / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
    std::cout << "wrote " << outputs_.size() << " file(s) and manifest.json to "
              << config_.output_dir.string() << '\n';
  }

 private:
  using clock = std::chrono::steady_clock;
  std::string command_;
  RunConfig config_;
  clock::time_point start_;
  clock::time_point last_ = clock::now();
  ordered_json timings_ = ordered_json::object();
  std::vector<std::string> outputs_;
};

std::vector<int> space_ladder(const RunConfig& c) {
  std::vector<int> out = c.resolutions.empty() ? std::vector<int>{8, 16, 32, 64} : c.resolutions;
  if (!c.aligned) {
    for (int& n : out) ++n;
  }
  return out;
}

void summarize(const ConvergenceReport& r) {
  std::printf("%s %s t=%s: rate_l2=%.4g (theory %.4g) rate_h1=%.4g (theory %.4g)%s\n",
              r.case_name.c_str(), r.study.c_str(), number(r.t_eval).c_str(), r.rate_l2,
              r.theory_l2, r.rate_h1, r.theory_h1, r.flagged ? " [flagged]" : "");
  for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

std::string nodal_rows(const Mesh& mesh, double t, const Vector& c, bool header) {
  std::string out = header ? "t,dof,x,y,value\n" : "";
  for (int i = 0; i < c.size(); ++i) {
    const auto p = mesh.dof_point(i);
    out += number(t) + ',' + std::to_string(i) + ',' + number(p[0]) + ',' + number(p[1]) + ',' +
           number(c[i]) + '\n';
  }
  return out;
}

Vector source_projection(const FemSystem& s, const std::vector<SourceTerm>& sources,
                         const std::vector<Vector>& projected, double t) {
  Vector f = Vector::Zero(s.dofs());
  for (std::size_t i = 0; i < sources.size(); ++i) f += sources[i].time(t) * projected[i];
  return f;
}

int cmd_solve(const fs::path& cfg, bool dump, int checkpoint_every) {
  Run run("solve", cfg);
  const RunConfig& c = run.config();
  const DataCase data = run.data();
  const FemSystem s = assemble(Mesh::uniform(c.domain, c.resolution));
  if (dump) {
    dump_system(s, c.output_dir / "system");
    run.record("system/");
    run.lap("dump_seconds");
  }

  const SemidiscreteSolution semi(s, c.orders, data.initial, data.regularity, data.sources);
  std::string table;
  for (std::size_t i = 0; i < c.t_eval.size(); ++i) {
    table += nodal_rows(s.mesh(), c.t_eval[i], semi.evolve(c.t_eval[i]), i == 0);
  }
  run.write("semidiscrete.csv", table);
  run.lap("semidiscrete_seconds");

  const int steps = c.steps.empty() ? 100 : c.steps.back();
  const TimeGrid grid(c.orders.horizon(), steps);
  std::vector<int> marks;
  if (checkpoint_every > 0) {
    for (int n = 0; n <= steps; n += checkpoint_every) marks.push_back(n);
  }
  const Trajectory traj = solve_fully_discrete(s, c.orders, grid, semi.initial(), data.sources, marks);
  run.write("fully_discrete.csv", nodal_rows(s.mesh(), traj.times.back(), traj.states.back(), true));
  if (checkpoint_every > 0) {
    std::string rows = "t,dof,value\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      for (int i = 0; i < traj.states[k].size(); ++i) {
        rows += number(traj.times[k]) + ',' + std::to_string(i) + ',' + number(traj.states[k][i]) + '\n';
      }
    }
    run.write("checkpoints.csv", rows);
  }
  run.lap("fully_discrete_seconds");
  const Vector gap = traj.states.back() - semi.evolve(grid.horizon);
  std::printf("%s: %d dofs, K=%d, ||U^K - u_h(T)||_L2 = %.6g\n", data.name.c_str(), s.dofs(), steps,
              l2_norm(s, gap));
  run.finish();
  return 0;
}

int cmd_space(const fs::path& cfg) {
  Run run("converge-space", cfg);
  const RunConfig& c = run.config();
  SpaceStudyOptions opts;
  opts.tolerance = c.rate_tolerance;
  opts.reference_modes = c.reference_modes;
  const auto reports = run_convergence_space(run.data(), c.orders, c.t_eval, space_ladder(c), opts);
  run.lap("study_seconds");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    run.write("converge_space_" + std::to_string(i) + ".csv", emit_table(reports[i]));
    summarize(reports[i]);
  }
  run.finish();
  return 0;
}

int cmd_time(const fs::path& cfg) {
  Run run("converge-time", cfg);
  const RunConfig& c = run.config();
  TimeStudyOptions opts;
  opts.tolerance = c.rate_tolerance;
  const std::vector<int> steps = c.steps.empty() ? std::vector<int>{10, 20, 40, 80} : c.steps;
  const auto report = run_convergence_time(run.data(), c.orders, c.resolution, steps, opts);
  run.lap("study_seconds");
  run.write("converge_time.csv", emit_table(report));
  summarize(report);
  run.finish();
  return 0;
}

int cmd_blowup(const fs::path& cfg) {
  Run run("blowup", cfg);
  const RunConfig& c = run.config();
  SpaceStudyOptions opts;
  opts.reference_modes = c.reference_modes;
  const std::vector<double> times =
      c.times.empty() ? std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6} : c.times;
  const auto report = run_blowup_study(run.data(), c.orders, c.resolution, times, opts, c.rate_tolerance);
  run.lap("study_seconds");
  run.write("blowup.csv", emit_table(report));
  summarize(report);
  run.finish();
  return 0;
}

int cmd_stability(const fs::path& cfg) {
  Run run("stability", cfg);
  const RunConfig& c = run.config();
  const DataCase data = run.data();
  const FemSystem s = assemble(Mesh::uniform(c.domain, c.resolution));
  const Vector u0 = l2_project(s, data.initial);
  std::vector<Vector> projected;
  for (const auto& src : data.sources) projected.push_back(l2_project(s, src.space));
  const std::vector<int> ladder = c.steps.empty() ? std::vector<int>{1, 10, 100} : c.steps;
  std::string rows = "steps,tau,max_norm,bound,constant,holds\n";
  bool all = true;
  for (int k : ladder) {
    const TimeGrid grid(c.orders.horizon(), k);
    const auto r = stability_probe(s, c.orders, grid, u0, [&](int n) {
      return source_projection(s, data.sources, projected, grid.node(n));
    });
    rows += std::to_string(k) + ',' + number(grid.tau()) + ',' + number(r.max_norm) + ',' +
            number(r.bound) + ',' + number(r.constant) + ',' + (r.holds ? "1" : "0") + '\n';
    std::printf("K=%d: max ||U^n|| = %.6g, bound = %.6g%s\n", k, r.max_norm, r.bound,
                r.holds ? "" : "  VIOLATED");
    all = all && r.holds;
  }
  run.lap("probe_seconds");
  run.write("stability.csv", rows);
  run.finish();
  return all ? 0 : 1;
}

int cmd_mml(const std::vector<double>& betas, double beta0, const std::vector<double>& z, double tol,
            const std::string& method) {
  const MLParams p{betas, beta0};
  MLEvalResult r;
  if (method == "series") {
    r = mml_eval(p, z, tol);
  } else if (method == "contour") {
    r = mml_contour(p, z);
  } else {
    r = mml_value(p, z, tol);
  }
  std::printf("%.16g\n", r.value);
  std::fprintf(stderr, "method=%s terms=%d tail_bound=%.3g\n",
               r.method == MLMethod::Series ? "series" : "contour", r.terms_used, r.tail_bound);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-term time-fractional diffusion: FEM solver and convergence harness"};
  app.set_version_flag("--version", std::string(FRACFEM_VERSION));
  app.require_subcommand(1);

  std::vector<double> betas;
  std::vector<double> zs;
  double beta0 = 1.0;
  double tol = 1e-12;
  std::string method = "auto";
  auto* mml = app.add_subcommand("mml", "evaluate the multinomial Mittag-Leffler function");
  mml->add_option("--betas", betas, "parameters b_1..b_m")->required();
  mml->add_option("--beta0", beta0, "parameter b_0")->required();
  mml->add_option("--z", zs, "arguments z_1..z_m (nonpositive)")->required();
  mml->add_option("--tol", tol, "series tolerance");
  mml->add_option("--method", method)->check(CLI::IsMember({"auto", "series", "contour"}));

  fs::path config;
  bool dump = false;
  int checkpoint_every = 0;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  };
  auto* solve = app.add_subcommand("solve", "semidiscrete and fully discrete solution of one case");
  add_config(solve);
  solve->add_flag("--dump-system", dump, "write mesh, mass and stiffness in COO form");
  solve->add_option("--checkpoints", checkpoint_every, "record every N-th time step (t, dof, value)");
  auto* space = app.add_subcommand("converge-space", "spatial convergence study");
  add_config(space);
  auto* time = app.add_subcommand("converge-time", "temporal convergence study");
  add_config(time);
  auto* blow = app.add_subcommand("blowup", "error growth as t -> 0 at a fixed mesh");
  add_config(blow);
  auto* stab = app.add_subcommand("stability", "check the a priori stability bound");
  add_config(stab);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*mml) return cmd_mml(betas, beta0, zs, tol, method);
    if (*solve) return cmd_solve(config, dump, checkpoint_every);
    if (*space) return cmd_space(config);
    if (*time) return cmd_time(config);
    if (*blow) return cmd_blowup(config);
    if (*stab) return cmd_stability(config);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "fracfem: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fracfem: %s\n", e.what());
    return 1;
  }
  return 0;
}
