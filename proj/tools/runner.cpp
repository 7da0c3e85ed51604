#include "runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace meshpon::runner {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects artifacts in memory; everything is written in one pass at the end.
class Artifacts {
 public:
  Artifacts(const ExperimentConfig& config, std::string subcommand)
      : config_(config), subcommand_(std::move(subcommand)) {}

  Json header() const {
    return Json{{"tool", "meshpon"},
                {"subcommand", subcommand_},
                {"seed", config_.seed},
                {"config", to_json(config_)}};
  }

  std::string csv_preamble() const {
    return "# meshpon " + subcommand_ + " seed=" + std::to_string(config_.seed) + "\n# config=" +
           to_json(config_).dump() + "\n";
  }

  void json(const std::string& name, const Json& doc) { add(name, doc.dump(2) + "\n"); }
  void csv(const std::string& name, const std::string& body) { add(name, csv_preamble() + body); }

  void write(RunResult& result) const {
    std::error_code ec;
    std::filesystem::create_directories(config_.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config_.out_dir.string());
    for (const auto& [name, body] : files_) {
      auto path = config_.out_dir / name;
      std::ofstream out(path, std::ios::binary);
      out << body;
      if (!out) throw ConfigError("cannot write " + path.string());
      result.files.push_back(path);
    }
  }

 private:
  void add(const std::string& name, std::string body) { files_.emplace_back(name, std::move(body)); }

  const ExperimentConfig& config_;
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string fmt(double v, int precision = 10) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string case_tag(double load, int max_iterations) {
  return "load" + fixed(load, 2) + "_mi" + std::to_string(max_iterations);
}

// Runs f(i) for i in [0, n) on all hardware threads.
template <class F>
void parallel_for(std::size_t n, F f) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(workers, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

SimConfig seeded_sim(const ExperimentConfig& config) {
  SimConfig sim = config.sim;
  sim.seed = config.seed;
  return sim;
}

Json budget_row_json(const BudgetRow& r) {
  return Json{{"total_split", r.total_split},
              {"configuration", r.configuration},
              {"path", r.path == ReflectAt::Level1 ? "level1" : "level2"},
              {"loss_db", r.loss_db},
              {"class", std::string(to_string(r.loss_class))},
              {"edfa_gain_db", r.edfa_gain_db},
              {"loss_with_edfa_db", r.loss_with_edfa_db},
              {"class_with_edfa", std::string(to_string(r.loss_with_edfa_class))},
              {"required_gain_n1_db", r.required_gain_n1_db}};
}

Json sim_result_json(const SimResult& r) {
  return Json{{"estimate", meshpon::to_json(r.estimate)},
              {"frames_generated", r.frames_generated},
              {"frames_delivered", r.frames_delivered},
              {"frames_in_flight", r.frames_in_flight},
              {"measured_delivered", r.measured_delivered},
              {"min_slack_us", r.min_slack_us},
              {"wavelength_utilization", r.wavelength_utilization}};
}

// Plot view: every OLT site with its members, plus one fiber link per RU.
Json slices_view(const NetworkLayout& layout, const MaioSolution& s) {
  Json sites = Json::array();
  for (const auto& sr : s.slices) {
    Json j;
    j["olt"] = sr.slice.olt.is_co() ? Json("CO") : Json(sr.slice.olt.macro_id);
    if (sr.slice.olt.is_co()) {
      j["position"] = nullptr;
    } else {
      const auto& m = layout.macro(sr.slice.olt.macro_id);
      j["position"] = {{"x_km", m.position.x_km}, {"y_km", m.position.y_km}};
    }
    std::vector<int> ids;
    for (const auto& m : sr.slice.members) ids.push_back(m.ru_id);
    j["members"] = ids;
    j["unstable"] = sr.unstable;
    j["latency_us"] = sr.slice.members.empty() || sr.unstable ? Json(nullptr) : Json(sr.latency.mean_us);
    sites.push_back(j);
  }
  Json links = Json::array();
  for (const auto& [ru, site] : s.assignment) {
    const auto& cell = layout.cell(ru);
    links.push_back({{"ru_id", ru},
                     {"olt", site.is_co() ? Json("CO") : Json(site.macro_id)},
                     {"kind", site.is_co() ? "north-south" : "east-west"},
                     {"split", std::string(to_string(cell.split))},
                     {"distance_km", olt_distance_km(layout, ru, site)}});
  }
  return Json{{"layout", meshpon::to_json(layout)}, {"sites", sites}, {"links", links}};
}

double max_slice_latency(const MaioSolution& s) {
  double worst = 0.0;
  for (const auto& sr : s.slices) {
    if (!sr.slice.members.empty() && !sr.unstable) worst = std::max(worst, sr.latency.mean_us);
  }
  return worst;
}

}  // namespace

NetworkLayout resolve_layout(const ExperimentConfig& config) {
  const auto& l = config.layout;
  if (l.file) {
    std::ifstream in(*l.file);
    if (!in) throw ConfigError("cannot open layout file " + *l.file);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(*l.file + ": " + e.what());
    }
    if (doc.contains("layout") && doc.at("layout").is_object()) doc = doc.at("layout");
    return layout_from_json(doc);
  }
  return generate_layout(config.seed, l.n_macro, l.n_small, l.width_km, l.height_km, l.params);
}

BudgetRun run_budget(const ExperimentConfig& config) {
  BudgetRun run;
  const auto& b = config.budget;
  run.rows = budget_table(b.configs, b.params, b.drop_km, b.trunk_km);

  Artifacts out(config, "budget");
  std::ostringstream csv;
  write_budget_csv(csv, run.rows);
  out.csv("budget.csv", csv.str());
  Json doc = out.header();
  Json rows = Json::array();
  for (const auto& r : run.rows) rows.push_back(budget_row_json(r));
  doc["rows"] = rows;
  out.json("budget.json", doc);
  out.write(run);
  return run;
}

SimulateRun run_simulate(const ExperimentConfig& config) {
  SimulateRun run;
  const auto& s = config.simulate;
  run.slice = s.slice ? *s.slice : composed_slice(s.n71, s.n72, s.load, s.distance_km, s.wavelengths);
  SimConfig sim = seeded_sim(config);
  sim.record_trace = s.trace;

  Artifacts out(config, "simulate");
  Json doc = out.header();
  doc["slice"] = meshpon::to_json(run.slice);
  Json timing;
  try {
    auto t0 = Clock::now();
    run.analytical = analytic_latency(run.slice, AnalyticalParams::from(sim, config.model));
    timing["analytical_s"] = seconds_since(t0);
    t0 = Clock::now();
    run.simulated = simulate_slice_detailed(run.slice, sim);
    timing["simulated_s"] = seconds_since(t0);
  } catch (const UnstableError& e) {
    run.unstable_rho = e.rho();
    run.exit_code = kExitInfeasible;
    run.message = "slice is unstable: utilization " + fmt(e.rho(), 6) + " on wavelength " +
                  std::to_string(e.wavelength());
    doc["unstable"] = {{"utilization", e.rho()}, {"wavelength", e.wavelength()}};
  }
  doc["analytical"] = run.analytical ? meshpon::to_json(*run.analytical) : Json(nullptr);
  doc["simulated"] = run.simulated ? sim_result_json(*run.simulated) : Json(nullptr);
  doc["timing"] = timing;
  out.json("simulate.json", doc);

  std::ostringstream csv;
  csv << "source,mean_us,p99_us,frames_measured,max_utilization\n";
  if (run.analytical) {
    const auto& a = *run.analytical;
    csv << "analytical," << fmt(a.mean_us) << ",," << a.frames_measured << ','
        << fmt(a.max_utilization) << '\n';
  }
  if (run.simulated) {
    const auto& e = run.simulated->estimate;
    csv << "simulated," << fmt(e.mean_us) << ',' << fmt(e.p99_us) << ',' << e.frames_measured << ','
        << fmt(e.max_utilization) << '\n';
  }
  out.csv("simulate.csv", csv.str());
  if (s.trace && run.simulated) {
    std::ostringstream trace;
    write_frame_trace_csv(trace, run.simulated->trace);
    out.csv("frames.csv", trace.str());
  }
  out.write(run);
  return run;
}

RegionRun run_region(const ExperimentConfig& config) {
  RegionRun run;
  const auto& r = config.region;
  SimConfig sim = seeded_sim(config);
  auto params = AnalyticalParams::from(sim, config.model);

  for (double load : r.loads) {
    for (int n71 = 0; n71 <= r.max_n71; ++n71) {
      for (int n72 = 0; n72 <= r.max_n72; ++n72) {
        RegionPoint p{load, n71, n72, true, std::nullopt, std::nullopt};
        if (n71 + n72 > 0) {
          try {
            auto est = analytic_latency(composed_slice(n71, n72, load, r.distance_km, r.wavelengths), params);
            p.analytical_us = est.mean_us;
            p.feasible = est.mean_us <= r.threshold_us;
          } catch (const UnstableError&) {
            p.feasible = false;
          }
        }
        run.points.push_back(p);
      }
    }
  }

  auto t0 = Clock::now();
  if (r.des_check) {
    parallel_for(run.points.size(), [&](std::size_t i) {
      auto& p = run.points[i];
      if (!p.analytical_us) return;
      p.simulated_us =
          simulate_slice(composed_slice(p.n71, p.n72, p.load, r.distance_km, r.wavelengths), sim).mean_us;
    });
  }
  double des_s = seconds_since(t0);

  Artifacts out(config, "region");
  std::ostringstream csv;
  csv << "load,n71,n72,feasible,analytical_us,simulated_us\n";
  for (const auto& p : run.points) {
    csv << fixed(p.load, 2) << ',' << p.n71 << ',' << p.n72 << ',' << (p.feasible ? 1 : 0) << ','
        << (p.analytical_us ? fmt(*p.analytical_us) : "") << ','
        << (p.simulated_us ? fmt(*p.simulated_us) : "") << '\n';
  }
  out.csv("region.csv", csv.str());

  // largest feasible n72 per (load, n71); -1 when none
  std::ostringstream bnd;
  bnd << "load,n71,max_n72\n";
  Json boundary = Json::array();
  for (double load : r.loads) {
    Json rows = Json::array();
    for (int n71 = 0; n71 <= r.max_n71; ++n71) {
      int best = -1;
      for (const auto& p : run.points) {
        if (p.load == load && p.n71 == n71 && p.feasible) best = std::max(best, p.n72);
      }
      bnd << fixed(load, 2) << ',' << n71 << ',' << best << '\n';
      rows.push_back({{"n71", n71}, {"max_n72", best}});
    }
    boundary.push_back({{"load", load}, {"boundary", rows}});
  }
  out.csv("region_boundary.csv", bnd.str());
  Json doc = out.header();
  doc["regions"] = boundary;
  doc["timing"] = {{"des_check_s", des_s}};
  out.json("region.json", doc);
  out.write(run);
  return run;
}

OptimizeRun run_optimize(const ExperimentConfig& config) {
  OptimizeRun run;
  const auto& o = config.optimize;
  try {
    run.layout = resolve_layout(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("layout: ") + e.what());
  }

  Artifacts out(config, "optimize");
  Json layout_doc = out.header();
  layout_doc["layout"] = meshpon::to_json(run.layout);
  out.json("layout.json", layout_doc);

  std::ostringstream summary;
  summary << "load,max_iterations,status,reason,mec_count,lower_bound,iterations,cuts,"
             "max_latency_us,wall_time_s\n";
  for (double load : o.loads) {
    for (int mi : o.max_iterations) {
      MaioProblem problem;
      problem.layout = run.layout;
      problem.traffic = TrafficProfile::uniform(run.layout, load);
      problem.threshold_us = o.threshold_us;
      problem.wavelengths_per_tree = o.wavelengths_per_tree;
      problem.slice_wavelengths = o.slice_wavelengths;
      problem.max_iterations = mi;
      problem.ilp_node_limit = o.ilp_node_limit;
      problem.oracle = o.oracle;
      problem.cut_mode = o.cut_mode;
      problem.allow_co = o.allow_co;
      problem.sim = seeded_sim(config);
      problem.model = config.model;
      problem.validate();

      OptimizeCase c{load, mi, maio_optimize(problem)};
      const auto& s = c.solution;
      const std::string tag = case_tag(load, mi);

      Json doc = out.header();
      doc["load"] = load;
      doc["max_iterations"] = mi;
      Json sol = meshpon::to_json(s);
      doc["timing"] = sol["timing"];
      sol.erase("timing");
      doc["solution"] = sol;
      if (o.validate_with_des && s.status != MaioStatus::Infeasible) {
        doc["des_validation"] =
            meshpon::to_json(evaluate_solution(s, SimulatedOracle(problem.sim), o.threshold_us));
      }
      out.json("solution_" + tag + ".json", doc);

      std::ostringstream log;
      write_iteration_log_csv(log, s.log);
      out.csv("iterations_" + tag + ".csv", log.str());

      Json view = out.header();
      view["load"] = load;
      view["max_iterations"] = mi;
      view.update(slices_view(run.layout, s));
      out.json("slices_" + tag + ".json", view);

      const bool ok = s.status != MaioStatus::Infeasible;
      summary << fixed(load, 2) << ',' << mi << ',' << to_string(s.status) << ','
              << to_string(s.reason) << ',' << (ok ? std::to_string(s.enabled_mecs.size()) : "") << ','
              << s.n_mec_lower_bound << ',' << s.iterations_used << ',' << s.cuts_added << ','
              << (ok ? fmt(max_slice_latency(s)) : "") << ',' << fmt(s.wall_time_s) << '\n';
      if (!ok) {
        run.exit_code = kExitInfeasible;
        if (!run.message.empty()) run.message += "\n";
        run.message += "load " + fixed(load, 2) + ", max_iterations " + std::to_string(mi) +
                       ": infeasible (" + std::string(to_string(s.reason)) + ")";
      }
      run.cases.push_back(std::move(c));
    }
  }
  out.csv("summary.csv", summary.str());
  out.write(run);
  return run;
}

}  // namespace meshpon::runner
