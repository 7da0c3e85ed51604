#include "meshpon/io.hpp"

#include <iomanip>
#include <ostream>

namespace meshpon {

namespace {

Json point_json(const Point& p) { return Json{{"x_km", p.x_km}, {"y_km", p.y_km}}; }

Point point_from(const Json& j) { return {j.at("x_km").get<double>(), j.at("y_km").get<double>()}; }

Json splitter_json(const SplitterSpec& s) {
  return Json{{"ports_in", s.ports_in},
              {"ports_out", s.ports_out},
              {"one_way_loss_db", s.one_way_loss_db},
              {"amplified", s.amplified},
              {"edfa_gain_db", s.edfa_gain_db}};
}

SplitterSpec splitter_from(const Json& j) {
  SplitterSpec s;
  s.ports_in = j.at("ports_in").get<int>();
  s.ports_out = j.at("ports_out").get<int>();
  s.one_way_loss_db = j.at("one_way_loss_db").get<double>();
  s.amplified = j.value("amplified", false);
  s.edfa_gain_db = j.value("edfa_gain_db", 0.0);
  return s;
}

Json site_json(OltSite site) {
  return site.is_co() ? Json("CO") : Json(site.macro_id);
}

OltSite site_from(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "CO") throw ConfigError("OLT site must be a macro id or \"CO\"");
    return OltSite{};
  }
  return OltSite{j.get<int>()};
}

// Fixed formatting so CSV payloads are byte-stable across runs.
std::ostream& num(std::ostream& out, double v) {
  out << std::setprecision(10) << v;
  return out;
}

}  // namespace

Json to_json(const NetworkLayout& layout) {
  Json doc;
  doc["area_width_km"] = layout.area_width_km;
  doc["area_height_km"] = layout.area_height_km;
  doc["seed"] = layout.seed;
  doc["fiber_routing_factor"] = layout.fiber_routing_factor;
  doc["level2_fanout"] = layout.level2_fanout;
  doc["co_fiber_km"] = layout.co_fiber_km;
  Json l2 = Json::array();
  for (const auto& s : layout.level2_splitters) {
    l2.push_back({{"id", s.id}, {"position", point_json(s.position)}, {"splitter", splitter_json(s.spec)}});
  }
  doc["level2_splitters"] = l2;
  Json macros = Json::array();
  for (const auto& m : layout.macro_sites) {
    macros.push_back({{"id", m.id},
                      {"position", point_json(m.position)},
                      {"mec_capacity", m.mec_capacity},
                      {"level1_splitter", splitter_json(m.level1_splitter)},
                      {"level2_id", m.level2_id},
                      {"fiber_to_level2_km", m.fiber_to_level2_km},
                      {"mec_drop_km", m.mec_drop_km}});
  }
  doc["macro_sites"] = macros;
  Json cells = Json::array();
  for (const auto& c : layout.small_cells) {
    cells.push_back({{"id", c.id},
                     {"position", point_json(c.position)},
                     {"parent_macro", c.parent_macro},
                     {"fiber_to_level1_km", c.fiber_to_level1_km},
                     {"split", std::string(to_string(c.split))}});
  }
  doc["small_cells"] = cells;
  return doc;
}

NetworkLayout layout_from_json(const Json& doc) {
  NetworkLayout layout;
  try {
    layout.area_width_km = doc.at("area_width_km").get<double>();
    layout.area_height_km = doc.at("area_height_km").get<double>();
    layout.seed = doc.value("seed", std::uint64_t{0});
    layout.fiber_routing_factor = doc.value("fiber_routing_factor", 1.0);
    layout.level2_fanout = doc.value("level2_fanout", 4);
    layout.co_fiber_km = doc.value("co_fiber_km", 20.0);
    for (const auto& j : doc.at("level2_splitters")) {
      Level2Splitter s;
      s.id = j.at("id").get<int>();
      s.position = point_from(j.at("position"));
      s.spec = splitter_from(j.at("splitter"));
      layout.level2_splitters.push_back(s);
    }
    for (const auto& j : doc.at("macro_sites")) {
      MacroSite m;
      m.id = j.at("id").get<int>();
      m.position = point_from(j.at("position"));
      m.mec_capacity = j.at("mec_capacity").get<int>();
      m.level1_splitter = splitter_from(j.at("level1_splitter"));
      m.level2_id = j.at("level2_id").get<int>();
      m.fiber_to_level2_km = j.at("fiber_to_level2_km").get<double>();
      m.mec_drop_km = j.value("mec_drop_km", 0.5);
      layout.macro_sites.push_back(m);
    }
    for (const auto& j : doc.at("small_cells")) {
      SmallCell c;
      c.id = j.at("id").get<int>();
      c.position = point_from(j.at("position"));
      c.parent_macro = j.at("parent_macro").get<int>();
      c.fiber_to_level1_km = j.at("fiber_to_level1_km").get<double>();
      c.split = split_from_string(j.at("split").get<std::string>());
      layout.small_cells.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("layout document: ") + e.what());
  }
  try {
    validate_layout(layout);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("layout document: ") + e.what());
  }
  return layout;
}

Json to_json(const VPonSlice& slice) {
  Json members = Json::array();
  for (const auto& m : slice.members) {
    members.push_back({{"ru_id", m.ru_id},
                       {"split", std::string(to_string(m.split))},
                       {"distance_km", m.distance_km},
                       {"rate_bps", m.rate_bps}});
  }
  return Json{{"olt", site_json(slice.olt)}, {"wavelengths", slice.wavelengths}, {"members", members}};
}

VPonSlice slice_from_json(const Json& doc) {
  VPonSlice slice;
  try {
    slice.olt = site_from(doc.value("olt", Json("CO")));
    if (doc.contains("wavelengths")) {
      const auto& w = doc.at("wavelengths");
      slice.wavelengths = w.is_number() ? std::vector<int>{} : w.get<std::vector<int>>();
      if (w.is_number()) {
        for (int i = 0; i < w.get<int>(); ++i) slice.wavelengths.push_back(i);
      }
    }
    int next_id = 0;
    for (const auto& j : doc.at("members")) {
      SliceMember m;
      m.ru_id = j.value("ru_id", next_id);
      next_id = m.ru_id + 1;
      m.split = split_from_string(j.value("split", std::string("7.2")));
      m.distance_km = j.at("distance_km").get<double>();
      if (j.contains("rate_bps")) {
        m.rate_bps = j.at("rate_bps").get<double>();
      } else {
        m.rate_bps = fronthaul_rate_bps(SplitRateModel::for_split(m.split), j.at("load").get<double>());
      }
      slice.members.push_back(m);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("slice document: ") + e.what());
  }
  if (slice.members.empty()) throw ConfigError("slice document: members must be non-empty");
  if (slice.wavelengths.empty()) throw ConfigError("slice document: wavelengths must be non-empty");
  return slice;
}

Json to_json(const LatencyEstimate& e) {
  Json j{{"mean_us", e.mean_us},
         {"frames_measured", e.frames_measured},
         {"source", std::string(to_string(e.source))},
         {"max_utilization", e.max_utilization}};
  if (e.source == LatencySource::Simulated) j["p99_us"] = e.p99_us;
  return j;
}

Json to_json(const SimConfig& c) {
  return Json{{"channel_rate_bps", c.channel_rate_bps},
              {"grant_cycle_us", c.grant_cycle_us},
              {"guard_time_us", c.guard_time_us},
              {"packet_bits", c.packet_bits},
              {"propagation_us_per_km", c.propagation_us_per_km},
              {"warmup_frames", c.warmup_frames},
              {"measured_frames", c.measured_frames},
              {"seed", c.seed}};
}

SimConfig sim_config_from_json(const Json& doc, SimConfig c) {
  try {
    c.channel_rate_bps = doc.value("channel_rate_bps", c.channel_rate_bps);
    c.grant_cycle_us = doc.value("grant_cycle_us", c.grant_cycle_us);
    c.guard_time_us = doc.value("guard_time_us", c.guard_time_us);
    c.packet_bits = doc.value("packet_bits", c.packet_bits);
    c.propagation_us_per_km = doc.value("propagation_us_per_km", c.propagation_us_per_km);
    c.warmup_frames = doc.value("warmup_frames", c.warmup_frames);
    c.measured_frames = doc.value("measured_frames", c.measured_frames);
    c.seed = doc.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sim config: ") + e.what());
  }
  c.validate();
  return c;
}

Json to_json(const MaioSolution& s) {
  Json doc;
  doc["status"] = std::string(to_string(s.status));
  doc["infeasible_reason"] = std::string(to_string(s.reason));
  doc["enabled_mecs"] = s.enabled_mecs;
  doc["n_mec_lower_bound"] = s.n_mec_lower_bound;
  doc["iterations_used"] = s.iterations_used;
  doc["cuts_added"] = s.cuts_added;
  Json assignment = Json::array();
  for (const auto& [ru, site] : s.assignment) {
    assignment.push_back({{"ru_id", ru}, {"olt", site_json(site)}});
  }
  doc["assignment"] = assignment;
  Json slices = Json::array();
  for (const auto& sr : s.slices) {
    Json j = to_json(sr.slice);
    j["unstable"] = sr.unstable;
    if (!sr.slice.members.empty()) j["latency"] = to_json(sr.latency);
    slices.push_back(j);
  }
  doc["slices"] = slices;
  Json cuts = Json::array();
  for (const auto& c : s.cuts) cuts.push_back({{"olt", site_json(c.site)}, {"ru_ids", c.ru_ids}});
  doc["cuts"] = cuts;
  // wall-clock figures live here so reproducibility checks can drop one key
  doc["timing"] = {{"wall_time_s", s.wall_time_s}};
  return doc;
}

Json to_json(const std::vector<SliceValidation>& report) {
  Json out = Json::array();
  for (const auto& v : report) {
    out.push_back({{"olt", site_json(v.olt)},
                   {"simulated", to_json(v.simulated)},
                   {"unstable", v.unstable},
                   {"violates", v.violates}});
  }
  return out;
}

void write_assignment_csv(std::ostream& out, const NetworkLayout& layout) {
  out << "cell_id,x_km,y_km,parent_macro,macro_x_km,macro_y_km,split,fiber_to_level1_km\n";
  for (const auto& c : layout.small_cells) {
    const auto& m = layout.macro(c.parent_macro);
    out << c.id << ',';
    num(out, c.position.x_km) << ',';
    num(out, c.position.y_km) << ',' << m.id << ',';
    num(out, m.position.x_km) << ',';
    num(out, m.position.y_km) << ',' << to_string(c.split) << ',';
    num(out, c.fiber_to_level1_km) << '\n';
  }
}

void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows) {
  out << "total_split,configuration,path,loss_db,class,edfa_gain_db,loss_with_edfa_db,"
         "class_with_edfa,required_gain_n1_db\n";
  for (const auto& r : rows) {
    out << r.total_split << ',' << r.configuration << ','
        << (r.path == ReflectAt::Level1 ? "level1" : "level2") << ',' << std::fixed
        << std::setprecision(2) << r.loss_db << ',' << to_string(r.loss_class) << ','
        << r.edfa_gain_db << ',' << r.loss_with_edfa_db << ','
        << to_string(r.loss_with_edfa_class) << ',' << r.required_gain_n1_db << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

void write_load_trace_csv(std::ostream& out, const std::vector<LoadSample>& trace) {
  out << "time_s,load\n";
  for (const auto& s : trace) {
    num(out, s.time_s) << ',';
    num(out, s.load) << '\n';
  }
}

void write_frame_trace_csv(std::ostream& out, const std::vector<FrameRecord>& trace) {
  out << "frame_id,ru_id,wavelength,arrival_us,delivered_us,latency_us,propagation_us\n";
  for (const auto& f : trace) {
    out << f.id << ',' << f.ru_id << ',' << f.wavelength << ',';
    num(out, f.arrival_us) << ',';
    num(out, f.delivered_us) << ',';
    num(out, f.latency_us()) << ',';
    num(out, f.propagation_us) << '\n';
  }
}

void write_iteration_log_csv(std::ostream& out, const std::vector<IterationRecord>& log) {
  out << "iteration,bound,mec_count,violations,cuts_total,feasible,elapsed_s\n";
  for (const auto& r : log) {
    out << r.iteration << ',' << r.bound << ',' << r.mec_count << ',' << r.violations << ','
        << r.cuts_total << ',' << (r.feasible ? 1 : 0) << ',';
    num(out, r.elapsed_s) << '\n';
  }
}

}  // namespace meshpon
