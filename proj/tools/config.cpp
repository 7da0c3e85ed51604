#include <fstream>
#include <set>
#include <sstream>

#include "runner.hpp"

namespace meshpon::runner {

namespace {

using nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  template <class T>
  void get(const char* key, T& dst) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    try {
      dst = obj_.at(key).template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + ": wrong type (" + obj_.at(key).dump() + ")");
    }
  }

  template <class T, class Parse>
  void get_enum(const char* key, T& dst, Parse parse) {
    std::string text;
    get(key, text);
    if (obj_.contains(key)) {
      try {
        dst = parse(text);
      } catch (const ConfigError& e) {
        throw ConfigError(field(key) + ": " + e.what());
      }
    }
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(obj_.at(key), field(key));
  }

  const Json& raw(const char* key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown field '" + field(k.c_str()) + "'");
    }
  }

  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

SplitterSpec read_splitter(Section s, SplitterSpec spec) {
  s.get("ports_in", spec.ports_in);
  s.get("ports_out", spec.ports_out);
  s.get("one_way_loss_db", spec.one_way_loss_db);
  s.get("amplified", spec.amplified);
  s.get("edfa_gain_db", spec.edfa_gain_db);
  s.finish();
  return spec;
}

Json splitter_json(const SplitterSpec& s) {
  return Json{{"ports_in", s.ports_in},
              {"ports_out", s.ports_out},
              {"one_way_loss_db", s.one_way_loss_db},
              {"amplified", s.amplified},
              {"edfa_gain_db", s.edfa_gain_db}};
}

void read_layout(Section s, LayoutSection& l, const std::filesystem::path& base) {
  if (s.has("file")) {
    std::string file;
    s.get("file", file);
    std::filesystem::path p(file);
    if (p.is_relative()) p = base / p;
    require(std::filesystem::is_regular_file(p), s.field("file") + ": no such file " + p.string());
    l.file = p.lexically_normal().string();
  }
  s.get("n_macro", l.n_macro);
  s.get("n_small", l.n_small);
  s.get("width_km", l.width_km);
  s.get("height_km", l.height_km);
  auto& p = l.params;
  s.get("fiber_routing_factor", p.fiber_routing_factor);
  s.get("level2_fanout", p.level2_fanout);
  s.get("mec_capacity", p.mec_capacity);
  s.get("mec_drop_km", p.mec_drop_km);
  s.get("co_fiber_km", p.co_fiber_km);
  s.get("split71_fraction", p.split71_fraction);
  s.get("min_fiber_km", p.min_fiber_km);
  if (s.has("level1_splitter")) p.level1_splitter = read_splitter(s.child("level1_splitter"), p.level1_splitter);
  if (s.has("level2_splitter")) p.level2_splitter = read_splitter(s.child("level2_splitter"), p.level2_splitter);
  s.finish();
  require(l.n_macro >= 1, "layout.n_macro must be >= 1");
  require(l.n_small >= 0, "layout.n_small must be >= 0");
  require(l.width_km > 0 && l.height_km > 0, "layout area must be positive");
  require(p.split71_fraction >= 0 && p.split71_fraction <= 1,
          "layout.split71_fraction must be in [0, 1]");
  require(p.mec_capacity >= 1, "layout.mec_capacity must be >= 1");
  require(p.level2_fanout >= 1, "layout.level2_fanout must be >= 1");
}

void read_budget(Section s, BudgetSection& b) {
  auto& p = b.params;
  s.get("fbg_loss_db", p.fbg_loss_db);
  s.get("connector_loss_db", p.connector_loss_db);
  s.get("fiber_loss_db_per_km", p.fiber_loss_db_per_km);
  if (s.has("splitter_loss_db")) {
    std::map<std::string, double> extra;
    s.get("splitter_loss_db", extra);
    for (const auto& [name, loss] : extra) p.splitter_loss_db[name] = loss;
  }
  s.get("n1_db", p.n1_db);
  s.get("n2_db", p.n2_db);
  s.get("e1_db", p.e1_db);
  s.get("e2_db", p.e2_db);
  s.get("level1_edfa_gain_db", p.level1_edfa_gain_db);
  s.get("drop_km", b.drop_km);
  s.get("trunk_km", b.trunk_km);
  if (s.has("configs")) {
    const Json& arr = s.raw("configs");
    require(arr.is_array() && !arr.empty(), "budget.configs must be a non-empty array");
    b.configs.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section c(arr[i], "budget.configs[" + std::to_string(i) + "]");
      SplitterConfig sc;
      c.get("stage1", sc.stage1);
      require(!sc.stage1.empty(), c.field("stage1") + " is required");
      if (c.has("stage2")) {
        std::string s2;
        c.get("stage2", s2);
        sc.stage2 = s2;
      }
      c.finish();
      b.configs.push_back(sc);
    }
  }
  s.finish();
  p.validate();
  require(b.drop_km >= 0 && b.trunk_km >= 0, "budget distances must be >= 0");
  for (const auto& c : b.configs) {
    p.splitter(c.stage1);
    if (c.stage2) p.splitter(*c.stage2);
  }
}

void read_sim(Section s, SimConfig& c) {
  s.get("channel_rate_bps", c.channel_rate_bps);
  s.get("grant_cycle_us", c.grant_cycle_us);
  s.get("guard_time_us", c.guard_time_us);
  s.get("packet_bits", c.packet_bits);
  s.get("propagation_us_per_km", c.propagation_us_per_km);
  s.get("warmup_frames", c.warmup_frames);
  s.get("measured_frames", c.measured_frames);
  s.finish();
  c.validate();
}

void check_loads(const std::vector<double>& loads, const std::string& name) {
  require(!loads.empty(), name + " must be non-empty");
  for (double l : loads) require(l >= 0.0 && l <= 1.0, name + " entries must be in [0, 1]");
}

}  // namespace

ExperimentConfig config_from_json(const Json& doc, const std::filesystem::path& base) {
  ExperimentConfig c;
  Section top(doc, "");
  top.get("seed", c.seed);
  if (top.has("out_dir")) {
    std::string out;
    top.get("out_dir", out);
    c.out_dir = out;
  }
  top.get_enum("latency_model", c.model, latency_model_from_string);
  if (top.has("layout")) read_layout(top.child("layout"), c.layout, base);
  if (top.has("sim")) read_sim(top.child("sim"), c.sim);
  if (top.has("budget")) read_budget(top.child("budget"), c.budget);

  if (top.has("simulate")) {
    Section s = top.child("simulate");
    if (s.has("slice")) c.simulate.slice = slice_from_json(s.raw("slice"));
    s.get("n71", c.simulate.n71);
    s.get("n72", c.simulate.n72);
    s.get("load", c.simulate.load);
    s.get("distance_km", c.simulate.distance_km);
    s.get("wavelengths", c.simulate.wavelengths);
    s.get("trace", c.simulate.trace);
    s.finish();
    const auto& m = c.simulate;
    require(m.n71 >= 0 && m.n72 >= 0 && m.n71 + m.n72 >= 1, "simulate needs at least one RU");
    require(m.load >= 0 && m.load <= 1, "simulate.load must be in [0, 1]");
    require(m.distance_km >= 0, "simulate.distance_km must be >= 0");
    require(m.wavelengths >= 1, "simulate.wavelengths must be >= 1");
  }

  if (top.has("region")) {
    Section s = top.child("region");
    auto& r = c.region;
    s.get("loads", r.loads);
    s.get("max_n71", r.max_n71);
    s.get("max_n72", r.max_n72);
    s.get("threshold_us", r.threshold_us);
    s.get("distance_km", r.distance_km);
    s.get("wavelengths", r.wavelengths);
    s.get("des_check", r.des_check);
    s.finish();
    check_loads(r.loads, "region.loads");
    require(r.max_n71 >= 0 && r.max_n72 >= 0, "region grid sizes must be >= 0");
    require(r.threshold_us > 0, "region.threshold_us must be positive");
    require(r.distance_km >= 0, "region.distance_km must be >= 0");
    require(r.wavelengths >= 1, "region.wavelengths must be >= 1");
  }

  if (top.has("optimize")) {
    Section s = top.child("optimize");
    auto& o = c.optimize;
    s.get("loads", o.loads);
    s.get("max_iterations", o.max_iterations);
    s.get("threshold_us", o.threshold_us);
    s.get("wavelengths_per_tree", o.wavelengths_per_tree);
    s.get("slice_wavelengths", o.slice_wavelengths);
    s.get("ilp_node_limit", o.ilp_node_limit);
    s.get_enum("oracle", o.oracle, oracle_kind_from_string);
    s.get_enum("cut_mode", o.cut_mode, cut_mode_from_string);
    s.get("allow_co", o.allow_co);
    s.get("validate_with_des", o.validate_with_des);
    s.finish();
    check_loads(o.loads, "optimize.loads");
    require(!o.max_iterations.empty(), "optimize.max_iterations must be non-empty");
    for (int mi : o.max_iterations) require(mi >= 1, "optimize.max_iterations entries must be >= 1");
    require(o.threshold_us > 0, "optimize.threshold_us must be positive");
  }
  top.finish();
  return c;
}

ExperimentConfig config_from_json(const Json& doc) { return config_from_json(doc, "."); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    return config_from_json(doc, base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json to_json(const ExperimentConfig& c) {
  Json doc;
  doc["seed"] = c.seed;
  doc["out_dir"] = c.out_dir.string();
  doc["latency_model"] = std::string(to_string(c.model));

  const auto& l = c.layout;
  Json layout;
  layout["file"] = l.file ? Json(*l.file) : Json(nullptr);
  layout["n_macro"] = l.n_macro;
  layout["n_small"] = l.n_small;
  layout["width_km"] = l.width_km;
  layout["height_km"] = l.height_km;
  layout["fiber_routing_factor"] = l.params.fiber_routing_factor;
  layout["level2_fanout"] = l.params.level2_fanout;
  layout["mec_capacity"] = l.params.mec_capacity;
  layout["mec_drop_km"] = l.params.mec_drop_km;
  layout["co_fiber_km"] = l.params.co_fiber_km;
  layout["split71_fraction"] = l.params.split71_fraction;
  layout["min_fiber_km"] = l.params.min_fiber_km;
  layout["level1_splitter"] = splitter_json(l.params.level1_splitter);
  layout["level2_splitter"] = splitter_json(l.params.level2_splitter);
  doc["layout"] = layout;

  Json sim = meshpon::to_json(c.sim);
  sim.erase("seed");  // always the top-level seed
  doc["sim"] = sim;

  const auto& b = c.budget;
  Json budget;
  budget["fbg_loss_db"] = b.params.fbg_loss_db;
  budget["connector_loss_db"] = b.params.connector_loss_db;
  budget["fiber_loss_db_per_km"] = b.params.fiber_loss_db_per_km;
  budget["splitter_loss_db"] = b.params.splitter_loss_db;
  budget["n1_db"] = b.params.n1_db;
  budget["n2_db"] = b.params.n2_db;
  budget["e1_db"] = b.params.e1_db;
  budget["e2_db"] = b.params.e2_db;
  budget["level1_edfa_gain_db"] = b.params.level1_edfa_gain_db;
  budget["drop_km"] = b.drop_km;
  budget["trunk_km"] = b.trunk_km;
  Json configs = Json::array();
  for (const auto& sc : b.configs) {
    Json j{{"stage1", sc.stage1}};
    if (sc.stage2) j["stage2"] = *sc.stage2;
    configs.push_back(j);
  }
  budget["configs"] = configs;
  doc["budget"] = budget;

  const auto& s = c.simulate;
  Json simulate;
  if (s.slice) simulate["slice"] = meshpon::to_json(*s.slice);
  simulate["n71"] = s.n71;
  simulate["n72"] = s.n72;
  simulate["load"] = s.load;
  simulate["distance_km"] = s.distance_km;
  simulate["wavelengths"] = s.wavelengths;
  simulate["trace"] = s.trace;
  doc["simulate"] = simulate;

  const auto& r = c.region;
  doc["region"] = {{"loads", r.loads},           {"max_n71", r.max_n71},
                   {"max_n72", r.max_n72},       {"threshold_us", r.threshold_us},
                   {"distance_km", r.distance_km}, {"wavelengths", r.wavelengths},
                   {"des_check", r.des_check}};

  const auto& o = c.optimize;
  doc["optimize"] = {{"loads", o.loads},
                     {"max_iterations", o.max_iterations},
                     {"threshold_us", o.threshold_us},
                     {"wavelengths_per_tree", o.wavelengths_per_tree},
                     {"slice_wavelengths", o.slice_wavelengths},
                     {"ilp_node_limit", o.ilp_node_limit},
                     {"oracle", std::string(to_string(o.oracle))},
                     {"cut_mode", std::string(to_string(o.cut_mode))},
                     {"allow_co", o.allow_co},
                     {"validate_with_des", o.validate_with_des}};
  return doc;
}

void apply(ExperimentConfig& config, const Overrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.oracle) config.optimize.oracle = *o.oracle;
  if (o.max_iterations) {
    require(*o.max_iterations >= 1, "--max-iterations must be >= 1");
    config.optimize.max_iterations = {*o.max_iterations};
  }
}

}  // namespace meshpon::runner
