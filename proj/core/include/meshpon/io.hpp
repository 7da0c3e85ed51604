#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "meshpon/despon.hpp"
#include "meshpon/maio.hpp"
#include "meshpon/powerbudget.hpp"
#include "meshpon/topology.hpp"
#include "meshpon/traffic.hpp"

namespace meshpon {

using Json = nlohmann::ordered_json;

Json to_json(const NetworkLayout& layout);
NetworkLayout layout_from_json(const Json& doc);

Json to_json(const VPonSlice& slice);
VPonSlice slice_from_json(const Json& doc);

Json to_json(const LatencyEstimate& estimate);
Json to_json(const SimConfig& config);
/// Fields absent from `doc` keep their value from `base`.
SimConfig sim_config_from_json(const Json& doc, SimConfig base = {});

Json to_json(const MaioSolution& solution);
Json to_json(const std::vector<SliceValidation>& report);

/// small cell -> macro assignment, one row per cell
void write_assignment_csv(std::ostream& out, const NetworkLayout& layout);
void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows);
void write_load_trace_csv(std::ostream& out, const std::vector<LoadSample>& trace);
void write_frame_trace_csv(std::ostream& out, const std::vector<FrameRecord>& trace);
void write_iteration_log_csv(std::ostream& out, const std::vector<IterationRecord>& log);

}  // namespace meshpon
