#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "partgrasp/diffusion.hpp"
#include "partgrasp/dual_arm.hpp"

namespace partgrasp {

// JSON-lines record types written by the CLI.
nlohmann::json grasp_record(const GraspCandidate& c);
nlohmann::json metrics_record(bool cfr_flag, double e_global, double e_part);
// `delta` is the energy threshold the pair's candidates were filtered with.
nlohmann::json pair_record(const GraspPair& pair, double delta);

GraspCandidate grasp_from_record(const nlohmann::json& j);

void write_jsonl(std::ostream& out, const nlohmann::json& record);
std::vector<nlohmann::json> read_jsonl(std::istream& in);

}  // namespace partgrasp
