#include "partgrasp/records.hpp"

#include <istream>
#include <ostream>

#include "partgrasp/errors.hpp"

namespace partgrasp {

using json = nlohmann::json;

json grasp_record(const GraspCandidate& c) {
  const auto& q = c.pose.rotation();
  const auto& t = c.pose.translation();
  json j;
  j["arm"] = to_string(c.arm);
  j["translation"] = {t.x(), t.y(), t.z()};
  j["quaternion"] = {q.w(), q.x(), q.y(), q.z()};
  j["e_global"] = c.e_global;
  j["e_part"] = c.e_part;
  j["index"] = c.index;
  return j;
}

json metrics_record(bool cfr_flag, double e_global, double e_part) {
  return {{"cfr_flag", cfr_flag}, {"e_global", e_global}, {"e_part", e_part}};
}

json pair_record(const GraspPair& pair, double delta) {
  json j;
  j["D_ij"] = pair.center_distance;
  j["fc_epsilon"] = pair.fc_epsilon;
  j["survivors"] = pair.survivors;
  j["indices"] = {pair.h1.index, pair.h2.index};
  j["delta"] = delta;
  return j;
}

GraspCandidate grasp_from_record(const json& j) {
  GraspCandidate c;
  try {
    const auto t = j.at("translation").get<std::vector<double>>();
    const auto q = j.at("quaternion").get<std::vector<double>>();
    if (t.size() != 3 || q.size() != 4) throw ParameterError("malformed grasp record");
    c.pose = Pose(Eigen::Quaterniond(q[0], q[1], q[2], q[3]), Vec3(t[0], t[1], t[2]));
    c.e_global = j.at("e_global").get<double>();
    c.e_part = j.at("e_part").get<double>();
    c.index = j.value("index", std::size_t{0});
    const auto arm = j.at("arm").get<std::string>();
    c.arm = arm == "arm1" ? Arm::Arm1 : arm == "arm2" ? Arm::Arm2 : Arm::Single;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed grasp record: ") + e.what());
  }
  return c;
}

void write_jsonl(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

std::vector<json> read_jsonl(std::istream& in) {
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

}  // namespace partgrasp
