#include "irslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace irslab {

using nlohmann::json;

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("scenario: unknown key '" + item.key() +
                                  "' in " + where);
    }
  }
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("scenario: " + where + " must be [x, y, z]");
  }
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::vector<Vec3> vec3s_from_json(const json& j, const std::string& where) {
  std::vector<Vec3> out;
  if (!j.is_array()) {
    throw std::invalid_argument("scenario: " + where + " must be an array");
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vec3_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

void Scenario::validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("scenario: " + msg);
  };
  if (pbs_antennas < 1 || sbs_antennas < 1 || irs_elements < 1) fail("antenna/element counts must be >= 1");
  if (num_irs < 1 || num_pu < 1 || num_su < 1 || num_subchannels < 1) fail("node counts must be >= 1");
  if (num_eve < 0) fail("eavesdropper count must be >= 0");
  if (num_su > num_subchannels) fail("needs num_su <= num_subchannels for a one-to-one assignment");
  if (static_cast<int>(irs_pos.size()) != num_irs) fail("irs position count mismatch");
  if (static_cast<int>(pu_pos.size()) != num_pu) fail("pu position count mismatch");
  if (static_cast<int>(su_pos.size()) != num_su) fail("su position count mismatch");
  if (static_cast<int>(eve_pos.size()) != num_eve) fail("eve position count mismatch");
  if (!(sbs_power_budget_w > 0.0) || !(pbs_subchannel_power_w > 0.0)) fail("powers must be positive");
  if (!(noise_su > 0.0) || !(noise_pu > 0.0) || !(noise_eve > 0.0) || !(noise_sensing > 0.0)) fail("noise variances must be positive");
  if (!(sampling_hz > 0.0) || !(frame_seconds > 0.0)) fail("sampling rate and frame duration must be positive");
  if (!(detection_target > 0.0 && detection_target < 1.0)) fail("detection_target must lie in (0, 1)");
  if (!(false_alarm_max > 0.0 && false_alarm_max < 1.0)) fail("false_alarm_max must lie in (0, 1)");
  if (!(idle_prior > 0.0 && idle_prior < 1.0)) fail("idle_prior must lie in (0, 1)");
  if (!(ref_distance_m > 0.0)) fail("ref_distance_m must be positive");
  if (rician_k < 0.0) fail("rician_k must be >= 0");
  if (pu_rate_min < 0.0 || secrecy_min < 0.0) fail("rate floors must be >= 0");
  if (!(interference_cap > 0.0)) fail("interference_cap must be positive");
}

json Scenario::to_json() const {
  json j;
  j["schema"] = "irslab-scenario-v1";
  j["name"] = name;
  j["description"] = description;
  j["counts"] = {{"pbs_antennas", pbs_antennas}, {"sbs_antennas", sbs_antennas},
                 {"irs_elements", irs_elements}, {"irs", num_irs},
                 {"pu", num_pu},                 {"su", num_su},
                 {"eve", num_eve},               {"subchannels", num_subchannels}};
  json pos;
  pos["pbs"] = vec3_to_json(pbs_pos);
  pos["sbs"] = vec3_to_json(sbs_pos);
  auto list = [](const std::vector<Vec3>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(vec3_to_json(p));
    return a;
  };
  pos["irs"] = list(irs_pos);
  pos["pu"] = list(pu_pos);
  pos["su"] = list(su_pos);
  pos["eve"] = list(eve_pos);
  j["positions"] = pos;
  j["power"] = {{"sbs_budget_w", sbs_power_budget_w},
                {"pbs_per_subchannel_w", pbs_subchannel_power_w}};
  j["noise"] = {{"su", noise_su}, {"pu", noise_pu}, {"eve", noise_eve},
                {"sensing", noise_sensing}};
  j["sensing"] = {{"sampling_hz", sampling_hz},
                  {"frame_seconds", frame_seconds},
                  {"detection_target", detection_target},
                  {"false_alarm_max", false_alarm_max},
                  {"idle_prior", idle_prior}};
  j["pathloss"] = {{"ref_loss_db", ref_loss_db},
                   {"ref_distance_m", ref_distance_m},
                   {"exp_bs_user", exp_bs_user},
                   {"exp_bs_irs", exp_bs_irs},
                   {"exp_irs_user", exp_irs_user},
                   {"rician_k", rician_k}};
  j["qos"] = {{"pu_rate_min", pu_rate_min},
              {"secrecy_min", secrecy_min},
              {"interference_cap", interference_cap}};
  return j;
}

Scenario Scenario::from_json(const json& j) {
  require_keys(j, "root",
               {"schema", "name", "description", "counts", "positions", "power",
                "noise", "sensing", "pathloss", "qos"});
  if (j.value("schema", "") != "irslab-scenario-v1") {
    throw std::invalid_argument("scenario: missing or unsupported schema tag");
  }
  Scenario s;
  s.name = j.value("name", "");
  s.description = j.value("description", "");

  const json& c = j.at("counts");
  require_keys(c, "counts", {"pbs_antennas", "sbs_antennas", "irs_elements",
                             "irs", "pu", "su", "eve", "subchannels"});
  s.pbs_antennas = c.at("pbs_antennas").get<int>();
  s.sbs_antennas = c.at("sbs_antennas").get<int>();
  s.irs_elements = c.at("irs_elements").get<int>();
  s.num_irs = c.at("irs").get<int>();
  s.num_pu = c.at("pu").get<int>();
  s.num_su = c.at("su").get<int>();
  s.num_eve = c.at("eve").get<int>();
  s.num_subchannels = c.at("subchannels").get<int>();

  const json& p = j.at("positions");
  require_keys(p, "positions", {"pbs", "sbs", "irs", "pu", "su", "eve"});
  s.pbs_pos = vec3_from_json(p.at("pbs"), "positions.pbs");
  s.sbs_pos = vec3_from_json(p.at("sbs"), "positions.sbs");
  s.irs_pos = vec3s_from_json(p.at("irs"), "positions.irs");
  s.pu_pos = vec3s_from_json(p.at("pu"), "positions.pu");
  s.su_pos = vec3s_from_json(p.at("su"), "positions.su");
  s.eve_pos = vec3s_from_json(p.at("eve"), "positions.eve");

  const json& pw = j.at("power");
  require_keys(pw, "power", {"sbs_budget_w", "pbs_per_subchannel_w"});
  s.sbs_power_budget_w = pw.at("sbs_budget_w").get<double>();
  s.pbs_subchannel_power_w = pw.at("pbs_per_subchannel_w").get<double>();

  const json& n = j.at("noise");
  require_keys(n, "noise", {"su", "pu", "eve", "sensing"});
  s.noise_su = n.at("su").get<double>();
  s.noise_pu = n.at("pu").get<double>();
  s.noise_eve = n.at("eve").get<double>();
  s.noise_sensing = n.at("sensing").get<double>();

  const json& sn = j.at("sensing");
  require_keys(sn, "sensing", {"sampling_hz", "frame_seconds", "detection_target",
                               "false_alarm_max", "idle_prior"});
  s.sampling_hz = sn.at("sampling_hz").get<double>();
  s.frame_seconds = sn.at("frame_seconds").get<double>();
  s.detection_target = sn.at("detection_target").get<double>();
  s.false_alarm_max = sn.at("false_alarm_max").get<double>();
  s.idle_prior = sn.at("idle_prior").get<double>();

  const json& pl = j.at("pathloss");
  require_keys(pl, "pathloss", {"ref_loss_db", "ref_distance_m", "exp_bs_user",
                                "exp_bs_irs", "exp_irs_user", "rician_k"});
  s.ref_loss_db = pl.at("ref_loss_db").get<double>();
  s.ref_distance_m = pl.at("ref_distance_m").get<double>();
  s.exp_bs_user = pl.at("exp_bs_user").get<double>();
  s.exp_bs_irs = pl.at("exp_bs_irs").get<double>();
  s.exp_irs_user = pl.at("exp_irs_user").get<double>();
  s.rician_k = pl.at("rician_k").get<double>();

  const json& q = j.at("qos");
  require_keys(q, "qos", {"pu_rate_min", "secrecy_min", "interference_cap"});
  s.pu_rate_min = q.at("pu_rate_min").get<double>();
  s.secrecy_min = q.at("secrecy_min").get<double>();
  s.interference_cap = q.at("interference_cap").get<double>();

  s.validate();
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario: " + path + ": " + e.what());
  }
  return from_json(j);
}

void Scenario::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write " + path);
  out << to_json().dump(2) << "\n";
}

Scenario Scenario::preset(const std::string& name_or_path) {
  if (name_or_path == "default") {
    return load(std::string(IRSLAB_PRESET_DIR) + "/scenario_default.json");
  }
  if (name_or_path == "tiny") {
    return load(std::string(IRSLAB_PRESET_DIR) + "/scenario_tiny.json");
  }
  return load(name_or_path);
}

std::uint64_t Scenario::fingerprint() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace irslab
