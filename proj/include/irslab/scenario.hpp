#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace irslab {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Immutable experiment definition: node geometry, counts, powers, sensing
// parameters and QoS targets. Loaded from a versioned JSON preset; unknown
// keys are rejected so stale configs fail loudly.
struct Scenario {
  std::string name;
  std::string description;

  int pbs_antennas = 1;    // antennas at the primary base station
  int sbs_antennas = 1;    // antennas at the secondary base station
  int irs_elements = 1;    // reflection elements per surface
  int num_irs = 1;
  int num_pu = 1;
  int num_su = 1;
  int num_eve = 0;
  int num_subchannels = 1;

  Vec3 pbs_pos, sbs_pos;
  std::vector<Vec3> irs_pos, pu_pos, su_pos, eve_pos;

  double sbs_power_budget_w = 1.0;     // transmit power cap feeding C3
  double pbs_subchannel_power_w = 1.0;

  double noise_su = 0.01;
  double noise_pu = 0.01;
  double noise_eve = 0.01;
  double noise_sensing = 0.01;

  double sampling_hz = 6e6;
  double frame_seconds = 0.1;
  double detection_target = 0.9;   // target detection probability
  double false_alarm_max = 0.1;    // C2 cap
  double idle_prior = 0.8;         // Pr(subchannel idle)

  double ref_loss_db = 30.0;
  double ref_distance_m = 1.0;
  double exp_bs_user = 3.75;
  double exp_bs_irs = 2.2;
  double exp_irs_user = 2.2;
  double rician_k = 3.0;

  double pu_rate_min = 0.5;        // C1 threshold (bits/s/Hz)
  double secrecy_min = 0.1;        // per-user secrecy floor in the reward
  double interference_cap = 0.01;  // AO interference budget

  // Total beam-energy budget for C3: frame duration times the power cap.
  double beam_budget() const { return frame_seconds * sbs_power_budget_w; }

  void validate() const;  // throws std::invalid_argument on bad fields

  nlohmann::json to_json() const;
  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::string& path);
  void save(const std::string& path) const;

  // Resolves "default" / "tiny" to the shipped preset files, otherwise
  // treats the argument as a path.
  static Scenario preset(const std::string& name_or_path);

  // Stable hash of the canonical JSON dump; embedded in trained-agent
  // files so a policy cannot be loaded against a different scenario.
  std::uint64_t fingerprint() const;
};

}  // namespace irslab
