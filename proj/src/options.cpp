#include "irslab/options.hpp"

#include <stdexcept>

namespace irslab {

namespace {

void enumerate_channels(const Scenario& s, int k, std::vector<int>& used,
                        std::vector<int>& current,
                        std::vector<std::vector<int>>& out) {
  if (k == s.num_su) {
    out.push_back(current);
    return;
  }
  for (int c = 0; c < s.num_subchannels; ++c) {
    if (used[c]) continue;
    used[c] = 1;
    current[k] = c;
    enumerate_channels(s, k + 1, used, current, out);
    used[c] = 0;
  }
}

}  // namespace

OptionCatalog OptionCatalog::build(const Scenario& s) {
  if (s.num_su > s.num_subchannels) {
    throw std::invalid_argument("options: need num_su <= num_subchannels");
  }
  std::vector<std::vector<int>> channel_maps;
  std::vector<int> used(s.num_subchannels, 0);
  std::vector<int> current(s.num_su, 0);
  enumerate_channels(s, 0, used, current, channel_maps);

  OptionCatalog cat;
  for (const auto& cm : channel_maps) {
    // Odometer over IRS pairings, last user fastest.
    std::vector<int> pairing(s.num_su, 0);
    while (true) {
      Assignment a;
      a.su_channel = cm;
      a.su_irs = pairing;
      cat.options.push_back(std::move(a));
      int pos = s.num_su - 1;
      while (pos >= 0 && ++pairing[pos] == s.num_irs) {
        pairing[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return cat;
}

int OptionCatalog::index_of(const Assignment& a) const {
  for (int i = 0; i < size(); ++i) {
    if (options[i].su_channel == a.su_channel && options[i].su_irs == a.su_irs) {
      return i;
    }
  }
  return -1;
}

}  // namespace irslab
