#pragma once

#include <vector>

#include "irslab/action.hpp"

namespace irslab {

// Every feasible (subchannel assignment, IRS pairing) pair, enumerated once
// in lexicographic order of the tuple (c_1..c_K, z_1..z_K). The discrete
// learner indexes into this catalog.
struct OptionCatalog {
  std::vector<Assignment> options;

  int size() const { return static_cast<int>(options.size()); }
  const Assignment& at(int i) const { return options.at(i); }
  int index_of(const Assignment& a) const;  // -1 if absent

  static OptionCatalog build(const Scenario& s);
};

}  // namespace irslab
