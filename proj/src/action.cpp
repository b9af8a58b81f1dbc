#include "irslab/action.hpp"

#include <cmath>
#include <set>

namespace irslab {

Reflection Reflection::identity(int num_irs, int elements) {
  Reflection r;
  r.amplitude.assign(num_irs, Vec::Ones(elements));
  r.phase.assign(num_irs, Vec::Zero(elements));
  return r;
}

Reflection Reflection::zero(int num_irs, int elements) {
  Reflection r;
  r.amplitude.assign(num_irs, Vec::Zero(elements));
  r.phase.assign(num_irs, Vec::Zero(elements));
  return r;
}

CVec Reflection::coefficients(int z) const {
  const Vec& b = amplitude.at(z);
  const Vec& p = phase.at(z);
  CVec c(b.size());
  for (int n = 0; n < b.size(); ++n) {
    c(n) = Cplx(b(n) * std::cos(p(n)), b(n) * std::sin(p(n)));
  }
  return c;
}

bool Assignment::valid(const Scenario& s) const {
  if (static_cast<int>(su_channel.size()) != s.num_su) return false;
  if (static_cast<int>(su_irs.size()) != s.num_su) return false;
  std::set<int> used;
  for (int k = 0; k < s.num_su; ++k) {
    const int c = su_channel[k];
    if (c < 0 || c >= s.num_subchannels) return false;
    if (!used.insert(c).second) return false;  // no double occupancy
    const int z = su_irs[k];
    if (z < 0 || z >= s.num_irs) return false;
  }
  return true;
}

Mat Assignment::channel_matrix(const Scenario& s) const {
  Mat xi = Mat::Zero(s.num_su, s.num_subchannels);
  for (int k = 0; k < s.num_su; ++k) xi(k, su_channel[k]) = 1.0;
  return xi;
}

Mat Assignment::pairing_matrix(const Scenario& s) const {
  Mat zeta = Mat::Zero(s.num_su, s.num_irs);
  for (int k = 0; k < s.num_su; ++k) zeta(k, su_irs[k]) = 1.0;
  return zeta;
}

double Action::beam_energy() const {
  double e = 0.0;
  for (const auto& f : beams) e += f.squaredNorm();
  return e;
}

}  // namespace irslab
