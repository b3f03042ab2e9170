#include "spindd/stencil.hpp"

#include <sstream>

#include "spindd/closure.hpp"

namespace spindd::stencil {

namespace {

Vec3 checked_mobility(const Vec3& v, double lambda, const char* where, std::size_t index) {
  if (!(norm(v) < 1.0)) {
    std::ostringstream os;
    os << "|n|/n0 = " << norm(v) << " >= 1 at " << where << ' ' << index;
    throw ValidityError(os.str(), static_cast<std::ptrdiff_t>(index));
  }
  return closure::spin_mobility(v, lambda);
}

}  // namespace

Vec3 nodal_mobility(const std::vector<double>& n0, const std::vector<Vec3>& nvec, std::size_t i, double lambda) {
  return checked_mobility(spin_ratio(n0[i], nvec[i], i), lambda, "node", i);
}

Vec3 face_mobility(const std::vector<double>& n0, const std::vector<Vec3>& nvec, std::size_t face,
                   double lambda) {
  const Vec3 v = 0.5 * (spin_ratio(n0[face], nvec[face], face) + spin_ratio(n0[face + 1], nvec[face + 1], face + 1));
  return checked_mobility(v, lambda, "face", face);
}

}  // namespace spindd::stencil
