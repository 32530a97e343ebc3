#include "rcr/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcr/errors.hpp"

namespace rcr {
namespace {

// Rescaling onto the circle can land a few ulps outside; treat that band as
// inside so projection is exactly idempotent.
constexpr double kDiskSlack = 8.0 * std::numeric_limits<double>::epsilon();

void require_finite(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InputError("non-finite value passed to projection");
  }
}

}  // namespace

RelaxationSet RelaxationSet::disk(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("disk_radius must be positive and finite");
  return RelaxationSet(RelaxationKind::disk, radius);
}

RelaxationSet RelaxationSet::box(double halfwidth) {
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) {
    throw ConfigError("box_halfwidth must be positive and finite");
  }
  return RelaxationSet(RelaxationKind::box, halfwidth);
}

RelaxationSet RelaxationSet::default_for(const Constellation& c) {
  if (c.kind() == ConstellationKind::psk) return disk(1.0);
  return box(c.pam_levels().back());
}

RelaxationSet RelaxationSet::from_name(std::string_view name, const Constellation& c) {
  if (name == "disk") return disk(1.0);
  if (name == "box") return box(c.kind() == ConstellationKind::qam ? c.pam_levels().back() : 1.0);
  if (name == "none") return unconstrained();
  throw ConfigError("unknown relaxation '" + std::string(name) + "' (expected disk, box or none)");
}

std::string RelaxationSet::name() const {
  switch (kind_) {
    case RelaxationKind::disk: return "disk";
    case RelaxationKind::box: return "box";
    case RelaxationKind::unconstrained: return "none";
  }
  return "none";
}

bool RelaxationSet::contains(cplx z) const noexcept {
  switch (kind_) {
    case RelaxationKind::disk: return std::abs(z) <= extent_ * (1.0 + kDiskSlack);
    case RelaxationKind::box: return std::abs(z.real()) <= extent_ && std::abs(z.imag()) <= extent_;
    case RelaxationKind::unconstrained: return true;
  }
  return true;
}

cplx RelaxationSet::project(cplx z) const {
  require_finite(z);
  switch (kind_) {
    case RelaxationKind::disk: {
      const double mag = std::abs(z);
      if (mag <= extent_ * (1.0 + kDiskSlack)) return z;
      return z * (extent_ / mag);
    }
    case RelaxationKind::box:
      return {std::clamp(z.real(), -extent_, extent_), std::clamp(z.imag(), -extent_, extent_)};
    case RelaxationKind::unconstrained:
      return z;
  }
  return z;
}

double RelaxationSet::dist_sq(cplx z) const {
  require_finite(z);
  switch (kind_) {
    case RelaxationKind::disk: {
      const double excess = std::abs(z) - extent_;
      return excess > extent_ * kDiskSlack ? excess * excess : 0.0;
    }
    case RelaxationKind::box: {
      const double dr = std::max(std::abs(z.real()) - extent_, 0.0);
      const double di = std::max(std::abs(z.imag()) - extent_, 0.0);
      return dr * dr + di * di;
    }
    case RelaxationKind::unconstrained:
      return 0.0;
  }
  return 0.0;
}

void RelaxationSet::project_inplace(std::span<cplx> values) const {
  if (kind_ == RelaxationKind::unconstrained) return;
  for (auto& v : values) v = project(v);
}

bool RelaxationSet::contains_all(const Constellation& c) const noexcept {
  return std::all_of(c.points().begin(), c.points().end(), [this](cplx p) { return contains(p); });
}

}  // namespace rcr
