#pragma once

#include <span>
#include <string>
#include <string_view>

#include "rcr/constellation.hpp"

namespace rcr {

enum class RelaxationKind { disk, box, unconstrained };

/// Convex per-coordinate set V that the estimation step optimizes over.
/// Vector projections apply the scalar projection entrywise (V^n is a
/// product set).
class RelaxationSet {
 public:
  static RelaxationSet disk(double radius = 1.0);
  static RelaxationSet box(double halfwidth);
  static RelaxationSet unconstrained() { return RelaxationSet(RelaxationKind::unconstrained, 0.0); }

  /// Disk of radius 1 for PSK, box of halfwidth (sqrt(M)-1)/sqrt(E_avg) for QAM.
  static RelaxationSet default_for(const Constellation& c);
  /// "disk", "box" or "none". The box halfwidth defaults to the outer QAM
  /// level (1 for PSK).
  static RelaxationSet from_name(std::string_view name, const Constellation& c);

  RelaxationKind kind() const noexcept { return kind_; }
  double radius() const noexcept { return extent_; }
  double halfwidth() const noexcept { return extent_; }
  std::string name() const;

  bool contains(cplx z) const noexcept;
  /// Nearest point of V. Throws InputError for non-finite z.
  cplx project(cplx z) const;
  double dist_sq(cplx z) const;
  void project_inplace(std::span<cplx> values) const;

  /// True when the set is invariant under rotations about the origin.
  bool rotation_invariant() const noexcept { return kind_ != RelaxationKind::box; }
  /// True when every point of the alphabet lies in V.
  bool contains_all(const Constellation& c) const noexcept;

 private:
  RelaxationSet(RelaxationKind kind, double extent) : kind_(kind), extent_(extent) {}

  RelaxationKind kind_;
  double extent_;
};

}  // namespace rcr
