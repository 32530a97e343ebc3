#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcr/random.hpp"

namespace rcr {

using cplx = std::complex<double>;

enum class ConstellationKind { psk, qam };

/// Discrete transmit alphabet normalized to unit average power.
///
/// PSK points are the M-th roots of unity in increasing angle order. Square
/// QAM points are (a + jb)/sqrt(E_avg) with a, b odd integers in
/// [-(sqrt(M)-1), sqrt(M)-1] and E_avg = 2(M-1)/3, ordered row-major over
/// (a, b) with both increasing. Instances are immutable.
class Constellation {
 public:
  /// Throws ConfigError unless order is a power of two and >= 4.
  static Constellation psk(int order);
  /// Throws ConfigError unless order is an even power of two (4, 16, 64, ...).
  static Constellation qam(int order);
  /// Parses "psk4", "psk8", "psk16", "qam16", "qam64", ...
  static Constellation from_name(std::string_view name);

  ConstellationKind kind() const noexcept { return kind_; }
  int order() const noexcept { return static_cast<int>(points_.size()); }
  /// Average power of the unnormalized alphabet (QAM); 1 for PSK.
  double energy_avg() const noexcept { return energy_avg_; }
  std::span<const cplx> points() const noexcept { return points_; }
  const cplx& point(std::size_t index) const { return points_.at(index); }
  std::string name() const;

  /// Normalized PAM levels of one QAM axis in increasing order. Empty for PSK.
  std::span<const double> pam_levels() const noexcept { return pam_levels_; }

  std::optional<std::size_t> index_of(cplx x) const noexcept;

  /// Uniform i.i.d. symbol indices / symbols.
  std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n) const;
  std::vector<cplx> sample(Rng& rng, std::size_t n) const;

  /// Nearest point; ties go to the lowest canonical index.
  std::size_t decide_index(cplx z) const;
  cplx hard_decide(cplx z) const { return points_[decide_index(z)]; }

  /// Index of the decision cell strictly containing z, or nullopt when z is
  /// equidistant from two or more nearest points.
  std::optional<std::size_t> cell_index(cplx z) const;
  /// True iff z is strictly closer to x than to every other point.
  /// Throws InputError if x is not in the alphabet.
  bool in_decision_cell(cplx z, cplx x) const;

 private:
  Constellation(ConstellationKind kind, std::vector<cplx> points, double energy_avg,
                std::vector<double> pam_levels);

  ConstellationKind kind_;
  std::vector<cplx> points_;
  double energy_avg_;
  std::vector<double> pam_levels_;
};

}  // namespace rcr
