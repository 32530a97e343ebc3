#include "rcr/constellation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rcr/errors.hpp"

namespace rcr {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_finite(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InputError("non-finite sample passed to hard decision");
  }
}

// First-quadrant PSK point k of `quarter` per quadrant. Points past pi/4 are
// built by mirroring so the alphabet is exactly closed under (a,b) -> (b,a).
cplx psk_first_quadrant(int k, int quarter) {
  if (2 * k == quarter) {
    const double h = std::sqrt(0.5);
    return {h, h};
  }
  if (2 * k > quarter) {
    const cplx m = psk_first_quadrant(quarter - k, quarter);
    return {m.imag(), m.real()};
  }
  const double angle = std::numbers::pi / 2.0 * static_cast<double>(k) / static_cast<double>(quarter);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

Constellation::Constellation(ConstellationKind kind, std::vector<cplx> points, double energy_avg,
                             std::vector<double> pam_levels)
    : kind_(kind), points_(std::move(points)), energy_avg_(energy_avg), pam_levels_(std::move(pam_levels)) {}

Constellation Constellation::psk(int order) {
  if (order < 4 || !is_power_of_two(order)) {
    throw ConfigError("PSK order must be a power of two >= 4, got " + std::to_string(order));
  }
  const int quarter = order / 4;
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    cplx p = psk_first_quadrant(i % quarter, quarter);
    for (int q = 0; q < i / quarter; ++q) p = {-p.imag(), p.real()};  // multiply by j
    pts.push_back(p);
  }
  return Constellation(ConstellationKind::psk, std::move(pts), 1.0, {});
}

Constellation Constellation::qam(int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (order < 4 || side * side != order || !is_power_of_two(side)) {
    throw ConfigError("QAM order must be 2^(2k) with k >= 1, got " + std::to_string(order));
  }
  const double energy = 2.0 * (order - 1) / 3.0;
  const double scale = 1.0 / std::sqrt(energy);
  std::vector<double> levels;
  for (int l = 0; l < side; ++l) levels.push_back((2.0 * l - (side - 1)) * scale);

  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(order));
  for (double a : levels) {
    for (double b : levels) pts.emplace_back(a, b);
  }
  return Constellation(ConstellationKind::qam, std::move(pts), energy, std::move(levels));
}

Constellation Constellation::from_name(std::string_view name) {
  auto parse_order = [&](std::string_view digits) -> int {
    if (digits.empty() || digits.size() > 6) return -1;
    int v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') return -1;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const auto bad = [&] {
    return ConfigError("unknown constellation '" + std::string(name) +
                       "' (expected psk4, psk8, psk16, qam16 or qam64)");
  };
  if (name.starts_with("psk")) {
    const int order = parse_order(name.substr(3));
    if (order < 4 || !is_power_of_two(order)) throw bad();
    return psk(order);
  }
  if (name.starts_with("qam")) {
    const int order = parse_order(name.substr(3));
    const int side = order > 0 ? static_cast<int>(std::lround(std::sqrt(static_cast<double>(order)))) : 0;
    if (order < 4 || side * side != order || !is_power_of_two(side)) throw bad();
    return qam(order);
  }
  throw bad();
}

std::string Constellation::name() const {
  std::ostringstream os;
  os << (kind_ == ConstellationKind::psk ? "psk" : "qam") << order();
  return os.str();
}

std::optional<std::size_t> Constellation::index_of(cplx x) const noexcept {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == x) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Constellation::sample_indices(Rng& rng, std::size_t n) const {
  std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
  std::vector<std::size_t> out(n);
  for (auto& idx : out) idx = pick(rng);
  return out;
}

std::vector<cplx> Constellation::sample(Rng& rng, std::size_t n) const {
  std::vector<cplx> out;
  out.reserve(n);
  for (std::size_t idx : sample_indices(rng, n)) out.push_back(points_[idx]);
  return out;
}

std::size_t Constellation::decide_index(cplx z) const {
  require_finite(z);
  std::size_t best = 0;
  double best_d = std::norm(z - points_[0]);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double d = std::norm(z - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> Constellation::cell_index(cplx z) const {
  require_finite(z);
  std::size_t best = 0;
  double best_d = std::norm(z - points_[0]);
  bool tied = false;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double d = std::norm(z - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
      tied = false;
    } else if (d == best_d) {
      tied = true;
    }
  }
  if (tied) return std::nullopt;
  return best;
}

bool Constellation::in_decision_cell(cplx z, cplx x) const {
  const auto target = index_of(x);
  if (!target) throw InputError("decision-cell query for a point outside the constellation");
  const auto cell = cell_index(z);
  return cell && *cell == *target;
}

}  // namespace rcr
