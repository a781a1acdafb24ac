#include "ungar/rng.hpp"

#include <cmath>
#include <string>

#include "ungar/errors.hpp"

namespace ungar {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t position = 0;
  for (std::uint64_t component : path) {
    ++position;
    key = mix64((key + 0x9e3779b97f4a7c15ULL * position) ^ mix64(component + position));
  }
  return key;
}

std::uint64_t Rng::geometric(double p) noexcept {
  if (p >= 1.0) return 1;
  const double u = uniform_positive();
  const double k = std::floor(std::log(u) / std::log1p(-p));
  if (!(k < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
  return 1 + static_cast<std::uint64_t>(k);
}

void require_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw domain_error("probability p must lie in (0, 1], got " + std::to_string(p));
  }
}

}  // namespace ungar
