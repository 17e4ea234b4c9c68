#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace glmcorr {

// Stream generator keyed by a tuple of 64-bit words (e.g. master seed,
// scenario hash, replication index). Keys are mixed through SplitMix64 and
// the stream is xoshiro256**, so any key reproduces the same stream
// regardless of which thread or in which order it is consumed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::initializer_list<std::uint64_t> key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  // Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  // Gamma(shape, scale = 1), Marsaglia-Tsang.
  double gamma(double shape) noexcept;
  // Inverse Gaussian with mean mu and shape lambda (variance mu^3 / lambda),
  // Michael-Schucany-Haas transformation.
  double inverse_gaussian(double mu, double lambda) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// FNV-1a over bytes; used to key streams by scenario content.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

}  // namespace glmcorr
