#pragma once

#include <string_view>

namespace glmcorr {

enum class LinkKind { Log, Identity, Reciprocal, ReciprocalSquared };

std::string_view to_string(LinkKind kind);
LinkKind parse_link(std::string_view name);

// mu and its first three derivatives with respect to eta.
struct LinkChain {
  double mu = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// Link function d(mu) = eta.
//   Log:               eta = log(mu)
//   Identity:          eta = mu
//   Reciprocal:        eta = 1/mu      (dmu/deta < 0)
//   ReciprocalSquared: eta = 1/mu^2    (inverse-normal canonical link, eta > 0)
class Link {
 public:
  constexpr explicit Link(LinkKind kind) : kind_(kind) {}

  constexpr LinkKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

  double mu(double eta) const;
  double eta(double mu) const;
  LinkChain chain(double eta) const;

 private:
  LinkKind kind_;
};

}  // namespace glmcorr
