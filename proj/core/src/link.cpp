#include "glmcorr/link.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "glmcorr/errors.hpp"

namespace glmcorr {

std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::Log: return "log";
    case LinkKind::Identity: return "identity";
    case LinkKind::Reciprocal: return "reciprocal";
    case LinkKind::ReciprocalSquared: return "reciprocal-squared";
  }
  return "unknown";
}

LinkKind parse_link(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "log") return LinkKind::Log;
  if (s == "identity") return LinkKind::Identity;
  if (s == "reciprocal" || s == "inverse") return LinkKind::Reciprocal;
  if (s == "reciprocal-squared" || s == "inverse-squared" || s == "1/mu^2") return LinkKind::ReciprocalSquared;
  throw DomainError("unknown link '" + std::string(name) + "'");
}

double Link::mu(double eta) const { return chain(eta).mu; }

double Link::eta(double mu) const {
  if (!std::isfinite(mu)) throw DomainError("link: mean must be finite");
  switch (kind_) {
    case LinkKind::Log:
      if (!(mu > 0.0)) throw DomainError("log link requires mu > 0");
      return std::log(mu);
    case LinkKind::Identity: return mu;
    case LinkKind::Reciprocal:
      if (mu == 0.0) throw DomainError("reciprocal link requires mu != 0");
      return 1.0 / mu;
    case LinkKind::ReciprocalSquared:
      if (!(mu > 0.0)) throw DomainError("reciprocal-squared link requires mu > 0");
      return 1.0 / (mu * mu);
  }
  return 0.0;
}

LinkChain Link::chain(double eta) const {
  if (!std::isfinite(eta)) throw DomainError("link: linear predictor must be finite");
  switch (kind_) {
    case LinkKind::Log: {
      const double e = std::exp(eta);
      return {e, e, e, e};
    }
    case LinkKind::Identity: return {eta, 1.0, 0.0, 0.0};
    case LinkKind::Reciprocal: {
      if (eta == 0.0) throw DomainError("reciprocal link requires eta != 0");
      const double inv = 1.0 / eta;
      const double inv2 = inv * inv;
      return {inv, -inv2, 2.0 * inv2 * inv, -6.0 * inv2 * inv2};
    }
    case LinkKind::ReciprocalSquared: {
      if (!(eta > 0.0)) throw DomainError("reciprocal-squared link requires eta > 0");
      // mu = eta^(-1/2)
      const double mu = 1.0 / std::sqrt(eta);
      const double inv = 1.0 / eta;
      return {mu, -0.5 * mu * inv, 0.75 * mu * inv * inv, -1.875 * mu * inv * inv * inv};
    }
  }
  return {};
}

}  // namespace glmcorr
