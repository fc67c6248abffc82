#include "specineq/inequalities.hpp"

#include <stdexcept>

namespace specineq {

std::string to_string(AmbientKind kind) {
  switch (kind) {
    case AmbientKind::Euclidean: return "euclidean";
    case AmbientKind::Sphere: return "sphere";
    case AmbientKind::ProjectiveR: return "projective-r";
    case AmbientKind::ProjectiveC: return "projective-c";
    case AmbientKind::ProjectiveQ: return "projective-q";
    case AmbientKind::ProjectiveCOddDim: return "projective-c-odd";
    case AmbientKind::ProjectiveCTotallyReal: return "projective-c-totally-real";
  }
  return "euclidean";
}

AmbientKind parse_ambient(const std::string& name) {
  for (auto kind : {AmbientKind::Euclidean, AmbientKind::Sphere, AmbientKind::ProjectiveR, AmbientKind::ProjectiveC,
                    AmbientKind::ProjectiveQ, AmbientKind::ProjectiveCOddDim, AmbientKind::ProjectiveCTotallyReal})
    if (to_string(kind) == name) return kind;
  throw ConfigError("unknown ambient space '" + name + "'");
}

}  // namespace specineq
