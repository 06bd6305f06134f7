#include "discs/hipps.hpp"

namespace discs {

HippsSource hipps_source_from_string(const std::string& name) {
  if (name == "posterior") return HippsSource::Posterior;
  if (name == "prior") return HippsSource::Prior;
  throw std::invalid_argument("unknown hipps_source '" + name +
                              "' (expected posterior|prior)");
}

std::string to_string(HippsSource s) {
  return s == HippsSource::Posterior ? "posterior" : "prior";
}

}  // namespace discs
