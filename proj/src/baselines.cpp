#include "discs/baselines.hpp"

namespace discs {

MethodMode method_from_string(const std::string& name) {
  if (name == "discs") return MethodMode::Discs;
  if (name == "visr") return MethodMode::Visr;
  if (name == "diayn") return MethodMode::Diayn;
  if (name == "sac") return MethodMode::SacOnly;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected discs|visr|diayn|sac)");
}

std::string to_string(MethodMode m) {
  switch (m) {
    case MethodMode::Discs: return "discs";
    case MethodMode::Visr: return "visr";
    case MethodMode::Diayn: return "diayn";
    case MethodMode::SacOnly: return "sac";
  }
  return "discs";
}

}  // namespace discs
