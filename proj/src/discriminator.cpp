#include "discs/discriminator.hpp"

namespace discs {

DiscVariant disc_variant_from_string(const std::string& name) {
  if (name == "entire") return DiscVariant::EntireBuffer;
  if (name == "recent") return DiscVariant::Recent;
  if (name == "gamma") return DiscVariant::Gamma;
  throw std::invalid_argument("unknown disc_variant '" + name +
                              "' (expected entire|recent|gamma)");
}

std::string to_string(DiscVariant v) {
  switch (v) {
    case DiscVariant::EntireBuffer: return "entire";
    case DiscVariant::Recent: return "recent";
    case DiscVariant::Gamma: return "gamma";
  }
  return "entire";
}

}  // namespace discs
