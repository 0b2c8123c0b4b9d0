#include "drw/common.hpp"

#include <cstdio>

namespace drw {

std::string to_string(UnitSystem u) {
  return u == UnitSystem::CmSeconds ? "cm-s" : "m-s";
}

UnitSystem unit_system_from_string(const std::string& s) {
  if (s == "cm-s") return UnitSystem::CmSeconds;
  if (s == "m-s") return UnitSystem::MSeconds;
  throw ConfigError("unknown unit system: " + s);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace drw
