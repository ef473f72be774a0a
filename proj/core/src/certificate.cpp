#include "regulab/certificate.hpp"

namespace regulab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "HOLDS";
    case Verdict::Violated:
      return "VIOLATED";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

void ScanMeta::set(const std::string& key, double v) {
  for (auto& [k, val] : values) {
    if (k == key) {
      val = v;
      return;
    }
  }
  values.emplace_back(key, v);
}

std::optional<double> ScanMeta::get(const std::string& key) const {
  for (const auto& [k, val] : values) {
    if (k == key) return val;
  }
  return std::nullopt;
}

}  // namespace regulab
