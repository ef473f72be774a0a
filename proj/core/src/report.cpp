#include "regulab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace regulab {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_vec(const Vec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_number(v[i]);
  }
  return out;
}

std::string to_csv(const RunResult& r, bool timing) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& o : r.outcomes) {
    const auto& c = o.cert;
    const auto& m = c.meta;
    os << csv_field(o.label) << ',' << to_string(c.verdict) << ',' << format_number(c.margin) << ',';
    if (c.witness) {
      os << format_vec(c.witness->p) << ',' << format_vec(c.witness->x) << ',' << format_vec(c.witness->y) << ','
         << format_number(c.witness->value);
    } else {
      os << ",,,";
    }
    os << ',' << format_number(m.alpha) << ',' << format_number(m.delta) << ',' << format_number(m.mu) << ','
       << format_number(m.eta) << ',' << format_number(m.gamma) << ',' << format_number(m.tau) << ','
       << csv_field(m.grid_res) << ',' << (timing ? format_number(o.seconds) : std::string("-")) << '\n';
  }
  return os.str();
}

std::string to_report(const Scenario& s, const RunResult& r) {
  std::ostringstream os;
  os << "scenario: " << s.name << '\n';
  if (!s.description.empty()) os << "  " << s.description << '\n';
  if (s.mapping) os << "mapping: " << s.mapping->describe() << '\n';
  os << '\n';
  double total = 0.0;
  for (const auto& o : r.outcomes) {
    const auto& c = o.cert;
    const auto& m = c.meta;
    total += o.seconds;
    os << o.label << ": " << to_string(c.verdict);
    if (o.expect) os << " (expected " << to_string(*o.expect) << (o.matches ? ", ok" : ", MISMATCH") << ")";
    os << '\n';
    os << "  margin " << format_number(c.margin) << ", threshold " << format_number(m.threshold) << ", "
       << m.scanned << " points scanned in " << format_number(o.seconds) << " s\n";
    os << "  alpha " << format_number(m.alpha) << "  delta " << format_number(m.delta) << "  mu "
       << format_number(m.mu) << "  eta " << format_number(m.eta) << "  gamma " << format_number(m.gamma)
       << "  tau " << format_number(m.tau) << "  grid " << m.grid_res << '\n';
    if (c.witness) {
      os << "  witness p=(" << format_vec(c.witness->p) << ") x=(" << format_vec(c.witness->x) << ")";
      if (c.witness->y.size() > 0) os << " y=(" << format_vec(c.witness->y) << ")";
      os << " value " << format_number(c.witness->value) << '\n';
    }
    if (!c.failed.empty() && c.violated()) os << "  failed: " << c.failed << '\n';
    if (m.sampled) os << "  sampled: the verdict covers grid points only\n";
    for (const auto& cl : m.clamps) os << "  clamp: " << cl << '\n';
    for (const auto& f : c.flags) os << "  flag: " << f << '\n';
    for (const auto& [k, v] : m.values) os << "  " << k << " = " << format_number(v) << '\n';
    for (const auto& n : m.notes) os << "  note: " << n << '\n';
    os << '\n';
  }
  if (!r.conflicts.empty()) {
    os << "cross-validation conflicts:\n";
    for (const auto& c : r.conflicts) os << "  " << c << '\n';
  } else {
    os << "cross-validation: no conflicts\n";
  }
  os << "all expectations met: " << (r.all_expected ? "yes" : "no") << '\n';
  os << "total wall time: " << format_number(total) << " s\n";
  return os.str();
}

}  // namespace regulab
