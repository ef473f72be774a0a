#pragma once

#include <string>

#include "regulab/scenario.hpp"

namespace regulab {

/// CSV header, in this exact column order.
inline constexpr const char* kCsvHeader =
    "check,verdict,margin,witness_p,witness_x,witness_y,value,alpha,delta,mu,eta,gamma,tau,grid_res,seconds";

/// Deterministic CSV: fixed row order and number formatting. The seconds
/// column holds "-" unless `timing` is set.
std::string to_csv(const RunResult& r, bool timing = false);

/// Human-readable report including wall times, witnesses, flags and notes.
std::string to_report(const Scenario& s, const RunResult& r);

/// Number formatting shared by CSV and report (%.12g, inf and -inf spelled out).
std::string format_number(double v);
/// Coordinates joined with ';'.
std::string format_vec(const Vec& v);

}  // namespace regulab
