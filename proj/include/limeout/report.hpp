#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "limeout/audit.hpp"
#include "limeout/lime.hpp"

namespace limeout {

// Human-readable audit report: dataset summary, configuration echo, seed
// table, the paired original/ensemble accuracy table, and per-algorithm
// side-by-side Features/Contributions tables with verdicts.
std::string render_report_markdown(const AuditReport& report);

// Machine-readable companion carrying every field of the report (2-space
// indented JSON).  parse_report inverts it; render_report_markdown of the
// parsed value reproduces the original markdown byte for byte.
std::string render_report_json(const AuditReport& report);
AuditReport parse_report_json(const std::string& text);

// Text bar chart of one local explanation: one line per contribution,
// negative bars growing left and positive bars growing right from a shared
// axis, scaled to the largest magnitude.
std::string render_explanation_text(const Explanation& explanation,
                                    std::size_t instance_index,
                                    int bar_width = 24);

std::string render_explanation_json(const Explanation& explanation,
                                    std::size_t instance_index);

// Replay manifest: the command, canonical config echo, stage seeds, and
// every output file with its SHA-256 digest.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  std::vector<std::pair<std::string, std::string>> files;  // path -> digest
};

std::string render_manifest_json(const RunManifest& manifest);

// Fixed-precision decimal rendering used everywhere a float reaches a
// report, so output bytes do not depend on locale or formatting defaults.
std::string format_fixed(double value, int decimals);

}  // namespace limeout
