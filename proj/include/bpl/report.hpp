#pragma once

// Run reports: versioned JSON envelopes written by the command line tool,
// a tolerant numeric comparator for them, and a small flat-TOML config
// reader so experiments can be described without JSON escaping.

#include <string>
#include <vector>

#include <json.hpp>

namespace bpl {

inline constexpr const char* kReportFormatVersion = "1.0";

nlohmann::json make_report(const std::string& command, const nlohmann::json& config_echo,
                           const nlohmann::json& results, std::uint64_t seed);

struct ReportDiff {
    std::string path;
    std::string detail;
};

// numeric leaves compared with |a-b| <= tol * max(1, |a|, |b|); everything
// under "meta" (timings and the like) is ignored; missing keys and type or
// shape mismatches are reported as diffs
std::vector<ReportDiff> compare_reports(const nlohmann::json& a, const nlohmann::json& b,
                                        double tol);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

// flat TOML subset: key = value with numbers, booleans, quoted strings and
// one-level arrays; '#' comments; [section] headers prefix keys "section.key"
// (the config loader only uses top-level keys, sections are preserved as-is)
nlohmann::json toml_lite_parse(const std::string& text);

// dispatch on extension: .json or .toml
nlohmann::json read_config_file(const std::string& path);

}  // namespace bpl
