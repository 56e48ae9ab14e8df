#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace patlab {

inline constexpr const char* kToolVersion = "0.1.0";

// One batch invocation.  Everything except elapsed_ms is a pure function of
// (verb, params, seed); the wall-clock field is the only part of a report
// that may differ between identical runs.
struct RunReport {
    std::string verb;
    std::string input_digest;
    std::optional<std::uint64_t> seed;
    nlohmann::json results;
    std::int64_t elapsed_ms = 0;
};

// FNV-1a 64 of the canonical parameter bytes, in hex.
std::string digest_hex(const std::string& bytes);

// format "json" or "csv"; csv flattens the results to a single quoted cell
// under the fixed header verb,input_digest,result,elapsed_ms,seed.
std::string emit_report(const RunReport& report, const std::string& format);

} // namespace patlab
