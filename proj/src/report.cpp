#include "patlab/report.hpp"

#include "patlab/errors.hpp"

namespace patlab {

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

} // namespace

std::string emit_report(const RunReport& report, const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json j;
        j["verb"] = report.verb;
        j["input_digest"] = report.input_digest;
        if (report.seed) j["seed"] = *report.seed;
        else j["seed"] = nullptr;
        j["tool_version"] = kToolVersion;
        j["results"] = report.results;
        j["elapsed_ms"] = report.elapsed_ms;
        return j.dump(2) + "\n";
    }
    if (format == "csv") {
        std::string out = "verb,input_digest,result,elapsed_ms,seed\n";
        out += report.verb;
        out += ',';
        out += report.input_digest;
        out += ',';
        out += csv_quote(report.results.dump());
        out += ',';
        out += std::to_string(report.elapsed_ms);
        out += ',';
        if (report.seed) out += std::to_string(*report.seed);
        out += '\n';
        return out;
    }
    fail("SchemaError", "format must be json or csv");
}

} // namespace patlab
