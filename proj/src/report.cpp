#include "shrinklab/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "shrinklab/errors.hpp"

namespace shrinklab {

std::string serialize_report(const nlohmann::json& report) {
    // nlohmann::json (non-ordered) keeps keys sorted; dump is deterministic.
    return report.dump(2) + "\n";
}

void write_report(const nlohmann::json& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open report file for writing: " + path);
    out << serialize_report(report);
}

std::string config_hash(const nlohmann::json& config) {
    std::string bytes = config.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace shrinklab
