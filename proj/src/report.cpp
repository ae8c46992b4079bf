#include "confcal/report.hpp"

#include <cstdio>

namespace confcal {

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}

}  // namespace

std::string format_real(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string serialize_report(const PropertyReport& report, int precision) {
    std::string out;
    out += "{\n";
    out += "  \"suite_version\": ";
    append_escaped(out, report.suite_version);
    out += ",\n";
    out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
    out += "  \"entries\": [\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const ReportEntry& e = report.entries[i];
        out += "    {\"name\": ";
        append_escaped(out, e.name);
        out += ", \"paper_anchor\": ";
        append_escaped(out, e.paper_anchor);
        out += ", \"samples\": " + std::to_string(e.samples);
        out += ", \"max_residual\": " + format_real(e.max_residual, precision);
        out += ", \"tolerance\": " + format_real(e.tolerance, precision);
        out += std::string(", \"passed\": ") + (e.passed ? "true" : "false") + "}";
        if (i + 1 < report.entries.size()) out += ",";
        out += "\n";
    }
    out += "  ]\n";
    out += "}\n";
    return out;
}

}  // namespace confcal
