#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace confcal {

/// One identity check: what was tested, how hard, and how it went.
/// `passed` holds exactly when max_residual <= tolerance.
struct ReportEntry {
    std::string name;
    std::string paper_anchor;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Aggregate result of a verification run. Serialization is deterministic
/// for a given seed and configuration.
struct PropertyReport {
    std::vector<ReportEntry> entries;
    std::uint64_t seed = 0;
    std::string suite_version;

    bool all_passed() const {
        for (const auto& e : entries) {
            if (!e.passed) return false;
        }
        return !entries.empty();
    }
};

/// JSON rendering with numbers at `precision` significant digits
/// (default 17, enough to round-trip a double). Field order is fixed.
std::string serialize_report(const PropertyReport& report, int precision = 17);

/// Locale-independent rendering of a double with the given number of
/// significant digits.
std::string format_real(double v, int precision);

}  // namespace confcal
