#pragma once

#include <string>
#include <vector>

namespace sostree {

/// Shortest decimal string that round-trips a double (17 significant digits).
std::string fmt17(double v);

/// One emitted solution of a parameter sweep, in long format: rows sharing a
/// theta repeat the per-theta fields (count, near_tangency).
struct SweepRow {
    double theta = 0.0;
    int count = 0;
    bool near_tangency = false;
    int index = 0;
    std::string branch;
    double x = 0.0;
    double y = 0.0;
    double residual = 0.0;
    bool tangential = false;
};

struct SweepTable {
    std::vector<std::string> meta;  // emitted as '#'-prefixed lines before the header
    std::vector<SweepRow> rows;
};

/// Deterministic CSV: meta lines, one header line, then one line per row.
std::string to_csv(const SweepTable& table);

}  // namespace sostree
