#include "sostree/report.hpp"

#include <cstdio>

namespace sostree {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const SweepTable& table) {
    std::string out;
    for (const std::string& line : table.meta) {
        out += "# ";
        out += line;
        out.push_back('\n');
    }
    out += "theta,count,near_tangency,index,branch,x,y,residual,tangential\n";
    for (const SweepRow& row : table.rows) {
        out += fmt17(row.theta);
        out.push_back(',');
        out += std::to_string(row.count);
        out.push_back(',');
        out += row.near_tangency ? "1" : "0";
        out.push_back(',');
        out += std::to_string(row.index);
        out.push_back(',');
        out += row.branch;
        out.push_back(',');
        out += fmt17(row.x);
        out.push_back(',');
        out += fmt17(row.y);
        out.push_back(',');
        out += fmt17(row.residual);
        out.push_back(',');
        out += row.tangential ? "1" : "0";
        out.push_back('\n');
    }
    return out;
}

}  // namespace sostree
