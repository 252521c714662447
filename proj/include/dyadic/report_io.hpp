#pragma once

#include <string>

#include <json.hpp>

#include "dyadic/conditions.hpp"

namespace dyadic {

inline nlohmann::ordered_json report_to_json(const ConditionsReport& r) {
    nlohmann::ordered_json j;
    j["depth"] = r.depth;
    j["A"] = r.A;
    j["B"] = r.B;
    j["C"] = r.C;
    j["bmo_b"] = r.bmo_b;
    j["bmo_d"] = r.bmo_d;
    j["op_norm"] = r.op_norm;
    if (r.ratio_infinite)
        j["ratio"] = "inf";
    else
        j["ratio"] = r.ratio;
    j["witness_A"] = to_string(r.witness_A);
    j["witness_B"] = to_string(r.witness_B);
    j["witness_C"] = to_string(r.witness_C);
    j["seed"] = r.seed;
    j["b_hash"] = r.b_hash;
    j["d_hash"] = r.d_hash;
    return j;
}

// One CSV row per report; the header enumerates the fixed column set.
inline std::string report_csv_header() {
    return "depth,trial,seed,A,B,C,sum_ABC,bmo_b,bmo_d,op_norm,ratio,"
           "witness_A,witness_B,witness_C,b_hash,d_hash";
}

inline std::string report_csv_row(const ConditionsReport& r, int trial) {
    std::string row;
    row += std::to_string(r.depth);
    row += ',' + std::to_string(trial);
    row += ',' + std::to_string(r.seed);
    row += ',' + format_g17(r.A);
    row += ',' + format_g17(r.B);
    row += ',' + format_g17(r.C);
    row += ',' + format_g17(r.A + r.B + r.C);
    row += ',' + format_g17(r.bmo_b);
    row += ',' + format_g17(r.bmo_d);
    row += ',' + format_g17(r.op_norm);
    row += ',';
    row += r.ratio_infinite ? "inf" : format_g17(r.ratio);
    row += ',' + to_string(r.witness_A);
    row += ',' + to_string(r.witness_B);
    row += ',' + to_string(r.witness_C);
    row += ',' + r.b_hash;
    row += ',' + r.d_hash;
    return row;
}

}  // namespace dyadic
