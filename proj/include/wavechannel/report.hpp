#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "wavechannel/errors.hpp"

namespace wavechannel {

constexpr int kReportSchema = 1;

// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct VerificationReport {
    std::string check;
    int dim = 0;
    double R = 0;
    std::uint64_t seed = 0;
    std::string inputs_digest;  // digest of the generated trial data
    std::map<std::string, double> measured;
    double paper_constant = 0;
    double ratio = 0;
    double tolerance = 0;
    bool pass = false;
    std::string note;
};

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["dim"] = r.dim;
    j["R"] = r.R;
    j["seed"] = r.seed;
    j["inputs_digest"] = r.inputs_digest;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.measured) m[k] = v;
    j["measured"] = m;
    j["paper_constant"] = r.paper_constant;
    j["ratio"] = r.ratio;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline VerificationReport report_from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.check = j.at("check").get<std::string>();
    r.dim = j.at("dim").get<int>();
    r.R = j.at("R").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.inputs_digest = j.value("inputs_digest", std::string());
    if (j.contains("measured"))
        for (const auto& [k, v] : j.at("measured").items()) r.measured[k] = v.get<double>();
    r.paper_constant = j.value("paper_constant", 0.0);
    r.ratio = j.at("ratio").get<double>();
    r.tolerance = j.value("tolerance", 0.0);
    r.pass = j.at("pass").get<bool>();
    r.note = j.value("note", std::string());
    return r;
}

// Reports ordered by (check, dim, R, seed): never by completion order.
inline void sort_reports(std::vector<VerificationReport>& v) {
    std::stable_sort(v.begin(), v.end(), [](const VerificationReport& a, const VerificationReport& b) {
        return std::tie(a.check, a.dim, a.R, a.seed) < std::tie(b.check, b.dim, b.R, b.seed);
    });
}

inline nlohmann::ordered_json report_document(std::vector<VerificationReport> reports) {
    sort_reports(reports);
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    std::size_t failed = 0;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        failed += r.pass ? 0 : 1;
    }
    doc["count"] = reports.size();
    doc["failed"] = failed;
    doc["reports"] = arr;
    return doc;
}

inline std::vector<VerificationReport> reports_from_document(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("schema", 0) != kReportSchema || !doc.contains("reports"))
        throw ParseError("not a schema-1 report document");
    std::vector<VerificationReport> out;
    for (const auto& j : doc.at("reports")) out.push_back(report_from_json(j));
    return out;
}

}  // namespace wavechannel
