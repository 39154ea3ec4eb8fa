#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wavechannel/errors.hpp"
#include "wavechannel/poly.hpp"
#include "wavechannel/profile.hpp"
#include "wavechannel/radial_grid.hpp"
#include "wavechannel/report.hpp"
#include "wavechannel/sampled_line.hpp"

namespace wavechannel {

// ---------------------------------------------------------------------------------------------
// RFC-4180 CSV.

using CsvTable = std::vector<std::vector<std::string>>;

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\r\n";
}

inline CsvTable parse_csv(const std::string& text) {
    CsvTable rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    std::size_t i = 0;
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
    auto end_row = [&] {
        row.push_back(field);
        field.clear();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(row);
        row.clear();
        any = false;
    };
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty()) throw ParseError("stray quote inside an unquoted CSV field");
            quoted = any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    if (any || !field.empty() || !row.empty()) end_row();
    return rows;
}

inline std::string read_all(std::istream& is) {
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline double parse_number(const std::string& s, std::size_t row) {
    std::size_t pos = 0;
    double v = 0;
    std::string t = s;
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    std::size_t b = t.find_first_not_of(" \t");
    t = b == std::string::npos ? "" : t.substr(b);
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (t.empty() || pos != t.size() || !std::isfinite(v))
        throw ParseError("row " + std::to_string(row) + ": '" + s + "' is not a finite number");
    return v;
}

// Numeric columns under the given header; at least min_rows data rows.
inline std::vector<std::vector<double>> numeric_table(const std::string& text, const std::vector<std::string>& header,
                                                      std::size_t min_rows) {
    const CsvTable t = parse_csv(text);
    if (t.empty()) throw ParseError("empty CSV input");
    if (t[0] != header) {
        std::string h;
        for (std::size_t i = 0; i < header.size(); ++i) h += (i ? "," : "") + header[i];
        throw ParseError("CSV header must be '" + h + "'");
    }
    std::vector<std::vector<double>> cols(header.size());
    for (std::size_t r = 1; r < t.size(); ++r) {
        if (t[r].size() != header.size())
            throw ParseError("row " + std::to_string(r) + " has " + std::to_string(t[r].size()) + " fields, expected " +
                             std::to_string(header.size()));
        for (std::size_t c = 0; c < header.size(); ++c) cols[c].push_back(parse_number(t[r][c], r));
    }
    if (cols[0].size() < min_rows)
        throw ParseError("CSV input needs at least " + std::to_string(min_rows) + " data rows");
    return cols;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Profiles: header s,value on a uniform grid.

inline void write_line_csv(std::ostream& os, const SampledLine& g) {
    write_csv_row(os, {"s", "value"});
    for (std::size_t i = 0; i < g.n(); ++i) write_csv_row(os, {format_number(g.node(i)), format_number(g[i])});
}

inline SampledLine parse_line_csv(const std::string& text) {
    const auto cols = detail::numeric_table(text, {"s", "value"}, 2);
    const auto& s = cols[0];
    const std::size_t n = s.size();
    const double h = (s.back() - s.front()) / double(n - 1);
    if (!(h > 0)) throw ParseError("profile abscissae must increase");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(s[i] - (s.front() + double(i) * h)) > 1e-7 * h)
            throw ParseError("profile abscissae must be uniformly spaced (row " + std::to_string(i + 1) + ")");
    return SampledLine(s.front(), s.back(), cols[1]);
}

// ---------------------------------------------------------------------------------------------
// Fields: header r,u0,u1, one row per quadrature node.

inline void write_field_csv(std::ostream& os, const RadialField& f) {
    write_csv_row(os, {"r", "u0", "u1"});
    const auto& r = f.grid().nodes();
    for (std::size_t i = 0; i < r.size(); ++i)
        write_csv_row(os, {format_number(r[i]), format_number(f.u0()[i]), format_number(f.u1()[i])});
}

namespace detail {

// Breakpoints of a composite Gauss-Legendre grid whose nodes are r, or empty if none matches.
inline std::vector<double> recover_panels(const std::vector<double>& r, int p) {
    const std::size_t n = r.size();
    if (p < 2 || n % std::size_t(p) != 0) return {};
    const QuadratureRule q = gauss_legendre(p);
    const double x0 = q.x.front(), x1 = q.x.back();
    std::vector<double> br;
    const double scale = std::max(std::abs(r.back()), 1.0);
    for (std::size_t k = 0; k < n / std::size_t(p); ++k) {
        const double u = r[k * p], v = r[k * p + p - 1];
        const double half = (v - u) / (x1 - x0), mid = u - half * x0;
        const double a = mid - half, b = mid + half;
        if (!(half > 0)) return {};
        for (int j = 0; j < p; ++j)
            if (std::abs(mid + half * q.x[j] - r[k * p + j]) > 1e-9 * scale) return {};
        if (br.empty()) {
            br.push_back(std::max(a, a > -1e-9 * scale ? 0.0 : a));
        } else if (std::abs(br.back() - a) > 1e-9 * scale) {
            return {};
        }
        br.push_back(b);
    }
    if (br.front() < 0) return {};
    return br;
}

}  // namespace detail

// Rows written by write_field_csv are mapped back onto their panels; other increasing samples are
// interpolated (local cubic) onto a fresh panel grid covering the same interval.
inline RadialField parse_field_csv(const std::string& text, const DimensionContext& ctx) {
    const auto cols = detail::numeric_table(text, {"r", "u0", "u1"}, 2);
    const auto& r = cols[0];
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw ParseError("field radii must increase (row " + std::to_string(i + 1) + ")");
    if (r.front() < 0) throw ParseError("field radii must be >= 0");
    for (int p : {16, 8, 12, 20, 24, 32, 10, 6, 4}) {
        auto br = detail::recover_panels(r, p);
        if (br.empty()) continue;
        auto grid = std::make_shared<const RadialGrid>(std::move(br), p);
        return RadialField(ctx, grid, cols[1], cols[2]);
    }
    const std::size_t n = r.size();
    if (n < 4) throw ParseError("field needs at least 4 rows when it is not on Gauss-Legendre panels");
    const double width = 4 * (r.back() - r.front()) / double(n - 1);
    auto grid = std::make_shared<const RadialGrid>(RadialGrid::uniform(r.front(), r.back(), width));
    auto interp = [&](const std::vector<double>& v) {
        return [&r, &v, n](double x) {
            std::size_t i = std::size_t(std::upper_bound(r.begin(), r.end(), x) - r.begin());
            i = std::clamp<std::size_t>(i, 2, n - 2) - 2;
            double s = 0;
            for (std::size_t j = i; j < i + 4; ++j) {
                double l = 1;
                for (std::size_t k = i; k < i + 4; ++k)
                    if (k != j) l *= (x - r[k]) / (r[j] - r[k]);
                s += l * v[j];
            }
            return s;
        };
    };
    return RadialField::from_functions(ctx, grid, interp(cols[1]), interp(cols[2]));
}

// ---------------------------------------------------------------------------------------------

inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_all(in);
}

inline void write_report_csv(std::ostream& os, std::vector<VerificationReport> reports) {
    sort_reports(reports);
    write_csv_row(os, {"check", "dim", "R", "seed", "ratio", "pass"});
    for (const auto& r : reports)
        write_csv_row(os, {r.check, std::to_string(r.dim), format_number(r.R), std::to_string(r.seed),
                           format_number(r.ratio), r.pass ? "true" : "false"});
}

inline nlohmann::ordered_json to_json(const PolyOnInterval& p) {
    nlohmann::ordered_json j;
    j["coeffs"] = p.coeffs();
    j["parity"] = to_string(p.parity());
    std::vector<std::string> exact;
    for (const auto& c : p.exact()) exact.push_back(c.str());
    j["exact"] = exact;
    return j;
}

}  // namespace wavechannel
