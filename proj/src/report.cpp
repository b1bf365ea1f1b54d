#include "bvp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bvp {

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(Complex v) {
    if (v.imag() == 0.0) return format_float(v.real());
    std::string im = format_float(std::abs(v.imag()));
    return format_float(v.real()) + (v.imag() < 0 ? "-" : "+") + im + "i";
}

std::string csv_escape(const std::string& field) {
    bool need = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!need) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

Json complex_json(Complex v) {
    if (v.imag() == 0.0) return Json(v.real());
    return Json::array({v.real(), v.imag()});
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void dump_rec(const Json& j, std::ostream& os, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                os << pad1 << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump_rec(it.value(), os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << nl;
            }
            os << pad << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            for (size_t i = 0; i < j.size(); ++i) {
                os << pad1;
                dump_rec(j[i], os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << nl;
            }
            os << pad << ']';
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (std::isnan(v) || std::isinf(v)) os << Json(format_float(v)).dump();
            else os << format_float(v);
            return;
        }
        default:
            os << j.dump();
            return;
    }
}

}  // namespace

void dump_json(const Json& j, std::ostream& os, int indent) {
    dump_rec(j, os, indent, 0);
    os << '\n';
}

std::string dump_json(const Json& j) {
    std::ostringstream ss;
    dump_json(j, ss, 2);
    return ss.str();
}

}  // namespace bvp
