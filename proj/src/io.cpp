#include "heun_rsj/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace heun_rsj {

namespace {

void write_value(std::ostream& out, const Json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent), ' ');
    switch (v.type()) {
        case Json::value_t::number_float: {
            const double x = v.get<double>();
            out << (std::isfinite(x) ? format_double(x) : "null");
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                out << pad;
                write_value(out, v[i], indent + 2);
                out << (i + 1 < v.size() ? ",\n" : "\n");
            }
            out << close_pad << ']';
            return;
        }
        case Json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            std::size_t i = 0;
            for (const auto& [key, item] : v.items()) {
                out << pad << Json(key).dump() << ": ";
                write_value(out, item, indent + 2);
                out << (++i < v.size() ? ",\n" : "\n");
            }
            out << close_pad << '}';
            return;
        }
        default:
            out << v.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_json(std::ostream& out, const Json& value) {
    write_value(out, value, 0);
    out << '\n';
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    for (const auto& name : traj.columns()) out << ',' << csv_field(name);
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_double(traj.time(i));
        for (std::size_t c = 0; c < traj.width(); ++c) out << ',' << format_double(traj.value(i, c));
        out << '\n';
    }
}

Json trajectory_to_json(const Trajectory& traj) {
    Json j;
    j["schema"] = kSchema;
    j["columns"] = Json::array({"t"});
    for (const auto& name : traj.columns()) j["columns"].push_back(name);
    Json rows = Json::array();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        Json row = Json::array({traj.time(i)});
        for (std::size_t c = 0; c < traj.width(); ++c) row.push_back(traj.value(i, c));
        rows.push_back(std::move(row));
    }
    j["samples"] = std::move(rows);
    return j;
}

Json polynomial_to_json(const HeunPolynomial& P) {
    Json j;
    j["n"] = P.n();
    j["mu"] = P.mu();
    j["lambda"] = P.lambda();
    j["coeffs"] = Json(std::vector<double>(P.coeffs().begin(), P.coeffs().end()));
    return j;
}

}  // namespace heun_rsj
