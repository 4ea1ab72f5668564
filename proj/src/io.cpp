#include "tsembed/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tsembed::io {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
    return out;
}

nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json to_json(const TimeScale& ts) {
    return {{"points", std::vector<double>(ts.points().begin(), ts.points().end())}};
}

TimeScale timescale_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
        throw DomainError("time scale JSON must be an object with a \"points\" array");
    }
    std::vector<double> pts;
    for (const auto& v : j["points"]) {
        if (!v.is_number()) throw DomainError("time scale points must be numbers");
        pts.push_back(v.get<double>());
    }
    return TimeScale::arbitrary(std::move(pts));
}

void write_timescale_csv(std::ostream& os, const TimeScale& ts) {
    os << "t\n";
    for (double t : ts.points()) os << format_double(t) << '\n';
}

TimeScale read_timescale_csv(std::istream& is) {
    std::vector<double> pts;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        double v = 0.0;
        if (!parse_double(line, v)) {
            if (first) {
                first = false;
                continue;
            }
            throw DomainError("bad time scale CSV value '" + line + "'");
        }
        first = false;
        pts.push_back(v);
    }
    return TimeScale::arbitrary(std::move(pts));
}

TimeScale load_timescale(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open time scale file " + path.string());
    if (path.extension() == ".json") {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw DomainError("invalid time scale JSON in " + path.string() + ": " + e.what());
        }
        return timescale_from_json(j);
    }
    return read_timescale_csv(in);
}

void write_grid_csv(std::ostream& os, const TimeScale& ts, const GridFunction& f) {
    os << "index,t,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t k = f.first() + i;
        os << k << ',' << format_double(ts[k]) << ',' << format_double(f[i]) << '\n';
    }
}

GridFunction read_grid_csv(std::istream& is, const TimeScale& ts, Domain domain) {
    std::string line;
    std::getline(is, line);  // header
    std::vector<double> values;
    const std::size_t first = first_index(domain);
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        double v = 0.0;
        if (cells.size() != 3 || !parse_double(cells[2], v)) {
            throw DomainError("bad grid CSV row '" + line + "'");
        }
        if (std::stoul(cells[0]) != first + values.size()) {
            throw DomainError("grid CSV indices are not contiguous");
        }
        values.push_back(v);
    }
    GridFunction f(domain, std::move(values));
    f.require(ts, domain);
    return f;
}

void write_residual_csv(std::ostream& os, const TimeScale& ts, const Residual& r) {
    write_grid_csv(os, ts, r.values);
}

nlohmann::json residual_summary(const TimeScale& ts, const Residual& r) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    j["c_estimate"] = r.c_estimate ? nlohmann::json(*r.c_estimate) : nlohmann::json(nullptr);
    j["inf_norm"] = r.inf_norm();
    j["l2_norm_weighted"] = r.l2_norm_weighted(ts);
    return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const Lagrangian& l) {
    const GridFunction dx = delta_derivative(tr.ts, tr.x);
    const EnergySeries e = energy_series(tr, l);
    os << "index,t,x,v_forward,E\n";
    const std::size_t n = tr.ts.last();
    for (std::size_t k = 0; k <= n; ++k) {
        os << k << ',' << format_double(tr.ts[k]) << ',' << format_double(tr.x[k]) << ',';
        if (k < n) os << format_double(dx[k]) << ',' << format_double(e.e[k]);
        else os << ',';
        os << '\n';
    }
}

nlohmann::json to_json(const ConvergenceReport& r) {
    nlohmann::json j;
    j["scheme"] = to_string(r.scheme);
    j["problem"] = r.problem;
    j["steps"] = r.steps;
    j["errors"] = r.errors;
    j["slope"] = number_or_null(r.slope);
    j["degenerate"] = r.degenerate;
    return j;
}

void write_loglog_csv(std::ostream& os, const ConvergenceReport& r) {
    os << "h,error\n";
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        os << format_double(r.steps[i]) << ',' << format_double(r.errors[i]) << '\n';
    }
}

void write_energy_csv(std::ostream& os, const EnergySeries& s) {
    os << "index,t,E\n";
    for (std::size_t k = 0; k < s.e.size(); ++k) {
        os << k << ',' << format_double(s.t[k]) << ',' << format_double(s.e[k]) << '\n';
    }
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

}  // namespace tsembed::io
