#include "pfscale/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pfscale {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

const char* kSweepHeader =
    "eps,lambda,L,min_energy,bending,potential,fractional,boundary_potential,converged,wall_ms";

std::string schema_line() { return "# schema_version: " + std::to_string(kSchemaVersion) + "\n"; }

double parse_real(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw SchemaError("not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

std::string profile_csv(const ScalarField1D& f) {
    std::string s = schema_line() + "x,f\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += format_real(f.grid().node(i)) + "," + format_real(f[i]) + "\n";
    }
    return s;
}

std::string field2d_csv(const ScalarField2D& u) {
    const Grid2D& g = u.grid();
    std::string s = schema_line() + "x,y,u\n";
    for (int j = 0; j <= g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            if (!g.masked(i, j)) continue;
            s += format_real(g.x(i)) + "," + format_real(g.y(j)) + "," + format_real(u.at(i, j)) + "\n";
        }
    }
    return s;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string s = schema_line() + kSweepHeader + "\n";
    for (const auto& r : records) {
        const auto& b = r.breakdown;
        s += format_real(r.eps) + "," + format_real(r.lambda) + "," + format_real(r.L) + "," +
             format_real(r.min_energy) + "," + format_real(b.bending) + "," +
             format_real(b.potential) + "," + format_real(b.fractional) + "," +
             format_real(b.boundary_potential) + "," + (r.converged ? "1" : "0") + "," +
             std::to_string(r.wall_ms) + "\n";
    }
    return s;
}

std::vector<SweepRecord> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# schema_version:", 0) != 0) {
        throw SchemaError("sweep csv: missing schema_version line");
    }
    const std::string ver = line.substr(17);
    if (std::stoi(ver) != kSchemaVersion) {
        throw SchemaError("sweep csv: unsupported schema_version" + ver);
    }
    if (!std::getline(in, line) || line != kSweepHeader) {
        throw SchemaError("sweep csv: unexpected header");
    }
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw SchemaError("sweep csv: expected 10 fields in '" + line + "'");
        SweepRecord r;
        r.eps = parse_real(f[0]);
        r.lambda = parse_real(f[1]);
        r.L = parse_real(f[2]);
        r.min_energy = parse_real(f[3]);
        r.breakdown = EnergyBreakdown::sum_of(parse_real(f[4]), parse_real(f[5]), parse_real(f[6]),
                                              parse_real(f[7]));
        r.breakdown.total = r.min_energy;
        r.converged = f[8] == "1";
        r.wall_ms = std::stoll(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::json to_json(const EnergyBreakdown& b) {
    return {{"bending", b.bending},
            {"potential", b.potential},
            {"fractional", b.fractional},
            {"boundary_potential", b.boundary_potential},
            {"total", b.total}};
}

nlohmann::json to_json(const ConstantEstimate& e) {
    nlohmann::json j{{"constant", to_string(e.kind)},
                     {"R", e.R},
                     {"n", e.n},
                     {"value", e.value},
                     {"extrapolated", e.extrapolated},
                     {"converged", e.converged},
                     {"iterations", e.iterations},
                     {"grad_norm", e.grad_norm},
                     {"breakdown", to_json(e.breakdown)}};
    if (e.range_ok) j["range_ok"] = *e.range_ok;
    return j;
}

nlohmann::json to_json(const LiftReport& r) {
    return {{"method", to_string(r.method)},
            {"numerator", r.numerator},
            {"denominator", r.denominator},
            {"ratio", r.ratio},
            {"xx", r.xx},
            {"xy", r.xy},
            {"yy", r.yy}};
}

nlohmann::json to_json(const SweepRecord& r) {
    return {{"eps", r.eps},
            {"lambda", r.lambda},
            {"L", r.L},
            {"n", r.n},
            {"min_energy", r.min_energy},
            {"breakdown", to_json(r.breakdown)},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"grad_norm", r.grad_norm},
            {"init_energy", r.init_energy},
            {"under_resolved", r.under_resolved},
            {"wall_ms", r.wall_ms}};
}

nlohmann::json to_json(const PlateauReport& p) {
    return {{"last", p.last},
            {"previous", p.previous},
            {"rel_change", p.rel_change},
            {"plateau", p.plateau}};
}

std::string dump_document(nlohmann::json doc) {
    doc["schema_version"] = kSchemaVersion;
    return doc.dump(2) + "\n";
}

nlohmann::json parse_document(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version")) {
        throw SchemaError("json: missing schema_version");
    }
    if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion) {
        throw SchemaError("json: unsupported schema_version " + doc["schema_version"].dump());
    }
    return doc;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace pfscale
