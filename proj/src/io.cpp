#include "nmwit/io.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "nmwit/errors.hpp"
#include "nmwit/version.hpp"

namespace nmwit::io {

namespace {

[[noreturn]] void spec_error(const std::string& where, const std::string& what) {
    throw SpecError((where.empty() ? std::string("/") : where) + ": " + what);
}

double finite_number(const json& j, const std::string& where) {
    if (!j.is_number()) spec_error(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) spec_error(where, "number is not finite");
    return v;
}

RateFunction rate_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return RateFunction::expression(j.get<std::string>());
        } catch (const ParseError& e) {
            spec_error(where, std::string("rate expression ") + e.what());
        }
    }
    if (j.is_number()) return RateFunction::constant(finite_number(j, where));
    if (j.is_object() && j.size() == 1 && j.contains("table")) {
        const json& rows = j.at("table");
        const std::string tw = where + "/table";
        if (!rows.is_array() || rows.empty()) spec_error(tw, "expected a non-empty array of [t, v]");
        std::vector<double> times, values;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const std::string rw = tw + "/" + std::to_string(k);
            if (!rows[k].is_array() || rows[k].size() != 2) spec_error(rw, "expected [t, v]");
            times.push_back(finite_number(rows[k][0], rw + "/0"));
            values.push_back(finite_number(rows[k][1], rw + "/1"));
            if (k > 0 && !(times[k] > times[k - 1]))
                spec_error(rw, "table times must be strictly increasing");
        }
        return RateFunction::table(std::move(times), std::move(values));
    }
    spec_error(where, "rate must be an expression string, a number, or {\"table\": [...]}");
}

}  // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte > 0 ? e.byte - 1 : 0, std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) spec_error(where, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) spec_error(where + "/0", "expected a non-empty row");
    const std::size_t cols = j[0].size();
    CMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rw = where + "/" + std::to_string(r);
        if (!j[r].is_array() || j[r].size() != cols) {
            std::ostringstream os;
            os << "expected a row of " << cols << " entries";
            spec_error(rw, os.str());
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const std::string ew = rw + "/" + std::to_string(c);
            const json& e = j[r][c];
            if (!e.is_array() || e.size() != 2) spec_error(ew, "expected [re, im]");
            m(r, c) = {finite_number(e[0], ew + "/0"), finite_number(e[1], ew + "/1")};
        }
    }
    return m;
}

LindbladGenerator parse_channel_spec(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) spec_error("", "channel spec must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "dim" && key != "hamiltonian" && key != "ops")
            spec_error("/" + key, "unknown field");
    if (!doc.contains("dim")) spec_error("/dim", "missing");
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 2)
        spec_error("/dim", "expected an integer >= 2");

    LindbladGenerator gen;
    gen.dim = doc["dim"].get<std::size_t>();
    if (doc.contains("hamiltonian")) gen.hamiltonian = matrix_from_json(doc["hamiltonian"], "/hamiltonian");

    if (!doc.contains("ops")) spec_error("/ops", "missing");
    const json& ops = doc["ops"];
    if (!ops.is_array()) spec_error("/ops", "expected an array");
    for (std::size_t a = 0; a < ops.size(); ++a) {
        const std::string w = "/ops/" + std::to_string(a);
        const json& op = ops[a];
        if (!op.is_object()) spec_error(w, "expected {\"matrix\": ..., \"rate\": ...}");
        for (const auto& [key, _] : op.items())
            if (key != "matrix" && key != "rate") spec_error(w + "/" + key, "unknown field");
        if (!op.contains("matrix")) spec_error(w + "/matrix", "missing");
        if (!op.contains("rate")) spec_error(w + "/rate", "missing");
        gen.ops.push_back(matrix_from_json(op["matrix"], w + "/matrix"));
        gen.rates.push_back(rate_from_json(op["rate"], w + "/rate"));
    }
    gen.validate();
    return gen;
}

LindbladGenerator load_channel_spec(const std::filesystem::path& path) {
    return parse_channel_spec(read_file(path));
}

CMatrix load_witness_matrix(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) spec_error("", "witness file must be a JSON object");
    if (doc.contains("witness")) {
        const json& w = doc["witness"];
        if (!w.is_object() || !w.contains("matrix")) spec_error("/witness/matrix", "missing");
        return matrix_from_json(w["matrix"], "/witness/matrix");
    }
    if (doc.contains("matrix")) return matrix_from_json(doc["matrix"], "/matrix");
    spec_error("", "expected a \"witness\" object or a \"matrix\" field");
}

std::string now_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json metadata_json(const Metadata& m) {
    json j;
    j["tool"] = "nmwit";
    j["version"] = kVersion;
    j["command"] = m.command;
    j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    j["eps"] = m.eps;
    j["timestamp"] = m.timestamp.empty() ? now_utc() : m.timestamp;
    return j;
}

json scan_report_json(const ScanReport& r, const Metadata& m) {
    json j;
    j["metadata"] = metadata_json(m);
    j["eps"] = r.eps;
    j["tol"] = r.tol;
    j["markovian"] = r.nm_intervals.empty();
    j["integrated_measure"] = r.integrated_measure;
    json intervals = json::array();
    for (const auto& [a, b] : r.nm_intervals) intervals.push_back({a, b});
    j["nm_intervals"] = std::move(intervals);
    json points = json::array();
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        const auto& p = r.points[k];
        points.push_back({{"t", r.grid[k]},
                          {"min_eigenvalue", p.min_eigenvalue},
                          {"deficit", p.trace_norm_deficit},
                          {"is_markovian", p.is_markovian},
                          {"negative_eigenvalues", p.negative_eigenvalues}});
    }
    j["points"] = std::move(points);
    return j;
}

std::string format_number(double v) { return json(v).dump(); }

std::string scan_report_csv(const ScanReport& r) {
    std::string out = "t,min_eigenvalue,deficit,is_markovian\n";
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        const auto& p = r.points[k];
        out += format_number(r.grid[k]) + ',' + format_number(p.min_eigenvalue) + ',' +
               format_number(p.trace_norm_deficit) + ',' + (p.is_markovian ? "true" : "false") +
               '\n';
    }
    return out;
}

json witness_json(const WitnessOperator& w) {
    return {{"kind", to_string(w.kind)},
            {"provenance", w.provenance},
            {"dim2", w.matrix.rows()},
            {"matrix", matrix_to_json(w.matrix)}};
}

json probe_report_json(const ProbeReport& r, const Metadata& m) {
    json j;
    j["metadata"] = metadata_json(m);
    j["probe"] = r.probe_name;
    j["n_trials"] = r.n_trials;
    j["failures"] = r.failures;
    j["worst_value"] = r.worst_value;
    j["tolerance"] = r.tolerance;
    json summary = json::object();
    for (const auto& [k, v] : r.summary) summary[k] = v;
    j["summary"] = std::move(summary);
    if (!r.note.empty()) j["note"] = r.note;
    json details = json::array();
    for (const auto& d : r.details) details.push_back({{"seed", d.seed}, {"value", d.value}});
    j["details"] = std::move(details);
    return j;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot rename onto " + path.string());
    }
}

}  // namespace nmwit::io
