// io.hpp: channel-spec ingestion and report serialization
//
// Channel spec:
//   {"dim": 2,
//    "hamiltonian": [[[re, im], ...], ...],            (optional)
//    "ops": [{"matrix": [[[re, im], ...], ...],
//             "rate": "cos(t)" | 0.5 | {"table": [[t, v], ...]}}, ...]}
//
// Reports are JSON objects {"metadata": {...}, ...payload}. Numbers are written
// in shortest round-trip form, so parsing them back is lossless.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nmwit/channels.hpp"
#include "nmwit/choi.hpp"
#include "nmwit/geometry.hpp"
#include "nmwit/linalg.hpp"
#include "nmwit/witness.hpp"

namespace nmwit::io {

using json = nlohmann::json;

// Throws ParseError (byte offset) on malformed JSON, SpecError (JSON pointer,
// plus byte offset into rate expressions) on invalid content, and the
// generator's own validation errors for bad shapes or non-Hermitian H.
LindbladGenerator parse_channel_spec(std::string_view text);
LindbladGenerator load_channel_spec(const std::filesystem::path& path);

json parse_json(std::string_view text);
std::string read_file(const std::filesystem::path& path);

json matrix_to_json(const CMatrix& m);
// `where` is the JSON pointer used in error messages.
CMatrix matrix_from_json(const json& j, const std::string& where);

// A witness report (field "witness") or a bare {"matrix": ...} document.
CMatrix load_witness_matrix(std::string_view text);

struct Metadata {
    std::optional<std::uint64_t> seed;
    double eps = 0.0;
    std::string command;
    std::string timestamp;  // filled by now_utc() unless set
};

std::string now_utc();
json metadata_json(const Metadata& m);

json scan_report_json(const ScanReport& r, const Metadata& m);
// Columns t, min_eigenvalue, deficit, is_markovian.
std::string scan_report_csv(const ScanReport& r);

json witness_json(const WitnessOperator& w);
json probe_report_json(const ProbeReport& r, const Metadata& m);

// The same text json::dump writes for v.
std::string format_number(double v);

// Writes through a sibling temporary file and a rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace nmwit::io
