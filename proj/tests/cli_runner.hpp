#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <regex>
#include <stdexcept>
#include <string>

namespace nmwit::test {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// Runs a shell command, capturing stdout; stderr is discarded.
inline CliResult run_cli(const std::string& command) {
    CliResult r;
    FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + command);
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string strip_timestamp(const std::string& json_text) {
    static const std::regex ts(R"re("timestamp": "[^"]*")re");
    return std::regex_replace(json_text, ts, R"("timestamp": "")");
}

}  // namespace nmwit::test
