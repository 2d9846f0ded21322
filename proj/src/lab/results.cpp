#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"

#include <openssl/evp.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef MAXLAB_VERSION
#define MAXLAB_VERSION "0.0.0"
#endif
#ifndef MAXLAB_GIT_REVISION
#define MAXLAB_GIT_REVISION "unknown"
#endif

namespace maxlab::lab {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::optional<double> parse_field(const std::string& s, std::size_t line_no) {
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw DataError("results.csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace

std::string format_number(std::optional<double> v) {
    if (!v) return {};
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", *v);
    return buf.data();
}

std::string format_results(const std::vector<ResultRow>& rows) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.scenario;
        for (const auto& v : {r.xi_1, r.xi_2, r.t, r.l2_diff, r.rel_entropy, r.energy, r.dissipation,
                              r.piola_residual, r.constitutive_residual}) {
            out += ',';
            out += format_number(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kResultsHeader) throw DataError("results.csv: header does not match");
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw DataError("results.csv line " + std::to_string(line_no) + ": expected 10 fields");
        ResultRow r;
        r.scenario = f[0];
        std::optional<double>* slots[] = {&r.xi_1,   &r.xi_2,       &r.t,           &r.l2_diff,      &r.rel_entropy,
                                          &r.energy, &r.dissipation, &r.piola_residual, &r.constitutive_residual};
        for (std::size_t k = 0; k < 9; ++k) *slots[k] = parse_field(f[k + 1], line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("sha256: digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += kHex[md[k] >> 4];
        out += kHex[md[k] & 0xF];
    }
    return out;
}

std::string code_version() { return std::string(MAXLAB_VERSION) + "+" + MAXLAB_GIT_REVISION; }

void write_outputs(const ScenarioConfig& cfg, const std::string& config_text, const ScenarioResult& result) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

    const std::string csv = format_results(result.rows);
    nlohmann::json report = result.report;
    report["schema_version"] = kReportSchemaVersion;
    report["scenario"] = std::string(to_string(cfg.scenario));
    report["ok"] = result.ok;
    const std::string report_text = report.dump(2) + "\n";

    const std::string canonical = echo_config(cfg);
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    nlohmann::json manifest = {
        {"schema_version", kReportSchemaVersion},
        {"code_version", code_version()},
        {"scenario", std::string(to_string(cfg.scenario))},
        {"seed", cfg.seed},
        {"threads", threads},
        {"config", canonical},
        {"config_source", config_text},
        {"checksums",
         {{"config", sha256_hex(canonical)},
          {"config_source", sha256_hex(config_text)},
          {"results.csv", sha256_hex(csv)},
          {"report.json", sha256_hex(report_text)}}},
    };

    write_file(dir / "results.csv", csv);
    write_file(dir / "report.json", report_text);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace maxlab::lab
