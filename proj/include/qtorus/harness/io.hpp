#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtorus/harness/config.hpp"
#include "qtorus/harness/scenario.hpp"

namespace qtorus::harness {

#ifndef QTORUS_VERSION
#define QTORUS_VERSION "unknown"
#endif

inline std::string format_value(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

// Minimal CSV writer: one header line, comma separated, 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline void write_series_csv(const std::filesystem::path& path, const ConcurrenceSeries& s) {
    CsvWriter csv(path, {"step", "value", "std_error", "estimator", "lower_bound", "purity", "trace"});
    for (const auto& r : s.records) {
        csv.row({std::to_string(r.step), format_value(r.value), format_value(r.std_error), to_string(r.kind),
                 format_value(r.lower_bound), format_value(r.purity), format_value(r.trace)});
    }
}

// Wall times live apart from the series so series files stay reproducible.
inline void write_timing_csv(const std::filesystem::path& path, const ConcurrenceSeries& s) {
    CsvWriter csv(path, {"step", "wall_time_s"});
    for (const auto& r : s.records) csv.row({std::to_string(r.step), format_value(r.wall_time)});
}

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    CsvWriter csv(path, {"q0", "p0", "c_unitary", "c_noisy", "c_noisy_std_error", "c_noisy_lower", "island"});
    for (const auto& r : rows) {
        csv.row({format_value(r.q0), format_value(r.p0), format_value(r.c_unitary), format_value(r.c_noisy),
                 format_value(r.c_noisy_std_error), format_value(r.c_noisy_lower), r.island ? "1" : "0"});
    }
}

inline void write_portrait_csv(const std::filesystem::path& path, const Portrait& portrait) {
    CsvWriter csv(path, {"seed_id", "step", "q", "p"});
    for (std::size_t s = 0; s < portrait.orbits.size(); ++s)
        for (std::size_t t = 0; t < portrait.orbits[s].size(); ++t)
            csv.row({std::to_string(s), std::to_string(t), format_value(portrait.orbits[s][t].q),
                     format_value(portrait.orbits[s][t].p)});
}

inline void write_selfcheck_csv(const std::filesystem::path& path, const SelfCheckReport& report) {
    CsvWriter csv(path, {"check", "residual", "tolerance", "passed"});
    for (const auto& e : report.entries)
        csv.row({e.name, format_value(e.residual), format_value(e.tolerance), e.passed ? "1" : "0"});
}

inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 15> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        static constexpr char digits[] = "0123456789abcdef";
        hex << digits[md[i] >> 4] << digits[md[i] & 15];
    }
    return hex.str();
}

// manifest.json: command, config, seed, code version and per-file SHA-256.
inline void write_manifest(const std::filesystem::path& dir, const std::string& command, const ScenarioConfig& cfg,
                           const std::vector<std::string>& files) {
    nlohmann::ordered_json m;
    m["manifest_schema"] = 1;
    m["command"] = command;
    m["code_version"] = QTORUS_VERSION;
    m["seed"] = cfg.seed;
    nlohmann::ordered_json config;
    for (const auto& [key, value] : cfg.to_map()) config[key] = value;
    m["config"] = config;
    nlohmann::ordered_json checksums;
    for (const auto& f : files) checksums[f] = {{"sha256", sha256_file(dir / f)}};
    m["files"] = checksums;
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << '\n';
}

}  // namespace qtorus::harness
