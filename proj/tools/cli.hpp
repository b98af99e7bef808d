#pragma once

#include "manifest.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

namespace goliath::cli {

/// Entry point of the `goliath` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct GenerateRequest {
    std::filesystem::path input;
    std::filesystem::path output;
    /// Explicit settings keyed by flag name without dashes prefix
    /// (e.g. "family", "noise-mult"); config-file values merged underneath.
    std::map<std::string, std::string> settings;
};

struct BenchmarkRequest {
    std::filesystem::path input;
    std::filesystem::path config;
    std::filesystem::path outdir;
    std::map<std::string, std::string> settings; // "target", "schema"
};

/// Both write their outputs and manifest and return the manifest. They throw
/// on invalid input or failed validation.
Manifest run_generate(const GenerateRequest& req, std::ostream& out);
Manifest run_benchmark_command(const BenchmarkRequest& req, std::ostream& out);

/// Re-runs a manifest into `workdir` and compares output hashes. Returns
/// true when every output is byte-identical.
bool replay(const std::filesystem::path& manifest, const std::filesystem::path& workdir, std::ostream& out);

inline constexpr const char* kVersion = "0.1.0";

} // namespace goliath::cli
