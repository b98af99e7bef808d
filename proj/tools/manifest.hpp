#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace goliath::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Flat key=value record written next to every output. Keys are kept
/// sorted so the file is a pure function of its content.
class Manifest {
public:
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    void write(const std::filesystem::path& path) const;
    static Manifest read(const std::filesystem::path& path);

private:
    std::map<std::string, std::string> entries_;
};

/// Reads `key=value` lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

} // namespace goliath::cli
