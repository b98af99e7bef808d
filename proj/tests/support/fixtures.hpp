#pragma once

#include "goliath/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace goliath::test {

/// 4177 rows shaped like the abalone data: seven continuous measurements and
/// an integer "Rings" target with mean 41493/4177 (9.93), min 1 and max 29.
Dataset abalone_like(std::uint64_t seed = 11);

/// 500 rows and 8 real-valued columns, the last one named "y".
Dataset no2_like(std::uint64_t seed = 12);

/// n rows: y = f(x) + heteroscedastic noise with a right-skewed distribution,
/// x uniform on [0,1]^p.
Dataset skewed_regression(std::size_t n, std::size_t p, std::uint64_t seed);

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

} // namespace goliath::test
