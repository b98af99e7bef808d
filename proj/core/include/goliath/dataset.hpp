#pragma once

#include "goliath/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace goliath {

enum class Support {
    RealLine,
    PositiveHalfLine, // [a, +inf)
    NegativeHalfLine, // (-inf, b]
    UnitInterval,     // [0, 1]
    BoundedInterval,  // [a, b], user-declared only
    Count,            // {0, 1, 2, ...}
};

/// The support a column's values live on; selects the generating kernel.
struct VariableKind {
    Support support = Support::RealLine;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    static VariableKind real_line() { return {}; }
    static VariableKind positive_half_line(double a);
    static VariableKind negative_half_line(double b);
    static VariableKind unit_interval() { return {Support::UnitInterval, 0.0, 1.0}; }
    static VariableKind bounded(double a, double b);
    static VariableKind count() { return {Support::Count, 0.0, std::numeric_limits<double>::infinity()}; }

    bool contains(double value) const noexcept;
    /// Nearest point of the support; Count rounds to the nearest integer >= 0.
    double project(double value) const noexcept;

    /// Sidecar spelling: REAL, POSITIVE,a=..., NEGATIVE,b=..., UNIT,
    /// BOUNDED,a=...,b=..., COUNT.
    std::string to_string() const;
    static VariableKind parse(const std::string& text);

    friend bool operator==(const VariableKind&, const VariableKind&) = default;
};

struct ColumnSchema {
    std::string name;
    VariableKind kind;
    bool is_target = false;

    friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

/// Thrown when a value lies outside its column's declared support.
class SupportError : public std::runtime_error {
public:
    SupportError(std::string column, std::size_t row, double value);
    const std::string& column() const noexcept { return column_; }
    std::size_t row() const noexcept { return row_; }
    double value() const noexcept { return value_; }

private:
    std::string column_;
    std::size_t row_;
    double value_;
};

/// Immutable column-typed numeric table. Every cell is finite and lies in its
/// column's support; at most one column is the target.
class Dataset {
public:
    Dataset(std::vector<ColumnSchema> schema, Matrix values);

    const std::vector<ColumnSchema>& schema() const noexcept { return schema_; }
    const Matrix& values() const noexcept { return values_; }
    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }

    std::optional<std::size_t> target_column() const noexcept { return target_; }
    const std::vector<std::size_t>& covariate_columns() const noexcept { return covariates_; }
    std::optional<std::size_t> column_index(const std::string& name) const;

    Matrix covariates() const { return values_.select_columns(covariates_); }
    std::vector<double> target() const;
    std::vector<ColumnSchema> covariate_schema() const;

    Dataset select_rows(std::span<const std::size_t> indices) const;

private:
    std::vector<ColumnSchema> schema_;
    Matrix values_;
    std::optional<std::size_t> target_;
    std::vector<std::size_t> covariates_;
};

struct LoadedDataset {
    Dataset dataset;
    std::size_t dropped_rows = 0;
};

/// Reads a comma-separated file with a mandatory header. Rows with empty,
/// "NA", "NaN" or unparseable cells are dropped and counted. A column whose
/// cells are mostly non-numeric is treated as categorical and rejected.
LoadedDataset load_csv(const std::filesystem::path& path,
                       const std::optional<std::vector<ColumnSchema>>& schema = std::nullopt,
                       const std::optional<std::string>& target = std::nullopt);

/// Infers a support per column:
/// constant -> RealLine (warned), integers >= 0 -> Count, all in [0, 1] ->
/// UnitInterval, skewness > 1 -> PositiveHalfLine(min), skewness < -1 ->
/// NegativeHalfLine(max), else RealLine.
std::vector<ColumnSchema> infer_schema(const Matrix& raw, const std::vector<std::string>& names);

/// Writes with shortest round-trip formatting. When `provenance` is given it
/// must have one entry per row and is emitted as a trailing 0/1 column.
void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::optional<std::vector<bool>>& provenance = std::nullopt);

inline constexpr const char* kProvenanceColumn = "is_synthetic";

/// `<name>.schema` sidecar: one `column=KIND[,a=..][,b=..]` line per column.
std::vector<ColumnSchema> read_schema_file(const std::filesystem::path& path);
void write_schema_file(const std::vector<ColumnSchema>& schema, const std::filesystem::path& path);
std::filesystem::path schema_sidecar_path(const std::filesystem::path& csv_path);

} // namespace goliath
