#include "goliath/dataset.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/stats.hpp"
#include "goliath/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace goliath {

namespace {

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string current;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            current.push_back(c);
        } else if (c == ',' && !quoted) {
            out.push_back(unquote(trim(current)));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(unquote(trim(current)));
    return out;
}

enum class CellState { Ok, Missing, Unparseable };

CellState parse_cell(const std::string& text, double& value) {
    if (text.empty() || text == "NA" || text == "NaN" || text == "nan" || text == "?" ||
        text == "null") {
        return CellState::Missing;
    }
    std::string_view view(text);
    if (view.front() == '+') view.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
    if (ec != std::errc() || ptr != view.data() + view.size()) return CellState::Unparseable;
    if (!std::isfinite(value)) return CellState::Missing;
    return CellState::Ok;
}

double parse_number(const std::string& text, const std::string& context) {
    double v = 0.0;
    if (parse_cell(trim(text), v) != CellState::Ok) {
        throw std::invalid_argument("invalid number '" + text + "' in " + context);
    }
    return v;
}

bool is_integer(double v) { return std::floor(v) == v; }

} // namespace

VariableKind VariableKind::positive_half_line(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("PositiveHalfLine needs a finite lower bound");
    return {Support::PositiveHalfLine, a, std::numeric_limits<double>::infinity()};
}

VariableKind VariableKind::negative_half_line(double b) {
    if (!std::isfinite(b)) throw std::invalid_argument("NegativeHalfLine needs a finite upper bound");
    return {Support::NegativeHalfLine, -std::numeric_limits<double>::infinity(), b};
}

VariableKind VariableKind::bounded(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw std::invalid_argument("BoundedInterval requires finite a < b");
    }
    return {Support::BoundedInterval, a, b};
}

bool VariableKind::contains(double v) const noexcept {
    if (!std::isfinite(v)) return false;
    switch (support) {
    case Support::RealLine: return true;
    case Support::PositiveHalfLine: return v >= lower;
    case Support::NegativeHalfLine: return v <= upper;
    case Support::UnitInterval: return v >= 0.0 && v <= 1.0;
    case Support::BoundedInterval: return v >= lower && v <= upper;
    case Support::Count: return v >= 0.0 && is_integer(v);
    }
    return false;
}

double VariableKind::project(double v) const noexcept {
    if (support == Support::Count) v = std::nearbyint(v);
    return std::clamp(v, lower, upper);
}

std::string VariableKind::to_string() const {
    switch (support) {
    case Support::RealLine: return "REAL";
    case Support::PositiveHalfLine: return "POSITIVE,a=" + format_double(lower);
    case Support::NegativeHalfLine: return "NEGATIVE,b=" + format_double(upper);
    case Support::UnitInterval: return "UNIT";
    case Support::BoundedInterval:
        return "BOUNDED,a=" + format_double(lower) + ",b=" + format_double(upper);
    case Support::Count: return "COUNT";
    }
    return "REAL";
}

VariableKind VariableKind::parse(const std::string& text) {
    auto fields = split_fields(text);
    if (fields.empty() || fields.front().empty()) throw std::invalid_argument("empty kind");
    std::string name = fields.front();
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    std::optional<double> a;
    std::optional<double> b;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad kind parameter '" + fields[i] + "'");
        const std::string key = trim(fields[i].substr(0, eq));
        const double v = parse_number(fields[i].substr(eq + 1), "kind '" + text + "'");
        if (key == "a") a = v;
        else if (key == "b") b = v;
        else throw std::invalid_argument("unknown kind parameter '" + key + "'");
    }
    if (name == "REAL") return real_line();
    if (name == "POSITIVE") return positive_half_line(a.value_or(0.0));
    if (name == "NEGATIVE") return negative_half_line(b.value_or(0.0));
    if (name == "UNIT") return unit_interval();
    if (name == "COUNT") return count();
    if (name == "BOUNDED") {
        if (!a || !b) throw std::invalid_argument("BOUNDED requires a= and b=");
        return bounded(*a, *b);
    }
    throw std::invalid_argument("unknown variable kind '" + fields.front() + "'");
}

SupportError::SupportError(std::string column, std::size_t row, double value)
    : std::runtime_error("value " + format_double(value) + " at row " + std::to_string(row) +
                         " is outside the support of column '" + column + "'"),
      column_(std::move(column)),
      row_(row),
      value_(value) {}

Dataset::Dataset(std::vector<ColumnSchema> schema, Matrix values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (schema_.size() != values_.cols() && !(values_.rows() == 0 && values_.cols() == 0)) {
        throw std::invalid_argument("Dataset: schema has " + std::to_string(schema_.size()) +
                                    " columns but values have " + std::to_string(values_.cols()));
    }
    if (values_.rows() == 0 && values_.cols() == 0) values_ = Matrix(0, schema_.size());
    std::set<std::string> names;
    for (std::size_t j = 0; j < schema_.size(); ++j) {
        if (!names.insert(schema_[j].name).second) {
            throw std::invalid_argument("Dataset: duplicate column '" + schema_[j].name + "'");
        }
        if (schema_[j].is_target) {
            if (target_) throw std::invalid_argument("Dataset: more than one target column");
            target_ = j;
        } else {
            covariates_.push_back(j);
        }
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (std::size_t j = 0; j < values_.cols(); ++j) {
            if (!schema_[j].kind.contains(values_(i, j))) {
                throw SupportError(schema_[j].name, i, values_(i, j));
            }
        }
    }
}

std::optional<std::size_t> Dataset::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < schema_.size(); ++j) {
        if (schema_[j].name == name) return j;
    }
    return std::nullopt;
}

std::vector<double> Dataset::target() const {
    if (!target_) throw std::logic_error("Dataset has no target column");
    return values_.column(*target_);
}

std::vector<ColumnSchema> Dataset::covariate_schema() const {
    std::vector<ColumnSchema> out;
    for (auto j : covariates_) out.push_back(schema_[j]);
    return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    return Dataset(schema_, values_.select_rows(indices));
}

std::vector<ColumnSchema> infer_schema(const Matrix& raw, const std::vector<std::string>& names) {
    if (raw.rows() == 0) throw std::invalid_argument("infer_schema: empty table");
    if (names.size() != raw.cols()) throw std::invalid_argument("infer_schema: name count mismatch");
    std::vector<ColumnSchema> schema;
    schema.reserve(raw.cols());
    for (std::size_t j = 0; j < raw.cols(); ++j) {
        const auto col = raw.column(j);
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        const double lo = *lo_it;
        const double hi = *hi_it;
        ColumnSchema cs{names[j], VariableKind::real_line(), false};
        if (lo == hi) {
            warn("column '" + names[j] + "' is constant; assigned REAL");
        } else if (lo >= 0.0 && std::all_of(col.begin(), col.end(), is_integer)) {
            cs.kind = VariableKind::count();
        } else if (lo >= 0.0 && hi <= 1.0) {
            cs.kind = VariableKind::unit_interval();
        } else {
            const double skew = stats::skewness(col);
            if (skew > 1.0) cs.kind = VariableKind::positive_half_line(lo);
            else if (skew < -1.0) cs.kind = VariableKind::negative_half_line(hi);
        }
        schema.push_back(std::move(cs));
    }
    return schema;
}

LoadedDataset load_csv(const std::filesystem::path& path,
                       const std::optional<std::vector<ColumnSchema>>& schema,
                       const std::optional<std::string>& target) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw std::runtime_error("'" + path.string() + "' has no header row");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    const auto header = split_fields(line);
    const std::size_t p = header.size();

    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> line_numbers;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != p) {
            throw std::runtime_error("line " + std::to_string(line_no) + " of '" + path.string() +
                                     "' has " + std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(p));
        }
        cells.push_back(std::move(fields));
        line_numbers.push_back(line_no);
    }

    // Parse; remember which rows are incomplete and how often each column fails.
    Matrix parsed(cells.size(), p);
    std::vector<bool> keep(cells.size(), true);
    std::vector<std::size_t> unparseable(p, 0);
    std::vector<std::size_t> present(p, 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double v = 0.0;
            switch (parse_cell(cells[i][j], v)) {
            case CellState::Ok:
                parsed(i, j) = v;
                ++present[j];
                break;
            case CellState::Missing: keep[i] = false; break;
            case CellState::Unparseable:
                keep[i] = false;
                ++present[j];
                ++unparseable[j];
                break;
            }
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        if (present[j] > 0 && 2 * unparseable[j] > present[j]) {
            throw std::runtime_error("column '" + header[j] +
                                     "' is categorical; remove or encode it before loading");
        }
    }

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (keep[i]) kept.push_back(i);
    }
    const std::size_t dropped = cells.size() - kept.size();
    if (kept.empty()) throw std::runtime_error("'" + path.string() + "' has no complete rows");
    Matrix values = parsed.select_rows(kept);

    std::vector<ColumnSchema> resolved;
    if (schema) {
        std::unordered_map<std::string, ColumnSchema> by_name;
        for (const auto& cs : *schema) by_name.emplace(cs.name, cs);
        if (by_name.size() != schema->size() || schema->size() != p) {
            throw std::runtime_error("header of '" + path.string() + "' does not match the schema");
        }
        for (const auto& name : header) {
            auto it = by_name.find(name);
            if (it == by_name.end()) {
                throw std::runtime_error("column '" + name + "' is not declared in the schema");
            }
            resolved.push_back(it->second);
        }
        for (std::size_t r = 0; r < kept.size(); ++r) {
            for (std::size_t j = 0; j < p; ++j) {
                if (!resolved[j].kind.contains(values(r, j))) {
                    throw SupportError(resolved[j].name, line_numbers[kept[r]], values(r, j));
                }
            }
        }
    } else {
        resolved = infer_schema(values, header);
    }

    if (target) {
        bool found = false;
        for (auto& cs : resolved) {
            cs.is_target = cs.name == *target;
            found = found || cs.is_target;
        }
        if (!found) throw std::runtime_error("target column '" + *target + "' not found");
    }

    if (dropped > 0) {
        warn(std::to_string(dropped) + (dropped == 1 ? " row" : " rows") +
             " dropped from '" + path.string() + "' (missing or unparseable cells)");
    }
    return {Dataset(std::move(resolved), std::move(values)), dropped};
}

void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::optional<std::vector<bool>>& provenance) {
    if (provenance && provenance->size() != ds.rows()) {
        throw std::invalid_argument("write_csv: provenance length differs from row count");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    const auto& schema = ds.schema();
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (j > 0) out << ',';
        out << schema[j].name;
    }
    if (provenance) out << ',' << kProvenanceColumn;
    out << '\n';
    const Matrix& values = ds.values();
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(values(i, j));
        }
        if (provenance) out << ',' << ((*provenance)[i] ? '1' : '0');
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<ColumnSchema> read_schema_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema '" + path.string() + "'");
    std::vector<ColumnSchema> schema;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("schema line " + std::to_string(line_no) + ": expected column=KIND");
        }
        ColumnSchema cs;
        cs.name = trim(text.substr(0, eq));
        std::string spec = text.substr(eq + 1);
        // A trailing ",target" marks the target column.
        const std::string marker = ",target";
        if (spec.size() >= marker.size() &&
            spec.compare(spec.size() - marker.size(), marker.size(), marker) == 0) {
            cs.is_target = true;
            spec.erase(spec.size() - marker.size());
        }
        try {
            cs.kind = VariableKind::parse(spec);
        } catch (const std::exception& e) {
            throw std::runtime_error("schema line " + std::to_string(line_no) + ": " + e.what());
        }
        schema.push_back(std::move(cs));
    }
    return schema;
}

void write_schema_file(const std::vector<ColumnSchema>& schema, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (const auto& cs : schema) {
        out << cs.name << '=' << cs.kind.to_string() << (cs.is_target ? ",target" : "") << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::filesystem::path schema_sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".schema");
    return p;
}

} // namespace goliath
