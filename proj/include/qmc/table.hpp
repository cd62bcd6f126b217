#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qmc {

// Formatting used across all emitted artifacts; values are formatted once at
// insertion so re-emission is byte-identical.
std::string fmt_double(double v); // %.17g
std::string fmt_int(std::int64_t v);
std::string fmt_u64(std::uint64_t v);

// A rectangular table of strings with named columns. CSV and JSON forms
// round-trip exactly.
class Table {
  public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }

    void add_row(std::vector<std::string> row);
    const std::string& cell(std::size_t r, std::size_t c) const { return rows_[r][c]; }

    std::string to_csv() const;
    static Table from_csv(std::istream& in);

    std::string to_json() const;
    static Table from_json(const std::string& text);

    bool operator==(const Table&) const = default;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Flat key=value configuration file; unknown keys are errors at use time,
// values are typed on access. CLI flags override file values by re-setting.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);
    std::string to_text() const; // round-trips losslessly (sorted keys)
    void save(const std::string& path) const;

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

// Minimal line/point chart for the recipe figures; series share the x column.
struct SvgSeries {
    std::string label;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool points = false; // draw markers instead of a line
};

std::string line_chart_svg(const std::string& title, const std::vector<double>& x,
                           const std::vector<SvgSeries>& series);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace qmc
