#include "qmc/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmc/errors.hpp"

namespace qmc {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }
std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

namespace {

// cells never contain commas/newlines by construction; enforce it on insertion
void check_cell(const std::string& s) {
    if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos)
        throw UsageError("table cell contains a separator: '" + s + "'");
}

} // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw UsageError("table needs at least one column");
    for (const auto& c : columns_) check_cell(c);
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns_.size())
        throw UsageError("table row width mismatch");
    for (const auto& c : row) check_cell(c);
    rows_.push_back(std::move(row));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << (c ? "," : "") << columns_[c];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c];
        os << "\n";
    }
    return os.str();
}

Table Table::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw UsageError("CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Table t(split_csv_line(line));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        t.add_row(split_csv_line(line));
    }
    return t;
}

std::string Table::to_json() const {
    nlohmann::json j;
    j["columns"] = columns_;
    j["rows"] = rows_;
    return j.dump(2);
}

Table Table::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Table t(j.at("columns").get<std::vector<std::string>>());
    for (const auto& row : j.at("rows"))
        t.add_row(row.get<std::vector<std::string>>());
    return t;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

Config Config::from_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        if (key.empty()) throw UsageError("config: empty key");
        c.set(key, value);
    }
    return c;
}

std::string Config::to_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << "=" << v << "\n";
    return os.str();
}

void Config::save(const std::string& path) const { write_text_file(path, to_text()); }

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw UsageError("config: '" + key + "' is not an integer: " + it->second);
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const std::int64_t v = get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw UsageError("config: '" + key + "' must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw UsageError("config: '" + key + "' is not a number: " + it->second);
    }
}

std::string line_chart_svg(const std::string& title, const std::vector<double>& x,
                           const std::vector<SvgSeries>& series) {
    const int w = 720, h = 440, ml = 64, mr = 24, mt = 40, mb = 48;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (double v : x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (const auto& s : series)
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_double(std::round(xv * 100) / 100)
           << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_double(std::round(yv * 1000) / 1000)
           << "</text>\n";
    }
    int li = 0;
    for (const auto& s : series) {
        if (s.points) {
            for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i)
                os << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(s.y[i])
                   << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i)
                os << px(x[i]) << "," << py(s.y[i]) << " ";
            os << "\"/>\n";
        }
        os << "<text x=\"" << w - mr - 8 << "\" y=\"" << mt + 16 * li
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << s.color << "\">" << s.label
           << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace qmc
