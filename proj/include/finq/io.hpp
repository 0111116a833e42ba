#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "finq/grid.hpp"

namespace finq {

// %.17g, round-trip exact for doubles.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// LF line endings, strings quoted only when they contain , " or newline.
void write_csv(const CsvTable& table, std::ostream& out);
std::string to_csv(const CsvTable& table);

// Writes the whole string or throws ValidationError naming the path.
void write_text_file(const std::string& path, const std::string& content);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label;  // include units, e.g. "B_z [T]"
    std::string y_label;
    bool log_y = false;
};

// 800x600 viewBox, one <path> per series.
std::string line_plot_svg(const std::vector<Series>& series, const PlotStyle& style);

enum class ColorScale {
    log_viridis,     // log10 of positive data, viridis stops
    linear_viridis,  // linear, viridis stops
    diverging        // signed data, blue (-) / white (0) / red (+), symmetric limits
};

struct HeatmapStyle {
    std::string title;
    std::string x_label;  // columns
    std::string y_label;  // rows
    std::string value_label;
    ColorScale scale = ColorScale::log_viridis;
};

// Rows of m run along y_grid, columns along x_grid.
std::string heatmap_svg(const Matrix& m, const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                        const HeatmapStyle& style);

// Flat key = value text with '#' comments. Every key a consumer does not ask
// for is reported by reject_unknown().
class Config {
  public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config load(const std::string& path);

    // Command-line style override; replaces an existing entry.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    bool empty() const { return entries_.empty(); }

    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    // Comma separated numbers.
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

    void reject_unknown() const;

    // Every value looked up so far, in lookup order, as key = value text.
    const std::vector<std::pair<std::string, std::string>>& resolved() const { return resolved_; }

  private:
    struct Entry {
        std::string value;
        std::string origin;
        mutable bool used = false;
    };
    const Entry* find(const std::string& key) const;
    void note(const std::string& key, const std::string& value) const;

    std::map<std::string, Entry> entries_;
    mutable std::vector<std::pair<std::string, std::string>> resolved_;
};

// "from:to:points" (inclusive linspace) or "a,b,c" (explicit values).
std::vector<double> parse_axis(const std::string& spec, const std::string& what);

// Parses a full-string double or throws ValidationError with `what` in the message.
double parse_number(const std::string& text, const std::string& what);

}  // namespace finq
