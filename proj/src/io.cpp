#include "finq/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "finq/errors.hpp"

namespace finq {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 95.0;
constexpr double kRight = 650.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 520.0;

// viridis sampled at 9 evenly spaced stops
constexpr std::array<std::array<int, 3>, 9> kViridis{{{68, 1, 84},
                                                      {71, 45, 123},
                                                      {59, 82, 139},
                                                      {44, 114, 142},
                                                      {33, 145, 140},
                                                      {40, 174, 128},
                                                      {94, 201, 98},
                                                      {173, 220, 48},
                                                      {253, 231, 37}}};

constexpr std::array<std::array<int, 3>, 3> kDiverging{{{33, 102, 172}, {247, 247, 247}, {178, 24, 43}}};

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

template <std::size_t K>
std::string ramp(const std::array<std::array<int, 3>, K>& stops, double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * double(K - 1);
    const std::size_t i = std::min<std::size_t>(std::size_t(pos), K - 2);
    const double f = pos - double(i);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  int(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  int(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

void report_bad(const std::vector<std::string>& bad, const std::string& what) {
    if (bad.empty()) return;
    std::string msg = what + ": non-finite or unplottable data at ";
    const std::size_t shown = std::min<std::size_t>(bad.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += (i ? ", " : "") + bad[i];
    if (bad.size() > shown) msg += " and " + std::to_string(bad.size() - shown) + " more";
    throw ValidationError(msg);
}

std::string svg_open(const std::string& title) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    o << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"18\" text-anchor=\"middle\">"
      << escape_xml(title) << "</text>\n";
    return o.str();
}

void axes(std::ostringstream& o, double x0, double x1, double y0, double y1, const std::string& xl,
          const std::string& yl, bool log_y) {
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft << "\" height=\""
      << kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        const double px = kLeft + f * (kRight - kLeft);
        const double py = kBottom - f * (kBottom - kTop);
        const double vy = y0 + f * (y1 - y0);
        o << "<line x1=\"" << px << "\" y1=\"" << kBottom << "\" x2=\"" << px << "\" y2=\"" << kBottom + 6
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << px << "\" y=\"" << kBottom + 22 << "\" font-size=\"13\" text-anchor=\"middle\">"
          << fmt(x0 + f * (x1 - x0)) << "</text>\n";
        o << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\"" << py
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << kLeft - 9 << "\" y=\"" << py + 4 << "\" font-size=\"13\" text-anchor=\"end\">"
          << fmt(log_y ? std::pow(10.0, vy) : vy) << "</text>\n";
    }
    o << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 50
      << "\" font-size=\"15\" text-anchor=\"middle\">" << escape_xml(xl) << "</text>\n";
    o << "<text x=\"22\" y=\"" << (kTop + kBottom) / 2 << "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
      << (kTop + kBottom) / 2 << ")\">" << escape_xml(yl) << "</text>\n";
}

std::pair<double, double> padded(double lo, double hi) {
    if (hi > lo) return {lo, hi};
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add(std::vector<Cell> row) {
    require(row.size() == header.size(), "CsvTable: row has " + std::to_string(row.size()) + " cells, header has " +
                                             std::to_string(header.size()));
    rows.push_back(std::move(row));
}

void write_csv(const CsvTable& table, std::ostream& out) {
    auto text = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << text(table.header[j]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            if (auto d = std::get_if<double>(&row[j]))
                out << format_double(*d);
            else if (auto i = std::get_if<long long>(&row[j]))
                out << *i;
            else
                out << text(std::get<std::string>(row[j]));
        }
        out << '\n';
    }
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream o;
    write_csv(table, o);
    return o.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw ValidationError("failed writing '" + path + "'");
}

std::string line_plot_svg(const std::vector<Series>& series, const PlotStyle& style) {
    std::vector<std::string> bad;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (std::size_t s = 0; s < series.size(); ++s) {
        require(series[s].x.size() == series[s].y.size(), "line_plot_svg: x/y length mismatch in '" + series[s].label + "'");
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            double x = series[s].x[i], y = series[s].y[i];
            if (!std::isfinite(x) || !std::isfinite(y) || (style.log_y && y <= 0.0)) {
                bad.push_back("series " + std::to_string(s) + " index " + std::to_string(i));
                continue;
            }
            if (style.log_y) y = std::log10(y);
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    }
    report_bad(bad, "line_plot_svg");
    require(std::isfinite(x0), "line_plot_svg: no data");
    std::tie(x0, x1) = padded(x0, x1);
    std::tie(y0, y1) = padded(y0, y1);

    std::ostringstream o;
    o << svg_open(style.title);
    axes(o, x0, x1, y0, y1, style.x_label, style.y_label, style.log_y);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPalette.size()];
        o << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" d=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double y = style.log_y ? std::log10(series[s].y[i]) : series[s].y[i];
            const double px = kLeft + (series[s].x[i] - x0) / (x1 - x0) * (kRight - kLeft);
            const double py = kBottom - (y - y0) / (y1 - y0) * (kBottom - kTop);
            o << (i ? " L" : "M") << fmt(px, 6) << ',' << fmt(py, 6);
        }
        o << "\"/>\n";
        const double ly = kTop + 10 + 20.0 * double(s);
        o << "<line x1=\"665\" y1=\"" << ly << "\" x2=\"690\" y2=\"" << ly << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"696\" y=\"" << ly + 4 << "\" font-size=\"12\">" << escape_xml(series[s].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string heatmap_svg(const Matrix& m, const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                        const HeatmapStyle& style) {
    require(m.rows == y_grid.size() && m.cols == x_grid.size(), "heatmap_svg: grid sizes do not match the matrix");
    require(m.rows > 0 && m.cols > 0, "heatmap_svg: empty matrix");
    std::vector<std::string> bad;
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            double v = m(i, j);
            if (!std::isfinite(v) || (style.scale == ColorScale::log_viridis && v <= 0.0)) {
                bad.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
                continue;
            }
            if (style.scale == ColorScale::log_viridis) v = std::log10(v);
            lo = std::min(lo, v), hi = std::max(hi, v);
        }
    report_bad(bad, "heatmap_svg");
    if (style.scale == ColorScale::diverging) {
        const double a = std::max(std::abs(lo), std::abs(hi));
        lo = -a, hi = a;
    }
    std::tie(lo, hi) = padded(lo, hi);

    auto color = [&](double v) {
        if (style.scale == ColorScale::log_viridis) v = std::log10(v);
        const double t = (v - lo) / (hi - lo);
        return style.scale == ColorScale::diverging ? ramp(kDiverging, t) : ramp(kViridis, t);
    };

    std::ostringstream o;
    o << svg_open(style.title);
    const double cw = (kRight - kLeft) / double(m.cols);
    const double ch = (kBottom - kTop) / double(m.rows);
    o << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double py = kBottom - double(i + 1) * ch;
        std::size_t j = 0;
        while (j < m.cols) {
            const std::string c = color(m(i, j));
            std::size_t k = j + 1;
            while (k < m.cols && color(m(i, k)) == c) ++k;
            o << "<rect x=\"" << fmt(kLeft + double(j) * cw, 6) << "\" y=\"" << fmt(py, 6) << "\" width=\""
              << fmt(double(k - j) * cw + 0.01, 6) << "\" height=\"" << fmt(ch + 0.01, 6) << "\" fill=\"" << c
              << "\"/>\n";
            j = k;
        }
    }
    o << "</g>\n";
    axes(o, x_grid.front(), x_grid.back(), y_grid.front(), y_grid.back(), style.x_label, style.y_label, false);

    // colour bar
    for (int k = 0; k < 64; ++k) {
        const double t = (k + 0.5) / 64.0;
        const double py = kBottom - double(k + 1) * (kBottom - kTop) / 64.0;
        const std::string c = style.scale == ColorScale::diverging ? ramp(kDiverging, t) : ramp(kViridis, t);
        o << "<rect x=\"680\" y=\"" << fmt(py, 6) << "\" width=\"24\" height=\"" << fmt((kBottom - kTop) / 64.0 + 0.01, 6)
          << "\" fill=\"" << c << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        o << "<text x=\"710\" y=\"" << kBottom - f * (kBottom - kTop) + 4 << "\" font-size=\"12\">"
          << fmt(lo + f * (hi - lo)) << "</text>\n";
    }
    std::string vl = style.value_label;
    if (style.scale == ColorScale::log_viridis) vl = "log10 " + vl;
    o << "<text x=\"692\" y=\"" << kTop - 12 << "\" font-size=\"12\" text-anchor=\"middle\">" << escape_xml(vl)
      << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError(what + ": '" + text + "' is not a number");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ValidationError(what + ": '" + text + "' is not a number");
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError(where + ": empty key");
        if (c.entries_.count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
        c.entries_[key] = Entry{value, where};
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config '" + path + "'");
    return parse(f, path);
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, "command line"}; }

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry* Config::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

void Config::note(const std::string& key, const std::string& value) const {
    for (auto& kv : resolved_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    resolved_.emplace_back(key, value);
}

double Config::number(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    const double v = e ? parse_number(e->value, e->origin + ": " + key) : fallback;
    note(key, format_double(v));
    return v;
}

int Config::integer(const std::string& key, int fallback) const {
    const Entry* e = find(key);
    int v = fallback;
    if (e) {
        const double d = parse_number(e->value, e->origin + ": " + key);
        if (d != std::floor(d) || std::abs(d) > 1e9) throw ValidationError(e->origin + ": " + key + " must be an integer");
        v = int(d);
    }
    note(key, std::to_string(v));
    return v;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    const std::string v = e ? e->value : fallback;
    note(key, v);
    return v;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
    const Entry* e = find(key);
    std::vector<double> v = fallback;
    if (e) {
        v.clear();
        std::stringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(parse_number(trim(item), e->origin + ": " + key));
        if (v.empty()) throw ValidationError(e->origin + ": " + key + " is empty");
    }
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    note(key, s);
    return v;
}

void Config::reject_unknown() const {
    std::string unknown;
    for (const auto& [k, e] : entries_)
        if (!e.used) unknown += (unknown.empty() ? "" : ", ") + k + " (" + e.origin + ")";
    if (!unknown.empty()) throw ValidationError("unknown config keys: " + unknown);
}

std::vector<double> parse_axis(const std::string& spec, const std::string& what) {
    std::vector<std::string> parts;
    const char sep = spec.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    if (sep == ':') {
        require(parts.size() == 3, what + ": expected from:to:points, got '" + spec + "'");
        const double pts = parse_number(parts[2], what + " points");
        require(pts >= 1 && pts == std::floor(pts) && pts <= 1e7, what + ": points must be a positive integer");
        return linspace(parse_number(parts[0], what), parse_number(parts[1], what), std::size_t(pts));
    }
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_number(p, what));
    require(!v.empty(), what + ": empty axis");
    return v;
}

}  // namespace finq
