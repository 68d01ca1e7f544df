#include "contactnet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "contactnet/errors.hpp"

namespace contactnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(path.string(), line, "expected a number, got '" + cell + "'");
    }
}

int parse_sex(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
    std::string s = cell;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "male" || s == "m" || s == "1") return 1;
    if (s == "female" || s == "f" || s == "0") return 0;
    throw ParseError(path.string(), line, "expected male/female, got '" + cell + "'");
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace

std::string format_double(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

AgeSexPyramid read_pyramid_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string(), 0, "empty file");
    const auto header = split_csv(lines.front());
    if (header.size() != 5 || header[0] != "country")
        throw ParseError(path.string(), 1, "expected header country,age_lo,age_hi,sex,share");

    AgeSexPyramid pyramid;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv(lines[i]);
        if (cells.size() != 5)
            throw ParseError(path.string(), i + 1, "expected 5 columns, got " +
                                                        std::to_string(cells.size()));
        if (pyramid.country.empty()) pyramid.country = cells[0];
        PyramidBin bin;
        bin.age_lo = parse_double(cells[1], path, i + 1);
        bin.age_hi = parse_double(cells[2], path, i + 1);
        bin.sex = parse_sex(cells[3], path, i + 1);
        bin.share = parse_double(cells[4], path, i + 1);
        pyramid.bins.push_back(bin);
    }
    if (pyramid.bins.empty()) throw ParseError(path.string(), lines.size(), "no data rows");
    return pyramid;
}

ContactMatrix read_contact_matrix_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string(), 0, "empty file");
    const auto header = split_csv(lines.front());
    if (header.size() < 3 || header.front() != "bin" || header.back() != "pop_size")
        throw ParseError(path.string(), 1, "expected header bin,<labels...>,pop_size");

    const int b = static_cast<int>(header.size()) - 2;
    ContactMatrix m;
    m.bin_labels.assign(header.begin() + 1, header.end() - 1);
    m.rates = Eigen::MatrixXd::Zero(b, b);
    m.pop_sizes = Eigen::VectorXd::Zero(b);

    int row = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        if (row >= b) throw ParseError(path.string(), i + 1, "more rows than bins");
        const auto cells = split_csv(lines[i]);
        if (static_cast<int>(cells.size()) != b + 2)
            throw ParseError(path.string(), i + 1, "expected " + std::to_string(b + 2) +
                                                        " columns, got " +
                                                        std::to_string(cells.size()));
        if (cells[0] != m.bin_labels[static_cast<std::size_t>(row)])
            throw ParseError(path.string(), i + 1,
                             "row label '" + cells[0] + "' does not match header order");
        for (int j = 0; j < b; ++j)
            m.rates(row, j) = parse_double(cells[static_cast<std::size_t>(j) + 1], path, i + 1);
        m.pop_sizes(row) = parse_double(cells.back(), path, i + 1);
        ++row;
    }
    if (row != b) throw ParseError(path.string(), lines.size(), "fewer rows than bins");
    m.validate();
    return m;
}

void write_contact_matrix_csv(const std::filesystem::path& path, const ContactMatrix& m) {
    std::string text = "bin";
    for (const auto& label : m.bin_labels) text += "," + label;
    text += ",pop_size\n";
    for (int i = 0; i < m.bins(); ++i) {
        text += m.bin_labels[static_cast<std::size_t>(i)];
        for (int j = 0; j < m.bins(); ++j) text += "," + format_double(m.rates(i, j));
        text += "," + format_double(m.pop_sizes(i)) + "\n";
    }
    write_text(path, text);
}

void write_population_csv(const std::filesystem::path& path, const Population& pop) {
    std::string text = "id,age,sex\n";
    for (const auto& nf : pop.nodes)
        text += std::to_string(nf.id) + "," + std::to_string(nf.age) + "," +
                std::to_string(nf.sex) + "\n";
    write_text(path, text);
}

Population read_population_csv(const std::filesystem::path& path, const std::string& country) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string(), 0, "empty file");
    if (split_csv(lines.front()) != std::vector<std::string>{"id", "age", "sex"})
        throw ParseError(path.string(), 1, "expected header id,age,sex");
    Population pop;
    pop.country = country;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv(lines[i]);
        if (cells.size() != 3) throw ParseError(path.string(), i + 1, "expected 3 columns");
        NodeFeatures nf;
        nf.id = static_cast<int>(parse_double(cells[0], path, i + 1));
        nf.age = static_cast<int>(parse_double(cells[1], path, i + 1));
        nf.sex = static_cast<int>(parse_double(cells[2], path, i + 1));
        pop.nodes.push_back(nf);
    }
    return pop;
}

void write_edge_list_csv(const std::filesystem::path& path, const Network& net) {
    std::string text = "u,v\n";
    for (const auto& [u, v] : net.edges)
        text += std::to_string(u) + "," + std::to_string(v) + "\n";
    write_text(path, text);
}

namespace {

// Linear white -> blue ramp over [0, max]; documented in the README.
std::string heat_color(double v, double vmax) {
    const double t = vmax > 0.0 ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
    const int r = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    const int g = static_cast<int>(std::lround(255.0 * (1.0 - 0.75 * t)));
    const int b = 255;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

void write_heatmap_svg(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels, const std::string& title,
                       bool annotate) {
    const int rows = static_cast<int>(values.rows());
    const int cols = static_cast<int>(values.cols());
    const int cell = 46, left = 80, top = 50, bottom = 20, right = 20;
    const int width = left + cols * cell + right;
    const int height = top + rows * cell + bottom;
    const double vmax = values.size() > 0 ? values.maxCoeff() : 0.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << svg_escape(title) << "</text>\n";
    for (int j = 0; j < cols; ++j)
        svg << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top - 8
            << "\" text-anchor=\"middle\" font-size=\"10\">" << svg_escape(col_labels[static_cast<std::size_t>(j)])
            << "</text>\n";
    for (int i = 0; i < rows; ++i)
        svg << "<text x=\"" << left - 6 << "\" y=\"" << top + i * cell + cell / 2 + 4
            << "\" text-anchor=\"end\" font-size=\"10\">" << svg_escape(row_labels[static_cast<std::size_t>(i)])
            << "</text>\n";
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double v = values(i, j);
            svg << "<rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell << "\" width=\""
                << cell << "\" height=\"" << cell << "\" fill=\"" << heat_color(v, vmax)
                << "\" stroke=\"#ffffff\"/>\n";
            if (annotate) {
                char buf[24];
                std::snprintf(buf, sizeof buf, "%.2f", v);
                svg << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\""
                    << top + i * cell + cell / 2 + 4
                    << "\" text-anchor=\"middle\" font-size=\"9\">" << buf << "</text>\n";
            }
        }
    }
    svg << "</svg>\n";
    write_text(path, svg.str());
}

void write_bar_chart_svg(const std::filesystem::path& path,
                         const std::vector<std::string>& names,
                         const std::vector<std::string>& series_names,
                         const std::vector<std::vector<double>>& series,
                         const std::string& title) {
    const int groups = static_cast<int>(names.size());
    const int bars = static_cast<int>(series.size());
    const int bar_w = 9, gap = 14, left = 60, top = 40, plot_h = 220, bottom = 90;
    const int group_w = bars * bar_w + gap;
    const int width = left + groups * group_w + 40;
    const int height = top + plot_h + bottom;

    // Log scale spanning the positive values; zeros draw as empty bars.
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (const auto& s : series)
        for (double v : s)
            if (v > 0.0) {
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
    if (!(vmax > 0.0)) {
        vmin = 0.1;
        vmax = 1.0;
    }
    if (vmin == vmax) vmin = vmax / 10.0;
    const double log_lo = std::log10(vmin), log_hi = std::log10(vmax);

    static const char* palette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
        << svg_escape(title) << "</text>\n";
    for (int b = 0; b < bars; ++b)
        svg << "<rect x=\"" << left + b * 90 << "\" y=\"24\" width=\"10\" height=\"10\" fill=\""
            << palette[b % 4] << "\"/><text x=\"" << left + b * 90 + 14
            << "\" y=\"33\" font-size=\"10\">" << svg_escape(series_names[static_cast<std::size_t>(b)])
            << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
        << left + groups * group_w << "\" y2=\"" << top + plot_h
        << "\" stroke=\"#333333\"/>\n";
    for (int g = 0; g < groups; ++g) {
        for (int b = 0; b < bars; ++b) {
            const double v = series[static_cast<std::size_t>(b)][static_cast<std::size_t>(g)];
            double frac = 0.0;
            if (v > 0.0 && log_hi > log_lo)
                frac = std::clamp((std::log10(v) - log_lo) / (log_hi - log_lo), 0.02, 1.0);
            else if (v > 0.0)
                frac = 1.0;
            const int h = static_cast<int>(std::lround(frac * plot_h));
            svg << "<rect x=\"" << left + g * group_w + b * bar_w << "\" y=\"" << top + plot_h - h
                << "\" width=\"" << bar_w - 1 << "\" height=\"" << h << "\" fill=\""
                << palette[b % 4] << "\"/>\n";
        }
        const int cx = left + g * group_w + (bars * bar_w) / 2;
        svg << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 10 << "\" font-size=\"9\" "
            << "text-anchor=\"end\" transform=\"rotate(-60 " << cx << " " << top + plot_h + 10
            << ")\">" << svg_escape(names[static_cast<std::size_t>(g)]) << "</text>\n";
    }
    svg << "</svg>\n";
    write_text(path, svg.str());
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {}

CsvWriter::~CsvWriter() {
    try {
        write_text(path_, buffer_);
    } catch (...) {
        // Destructor must not throw; the file is simply not written.
    }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

std::string CsvWriter::num(double v) { return format_double(v); }
std::string CsvWriter::num(long long v) { return std::to_string(v); }

} // namespace contactnet
