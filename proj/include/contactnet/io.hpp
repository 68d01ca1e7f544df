#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contactnet/contact_matrix.hpp"
#include "contactnet/population.hpp"

namespace contactnet {

// Pyramid file: header "country,age_lo,age_hi,sex,share", sex spelled
// "male"/"female" (or "m"/"f"). Throws ParseError with the offending line.
AgeSexPyramid read_pyramid_csv(const std::filesystem::path& path);

// Contact matrix file: header "bin,<label...>,pop_size", one row per bin
// carrying the rates followed by the bin's population size.
ContactMatrix read_contact_matrix_csv(const std::filesystem::path& path);
void write_contact_matrix_csv(const std::filesystem::path& path, const ContactMatrix& m);

void write_population_csv(const std::filesystem::path& path, const Population& pop);
Population read_population_csv(const std::filesystem::path& path, const std::string& country);

void write_edge_list_csv(const std::filesystem::path& path, const Network& net);

// Self-contained SVG heatmap with a linear white-to-blue colour scale,
// optional per-cell value annotations.
void write_heatmap_svg(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels, const std::string& title,
                       bool annotate = true);

// Grouped log-scale bar chart: one group per name, one bar per series.
void write_bar_chart_svg(const std::filesystem::path& path,
                         const std::vector<std::string>& names,
                         const std::vector<std::string>& series_names,
                         const std::vector<std::vector<double>>& series,
                         const std::string& title);

// Small line-oriented CSV writer; formats doubles with up to 12 significant
// digits so repeated runs produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    static std::string num(double v);
    static std::string num(long long v);

private:
    std::string buffer_;
    std::filesystem::path path_;
};

std::string format_double(double v);

} // namespace contactnet
