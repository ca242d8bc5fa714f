#pragma once

// CSV ingestion with link-domain validation, per-column summary statistics,
// and CSV output at full double precision.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "egse/links.hpp"

namespace egse {

struct Dataset {
    std::vector<std::string> column_names;
    Eigen::MatrixXd values;  // one row per observation
    std::vector<std::pair<double, double>> link_domains;
};

struct ColumnSummary {
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double sd = 0.0;
    double cv = 0.0;        // 100 * sd / mean
    double skewness = 0.0;  // standardized third central moment
    double kurtosis = 0.0;  // excess (standardized fourth moment minus 3)
    bool degenerate = false;
};

// Reads the named columns, optionally rescaling percentage columns into the
// unit interval when the link expects (0,1), and validates every cell against
// its link domain.
Dataset load_csv(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<LinkSpec>& links, bool percent = false);

// In-memory construction with the same validation as load_csv.
Dataset make_dataset(const std::vector<std::string>& names,
                     const Eigen::MatrixXd& values,
                     const std::vector<LinkSpec>& links);

// Per-column summaries; needs at least 4 rows so the kurtosis is defined.
std::vector<ColumnSummary> summarize(const Dataset& dataset);

// Header plus rows, 17 significant digits per cell.
void write_csv(const std::string& path, const std::vector<std::string>& names,
               const Eigen::MatrixXd& values);

}  // namespace egse
