#include "egse/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "egse/errors.hpp"

namespace egse {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

void validate_cell(double value, const LinkSpec& link, Eigen::Index row,
                   const std::string& column) {
    if (!(value > link.domain_lo && value < link.domain_hi))
        throw domain_error("row " + std::to_string(row + 1) + ", column " +
                           column + ": value " + std::to_string(value) +
                           " outside the link domain (" +
                           std::to_string(link.domain_lo) + ", " +
                           std::to_string(link.domain_hi) + ")");
}

bool unit_interval_domain(const LinkSpec& link) {
    return link.domain_lo == 0.0 && link.domain_hi == 1.0;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<LinkSpec>& links, bool percent) {
    if (columns.empty()) throw argument_error("load_csv: no columns requested");
    if (columns.size() != links.size())
        throw argument_error("load_csv: need one link per requested column");

    std::ifstream in(path);
    if (!in) throw argument_error("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw argument_error("load_csv: " + path + " is empty");
    const std::vector<std::string> header = split_line(line);

    std::vector<Eigen::Index> indices;
    for (const std::string& name : columns) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw argument_error("load_csv: column '" + name + "' not found in " +
                                 path);
        indices.push_back(it - header.begin());
    }

    std::vector<std::vector<double>> rows;
    Eigen::Index line_no = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        std::vector<double> row(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (indices[c] >= static_cast<Eigen::Index>(cells.size()))
                throw argument_error("load_csv: row " +
                                     std::to_string(line_no + 1) +
                                     " has too few cells");
            const std::string& cell = cells[static_cast<std::size_t>(indices[c])];
            try {
                std::size_t used = 0;
                row[c] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw argument_error("load_csv: non-numeric cell '" + cell +
                                     "' at row " + std::to_string(line_no + 1) +
                                     ", column " + columns[c]);
            }
        }
        rows.push_back(std::move(row));
        ++line_no;
    }
    if (rows.empty()) throw argument_error("load_csv: no data rows in " + path);

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(columns.size()));
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            double v = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (percent && unit_interval_domain(links[static_cast<std::size_t>(c)]) &&
                v >= 0.0 && v <= 100.0)
                v /= 100.0;
            values(r, c) = v;
        }

    return make_dataset(columns, values, links);
}

Dataset make_dataset(const std::vector<std::string>& names,
                     const Eigen::MatrixXd& values,
                     const std::vector<LinkSpec>& links) {
    if (names.size() != links.size() ||
        values.cols() != static_cast<Eigen::Index>(links.size()))
        throw argument_error("make_dataset: names, links, and columns must agree");
    if (values.rows() < 1) throw argument_error("make_dataset: no rows");

    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c)
            validate_cell(values(r, c), links[static_cast<std::size_t>(c)], r,
                          names[static_cast<std::size_t>(c)]);

    Dataset ds;
    ds.column_names = names;
    ds.values = values;
    for (const LinkSpec& link : links)
        ds.link_domains.emplace_back(link.domain_lo, link.domain_hi);
    return ds;
}

std::vector<ColumnSummary> summarize(const Dataset& dataset) {
    const Eigen::Index m = dataset.values.rows();
    if (m < 4) throw argument_error("summarize: need at least 4 rows");

    std::vector<ColumnSummary> out;
    for (Eigen::Index c = 0; c < dataset.values.cols(); ++c) {
        const Eigen::VectorXd col = dataset.values.col(c);
        ColumnSummary s;
        s.min = col.minCoeff();
        s.max = col.maxCoeff();
        s.mean = col.mean();

        Eigen::VectorXd sorted = col;
        std::sort(sorted.data(), sorted.data() + m);
        s.median = (m % 2 == 1) ? sorted[m / 2]
                                : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

        const Eigen::ArrayXd centered = col.array() - s.mean;
        const double m2 = centered.square().mean();
        const double m3 = centered.cube().mean();
        const double m4 = centered.square().square().mean();
        s.sd = std::sqrt(centered.square().sum() / static_cast<double>(m - 1));

        if (m2 <= 0.0) {
            s.degenerate = true;
            s.cv = s.skewness = s.kurtosis =
                std::numeric_limits<double>::quiet_NaN();
        } else {
            s.cv = (s.mean != 0.0)
                       ? 100.0 * s.sd / s.mean
                       : std::numeric_limits<double>::quiet_NaN();
            s.skewness = m3 / std::pow(m2, 1.5);
            s.kurtosis = m4 / (m2 * m2) - 3.0;
        }
        out.push_back(s);
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& names,
               const Eigen::MatrixXd& values) {
    if (values.cols() != static_cast<Eigen::Index>(names.size()))
        throw argument_error("write_csv: header size must match columns");
    std::ofstream out(path);
    if (!out) throw argument_error("write_csv: cannot open " + path);

    for (std::size_t c = 0; c < names.size(); ++c)
        out << (c ? "," : "") << names[c];
    out << "\n";

    char buf[64];
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", values(r, c));
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw argument_error("write_csv: write failed for " + path);
}

}  // namespace egse
