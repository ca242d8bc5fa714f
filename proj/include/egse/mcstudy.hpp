#pragma once

// Estimator-recovery harness: simulate, refit, and aggregate relative bias
// and root mean square error over a grid of sample sizes and correlations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "egse/density.hpp"
#include "egse/fit.hpp"
#include "egse/links.hpp"

namespace egse {

struct StudyScenario {
    // Bivariate template: mu, lambda, tau, kind, and the diagonal of sigma
    // supply the per-cell truth; the off-diagonal comes from rho_values.
    Theta true_theta;
    std::vector<LinkSpec> links;
    std::vector<int> sample_sizes = {200, 500, 1000, 2000};
    std::vector<double> rho_values = {0.10, 0.25, 0.50, 0.75, 0.90};
    int replications = 100;
    std::uint64_t base_seed = 0;
    FitOptions fit_options;
};

struct StudyCell {
    int size = 0;
    double rho = 0.0;
    std::vector<double> rb;    // per parameter; NaN where truth is zero
    std::vector<double> rmse;  // per parameter
    int failures = 0;
    bool valid = false;  // false when every replication failed
};

struct StudyReport {
    std::vector<std::string> param_names;
    std::vector<StudyCell> cells;
};

// Mean absolute relative deviation and root mean square error per component.
// Exposed separately so the aggregation arithmetic is testable on its own.
struct CellAggregate {
    std::vector<double> rb;
    std::vector<double> rmse;
};
CellAggregate aggregate_estimates(const std::vector<Eigen::VectorXd>& estimates,
                                  const Eigen::VectorXd& truth);

StudyReport run_study(const StudyScenario& scenario);

// CSV rendering with columns size,rho,param,rb,rmse,failures.
std::string study_csv(const StudyReport& report);

// Worker count: EGSE_THREADS when set and positive, else the hardware count.
int study_thread_count();

}  // namespace egse
