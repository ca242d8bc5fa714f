#include "egse/mcstudy.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "egse/errors.hpp"
#include "egse/sampler.hpp"

namespace egse {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kParamNames = {
    "mu1", "mu2", "sigma1", "sigma2", "rho", "lambda1", "lambda2", "tau"};

void check_scenario(const StudyScenario& s) {
    validate_theta(s.true_theta);
    if (s.true_theta.dim() != 2)
        throw argument_error("run_study: bivariate scenarios only");
    if (s.links.size() != 2) throw argument_error("run_study: need two links");
    if (s.replications < 2)
        throw argument_error("run_study: need at least 2 replications");
    if (s.sample_sizes.empty() || s.rho_values.empty())
        throw argument_error("run_study: empty grid");
    for (int m : s.sample_sizes)
        if (m < 50) throw argument_error("run_study: sample sizes must be >= 50");
    for (double rho : s.rho_values)
        if (!(rho > -1.0 && rho < 1.0))
            throw argument_error("run_study: rho values must lie in (-1, 1)");
}

Theta cell_theta(const StudyScenario& s, double rho) {
    Theta theta = s.true_theta;
    const double s1 = std::sqrt(s.true_theta.sigma(0, 0));
    const double s2 = std::sqrt(s.true_theta.sigma(1, 1));
    theta.sigma.resize(2, 2);
    theta.sigma << s1 * s1, s1 * s2 * rho, s1 * s2 * rho, s2 * s2;
    return theta;
}

Eigen::VectorXd user_vector(const Theta& theta) {
    Eigen::VectorXd v(8);
    const double s1 = std::sqrt(theta.sigma(0, 0));
    const double s2 = std::sqrt(theta.sigma(1, 1));
    v << theta.mu[0], theta.mu[1], s1, s2, theta.sigma(0, 1) / (s1 * s2),
        theta.lambda[0], theta.lambda[1], theta.tau;
    return v;
}

void run_tasks(int total, int threads, const std::function<void(int)>& body) {
    if (threads <= 1) {
        for (int i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= total) return;
                body(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace

CellAggregate aggregate_estimates(const std::vector<Eigen::VectorXd>& estimates,
                                  const Eigen::VectorXd& truth) {
    if (estimates.empty())
        throw argument_error("aggregate_estimates: no estimates");
    const Eigen::Index p = truth.size();
    CellAggregate agg;
    agg.rb.assign(static_cast<std::size_t>(p), 0.0);
    agg.rmse.assign(static_cast<std::size_t>(p), 0.0);
    for (const Eigen::VectorXd& est : estimates) {
        if (est.size() != p)
            throw argument_error("aggregate_estimates: inconsistent lengths");
        for (Eigen::Index k = 0; k < p; ++k) {
            const double err = est[k] - truth[k];
            if (truth[k] != 0.0)
                agg.rb[static_cast<std::size_t>(k)] +=
                    std::fabs(err / truth[k]);
            agg.rmse[static_cast<std::size_t>(k)] += err * err;
        }
    }
    const double n = static_cast<double>(estimates.size());
    for (Eigen::Index k = 0; k < p; ++k) {
        agg.rb[static_cast<std::size_t>(k)] =
            (truth[k] != 0.0) ? agg.rb[static_cast<std::size_t>(k)] / n : kNan;
        agg.rmse[static_cast<std::size_t>(k)] =
            std::sqrt(agg.rmse[static_cast<std::size_t>(k)] / n);
    }
    return agg;
}

int study_thread_count() {
    if (const char* env = std::getenv("EGSE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

StudyReport run_study(const StudyScenario& scenario) {
    check_scenario(scenario);
    const int n_sizes = static_cast<int>(scenario.sample_sizes.size());
    const int n_rhos = static_cast<int>(scenario.rho_values.size());
    const int n_cells = n_sizes * n_rhos;
    const int reps = scenario.replications;
    const int total = n_cells * reps;

    // One slot per (cell, replication); empty means the replication failed.
    std::vector<std::optional<Eigen::VectorXd>> slots(
        static_cast<std::size_t>(total));

    const auto body = [&](int task) {
        const int cell = task / reps;
        const int rep = task % reps;
        const int si = cell / n_rhos;
        const int ri = cell % n_rhos;
        const Theta truth = cell_theta(scenario, scenario.rho_values[ri]);
        const std::uint64_t stream =
            static_cast<std::uint64_t>(cell) * 1000003ull +
            static_cast<std::uint64_t>(rep);
        try {
            const SampleBatch batch = sample_egse(
                truth, scenario.links,
                static_cast<std::uint64_t>(scenario.sample_sizes[si]),
                scenario.base_seed, stream);
            FitOptions opts = scenario.fit_options;
            opts.nu_grid.clear();
            opts.start.reset();
            const FitResult fit =
                fit_mle(batch.values, scenario.links, truth.kind, opts);
            if (fit.converged)
                slots[static_cast<std::size_t>(task)] = user_vector(fit.theta_hat);
        } catch (const std::exception&) {
            // failed replication; the slot stays empty and gets counted
        }
    };
    run_tasks(total, study_thread_count(), body);

    StudyReport report;
    report.param_names = kParamNames;
    report.cells.reserve(static_cast<std::size_t>(n_cells));
    for (int cell = 0; cell < n_cells; ++cell) {
        const int si = cell / n_rhos;
        const int ri = cell % n_rhos;
        StudyCell out;
        out.size = scenario.sample_sizes[si];
        out.rho = scenario.rho_values[ri];

        std::vector<Eigen::VectorXd> estimates;
        estimates.reserve(static_cast<std::size_t>(reps));
        for (int rep = 0; rep < reps; ++rep) {
            const auto& slot = slots[static_cast<std::size_t>(cell * reps + rep)];
            if (slot.has_value())
                estimates.push_back(*slot);
            else
                ++out.failures;
        }

        if (estimates.empty()) {
            out.valid = false;
            out.rb.assign(kParamNames.size(), kNan);
            out.rmse.assign(kParamNames.size(), kNan);
        } else {
            const CellAggregate agg = aggregate_estimates(
                estimates, user_vector(cell_theta(scenario, out.rho)));
            out.rb = agg.rb;
            out.rmse = agg.rmse;
            out.valid = true;
        }
        report.cells.push_back(std::move(out));
    }
    return report;
}

std::string study_csv(const StudyReport& report) {
    std::string out = "size,rho,param,rb,rmse,failures\n";
    char buf[256];
    for (const StudyCell& cell : report.cells) {
        for (std::size_t k = 0; k < report.param_names.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%s,%.17g,%.17g,%d\n",
                          cell.size, cell.rho, report.param_names[k].c_str(),
                          cell.rb[k], cell.rmse[k], cell.failures);
            out += buf;
        }
    }
    return out;
}

}  // namespace egse
