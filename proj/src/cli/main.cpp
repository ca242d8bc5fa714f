// Command-line front end: every verb parses its inputs, calls into the
// library, and emits JSON or CSV. Exit codes: 0 success, 1 runtime failure,
// 2 usage problem; failures print a one-object JSON report on stderr.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egse/data_io.hpp"
#include "egse/density.hpp"
#include "egse/errors.hpp"
#include "egse/fit.hpp"
#include "egse/gof.hpp"
#include "egse/marginals.hpp"
#include "egse/mcstudy.hpp"
#include "egse/moments.hpp"
#include "egse/sampler.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_error(const std::string& type, const std::string& message) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["error"] = {{"type", type}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw egse::argument_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw egse::argument_error(path + ": " + e.what());
    }
}

Eigen::VectorXd to_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw egse::argument_error(what + " must be an array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw egse::argument_error(what + " must be numeric");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json vector_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json j = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

// Accepts either a full "sigma" matrix or the bivariate sigma1/sigma2/rho
// triple. The generator comes from the --generator token when given, else
// from a "nu" field, else Gaussian.
egse::Theta theta_from_json(const json& j, const std::string& generator_token,
                            const std::string& path) {
    egse::Theta theta;
    if (!j.contains("mu")) throw egse::argument_error(path + ": missing mu");
    theta.mu = to_vector(j["mu"], "mu");
    const int n = static_cast<int>(theta.mu.size());

    if (j.contains("sigma")) {
        const json& s = j["sigma"];
        if (!s.is_array() || static_cast<int>(s.size()) != n)
            throw egse::argument_error(path + ": sigma must be an n x n array");
        theta.sigma.resize(n, n);
        for (int r = 0; r < n; ++r) {
            const Eigen::VectorXd row = to_vector(s[static_cast<std::size_t>(r)], "sigma row");
            if (row.size() != n)
                throw egse::argument_error(path + ": sigma must be an n x n array");
            theta.sigma.row(r) = row.transpose();
        }
    } else if (j.contains("sigma1") && j.contains("sigma2") && j.contains("rho")) {
        if (n != 2)
            throw egse::argument_error(path +
                                       ": sigma1/sigma2/rho form needs a 2-d mu");
        const double s1 = j["sigma1"].get<double>();
        const double s2 = j["sigma2"].get<double>();
        const double rho = j["rho"].get<double>();
        theta.sigma.resize(2, 2);
        theta.sigma << s1 * s1, rho * s1 * s2, rho * s1 * s2, s2 * s2;
    } else {
        throw egse::argument_error(path + ": need sigma or sigma1/sigma2/rho");
    }

    if (!j.contains("lambda")) throw egse::argument_error(path + ": missing lambda");
    theta.lambda = to_vector(j["lambda"], "lambda");
    theta.tau = j.value("tau", 0.0);

    if (!generator_token.empty())
        theta.kind = egse::parse_generator_token(generator_token);
    else if (j.contains("nu"))
        theta.kind = egse::GeneratorKind::student_t(j["nu"].get<double>());
    else
        theta.kind = egse::GeneratorKind::gaussian();

    egse::validate_theta(theta);
    return theta;
}

egse::Theta load_theta(const std::string& path, const std::string& generator_token) {
    return theta_from_json(read_json_file(path), generator_token, path);
}

std::vector<std::string> split_commas(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::vector<std::string> header_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw egse::argument_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw egse::argument_error(path + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return split_commas(line);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw egse::argument_error("cannot open " + path + " for writing");
    out << text;
}

json se_json(const egse::FitResult& res, int n, bool tau_free) {
    if (!res.se_valid) return nullptr;
    json se;
    int k = 0;
    json mu = json::array(), sd = json::array(), rho = json::array(),
         lambda = json::array();
    for (int i = 0; i < n; ++i) mu.push_back(res.std_errors[k++]);
    for (int i = 0; i < n; ++i) sd.push_back(res.std_errors[k++]);
    for (int i = 0; i < n * (n - 1) / 2; ++i) rho.push_back(res.std_errors[k++]);
    for (int i = 0; i < n; ++i) lambda.push_back(res.std_errors[k++]);
    se["mu"] = mu;
    se["sigma"] = sd;
    se["rho"] = rho;
    se["lambda"] = lambda;
    if (tau_free) se["tau"] = res.std_errors[k++];
    return se;
}

json fit_json(const egse::FitResult& res, bool tau_free, bool with_profile) {
    const int n = res.theta_hat.dim();
    json j;
    j["schema_version"] = kSchemaVersion;

    json th;
    th["mu"] = vector_json(res.theta_hat.mu);
    th["sigma"] = matrix_json(res.theta_hat.sigma);
    if (n == 2) {
        const double s1 = std::sqrt(res.theta_hat.sigma(0, 0));
        const double s2 = std::sqrt(res.theta_hat.sigma(1, 1));
        th["sigma1"] = s1;
        th["sigma2"] = s2;
        th["rho"] = res.theta_hat.sigma(0, 1) / (s1 * s2);
    }
    th["lambda"] = vector_json(res.theta_hat.lambda);
    th["tau"] = res.theta_hat.tau;
    if (res.theta_hat.kind.student) th["nu"] = res.theta_hat.kind.nu;
    j["theta"] = th;

    json psi;
    psi["mu"] = vector_json(res.psi_hat.mu);
    psi["sigma_star"] = matrix_json(res.psi_hat.sigma_star);
    psi["delta"] = vector_json(res.psi_hat.delta);
    psi["gamma"] = res.psi_hat.gamma;
    j["psi"] = psi;

    j["se"] = se_json(res, n, tau_free);
    if (!res.se_note.empty()) j["se_note"] = res.se_note;
    j["loglik"] = res.loglik;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    if (with_profile) {
        json prof = json::array();
        for (const auto& [nu, ll] : res.nu_profile) prof.push_back({nu, ll});
        j["nu_profile"] = prof;
    }
    return j;
}

struct CommonData {
    std::string data_path;
    std::string cols_csv;
    std::string links_csv;
    bool percent = false;
};

egse::Dataset load_dataset(const CommonData& cd,
                           std::vector<egse::LinkSpec>* links_out) {
    const std::vector<std::string> cols = split_commas(cd.cols_csv);
    const std::vector<egse::LinkSpec> links = egse::parse_link_list(cd.links_csv);
    if (links_out) *links_out = links;
    return egse::load_csv(cd.data_path, cols, links, cd.percent);
}

int run(int argc, char** argv) {
    CLI::App app{"Skew-elliptical distribution toolkit: densities, sampling, "
                 "fitting, diagnostics, and simulation studies"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    // ---- pdf ----
    auto* pdf_cmd = app.add_subcommand(
        "pdf", "Evaluate the log density at each row of a CSV of points");
    struct {
        std::string theta, generator, out;
        CommonData data;
    } pdf_opt;
    pdf_cmd->add_option("--theta", pdf_opt.theta, "Parameter JSON file")->required();
    pdf_cmd->add_option("--data", pdf_opt.data.data_path, "CSV of evaluation points")
        ->required();
    pdf_cmd->add_option("--cols", pdf_opt.data.cols_csv,
                        "Comma-separated column names (default: all)");
    pdf_cmd->add_option("--link", pdf_opt.data.links_csv,
                        "Comma-separated link tokens, one per coordinate")
        ->required();
    pdf_cmd->add_option("--generator", pdf_opt.generator,
                        "Generator token: normal or student:<nu>");
    pdf_cmd->add_option("-o,--out", pdf_opt.out, "Output file (default stdout)");
    pdf_cmd->callback([&]() {
        if (pdf_opt.data.cols_csv.empty()) {
            const auto cols = header_columns(pdf_opt.data.data_path);
            std::string joined;
            for (const auto& c : cols) joined += (joined.empty() ? "" : ",") + c;
            pdf_opt.data.cols_csv = joined;
        }
        std::vector<egse::LinkSpec> links;
        const egse::Dataset ds = load_dataset(pdf_opt.data, &links);
        const egse::Theta theta = load_theta(pdf_opt.theta, pdf_opt.generator);
        const Eigen::VectorXd ll =
            egse::egse_logpdf_batch(ds.values, theta, links);
        std::string text;
        for (Eigen::Index i = 0; i < ll.size(); ++i) text += fmt17(ll[i]) + "\n";
        write_text(pdf_opt.out, text);
    });

    // ---- sample ----
    auto* sample_cmd =
        app.add_subcommand("sample", "Draw observations and write them as CSV");
    struct {
        std::string theta, links_csv, generator, out;
        std::uint64_t m = 0, seed = 0;
    } sample_opt;
    sample_cmd->add_option("--theta", sample_opt.theta, "Parameter JSON file")
        ->required();
    sample_cmd->add_option("--link", sample_opt.links_csv, "Link tokens")->required();
    sample_cmd->add_option("--generator", sample_opt.generator,
                           "Generator token: normal or student:<nu>");
    sample_cmd->add_option("-m,--size", sample_opt.m, "Number of rows")->required();
    sample_cmd->add_option("--seed", sample_opt.seed, "RNG seed")->required();
    sample_cmd->add_option("-o,--out", sample_opt.out, "Output CSV (default stdout)");
    sample_cmd->callback([&]() {
        const egse::Theta theta = load_theta(sample_opt.theta, sample_opt.generator);
        const std::vector<egse::LinkSpec> links =
            egse::parse_link_list(sample_opt.links_csv);
        const egse::SampleBatch batch =
            egse::sample_egse(theta, links, sample_opt.m, sample_opt.seed);
        std::string text;
        for (int c = 0; c < theta.dim(); ++c)
            text += (c ? ",y" : "y") + std::to_string(c + 1);
        text += "\n";
        for (Eigen::Index r = 0; r < batch.values.rows(); ++r) {
            for (Eigen::Index c = 0; c < batch.values.cols(); ++c)
                text += (c ? "," : "") + fmt17(batch.values(r, c));
            text += "\n";
        }
        write_text(sample_opt.out, text);
    });

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand(
        "fit", "Maximum-likelihood fit; writes the result as JSON");
    struct {
        CommonData data;
        std::string generator = "normal", out;
        double tau_value = 0.0;
        std::uint64_t seed = 0;
        int max_iter = 500;
        double gtol = 1e-6;
    } fit_opt;
    fit_cmd->add_option("--data", fit_opt.data.data_path, "CSV data file")->required();
    fit_cmd->add_option("--cols", fit_opt.data.cols_csv, "Column names")->required();
    fit_cmd->add_option("--link", fit_opt.data.links_csv, "Link tokens")->required();
    fit_cmd->add_option("--generator", fit_opt.generator,
                        "Generator token: normal or student:<nu>");
    auto* tau_flag =
        fit_cmd->add_option("--tau", fit_opt.tau_value, "Fix tau at this value");
    fit_cmd->add_flag("--percent", fit_opt.data.percent,
                      "Rescale 0-100 percentages to (0,1) for unit-interval links");
    fit_cmd->add_option("--seed", fit_opt.seed,
                        "Reserved; the fit itself is deterministic");
    fit_cmd->add_option("--max-iter", fit_opt.max_iter, "Iteration cap");
    fit_cmd->add_option("--gtol", fit_opt.gtol, "Gradient max-norm tolerance");
    fit_cmd->add_option("--out", fit_opt.out, "Output JSON file (default stdout)");
    fit_cmd->callback([&]() {
        std::vector<egse::LinkSpec> links;
        const egse::Dataset ds = load_dataset(fit_opt.data, &links);
        egse::FitOptions opts;
        opts.max_iter = fit_opt.max_iter;
        opts.gradient_tolerance = fit_opt.gtol;
        if (tau_flag->count() > 0) opts.tau_fixed = fit_opt.tau_value;
        const egse::FitResult res = egse::fit_mle(
            ds.values, links, egse::parse_generator_token(fit_opt.generator), opts);
        write_text(fit_opt.out,
                   fit_json(res, !opts.tau_fixed.has_value(), false).dump(2) + "\n");
    });

    // ---- profile ----
    auto* profile_cmd = app.add_subcommand(
        "profile", "Student fit profiled over an integer grid of nu");
    struct {
        CommonData data;
        std::string out, nu_list;
        double tau_value = 0.0;
        int nu_min = 1, nu_max = 50;
        int max_iter = 500;
    } prof_opt;
    profile_cmd->add_option("--data", prof_opt.data.data_path, "CSV data file")
        ->required();
    profile_cmd->add_option("--cols", prof_opt.data.cols_csv, "Column names")
        ->required();
    profile_cmd->add_option("--link", prof_opt.data.links_csv, "Link tokens")
        ->required();
    auto* prof_tau =
        profile_cmd->add_option("--tau", prof_opt.tau_value, "Fix tau at this value");
    profile_cmd->add_flag("--percent", prof_opt.data.percent,
                          "Rescale 0-100 percentages to (0,1)");
    profile_cmd->add_option("--nu-min", prof_opt.nu_min, "Grid start (default 1)");
    profile_cmd->add_option("--nu-max", prof_opt.nu_max, "Grid end (default 50)");
    profile_cmd->add_option("--nu-list", prof_opt.nu_list,
                            "Explicit comma-separated grid, overrides min/max");
    profile_cmd->add_option("--max-iter", prof_opt.max_iter, "Iteration cap per fit");
    profile_cmd->add_option("--out", prof_opt.out, "Output JSON file (default stdout)");
    profile_cmd->callback([&]() {
        std::vector<egse::LinkSpec> links;
        const egse::Dataset ds = load_dataset(prof_opt.data, &links);
        egse::FitOptions opts;
        opts.max_iter = prof_opt.max_iter;
        if (prof_tau->count() > 0) opts.tau_fixed = prof_opt.tau_value;
        if (!prof_opt.nu_list.empty()) {
            for (const std::string& tok : split_commas(prof_opt.nu_list))
                opts.nu_grid.push_back(std::stoi(tok));
        } else {
            if (prof_opt.nu_min < 1 || prof_opt.nu_max < prof_opt.nu_min)
                throw egse::argument_error("profile: bad nu grid bounds");
            for (int nu = prof_opt.nu_min; nu <= prof_opt.nu_max; ++nu)
                opts.nu_grid.push_back(nu);
        }
        const egse::FitResult res = egse::profile_nu(ds.values, links, opts);
        write_text(prof_opt.out,
                   fit_json(res, !opts.tau_fixed.has_value(), true).dump(2) + "\n");
    });

    // ---- quantile ----
    auto* quantile_cmd =
        app.add_subcommand("quantile", "Marginal quantile of one coordinate");
    struct {
        std::string theta, links_csv, generator;
        int i = 1;
        double p = 0.5;
    } q_opt;
    quantile_cmd->add_option("--theta", q_opt.theta, "Parameter JSON file")->required();
    quantile_cmd->add_option("--link", q_opt.links_csv, "Link tokens")->required();
    quantile_cmd->add_option("--generator", q_opt.generator, "Generator token");
    quantile_cmd->add_option("-i,--index", q_opt.i, "Coordinate (1-based)")->required();
    quantile_cmd->add_option("-p,--prob", q_opt.p, "Probability level")->required();
    quantile_cmd->callback([&]() {
        const egse::Theta theta = load_theta(q_opt.theta, q_opt.generator);
        const std::vector<egse::LinkSpec> links =
            egse::parse_link_list(q_opt.links_csv);
        const double value =
            egse::marginal_quantile(q_opt.p, q_opt.i - 1, theta, links);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["i"] = q_opt.i;
        j["p"] = q_opt.p;
        j["quantile"] = value;
        std::cout << j.dump() << "\n";
    });

    // ---- conditional ----
    auto* cond_cmd = app.add_subcommand(
        "conditional",
        "Density of coordinate i given coordinate j exceeds a threshold, on a "
        "quantile grid; CSV output");
    struct {
        std::string theta, links_csv, generator, out;
        int i = 1, j = 2, grid = 201;
        double kappa = 0.0;
    } c_opt;
    cond_cmd->add_option("--theta", c_opt.theta, "Parameter JSON file")->required();
    cond_cmd->add_option("--link", c_opt.links_csv, "Link tokens")->required();
    cond_cmd->add_option("--generator", c_opt.generator, "Generator token");
    cond_cmd->add_option("-i,--index", c_opt.i, "Target coordinate (1-based)")
        ->required();
    cond_cmd->add_option("-j,--given", c_opt.j, "Conditioning coordinate (1-based)")
        ->required();
    cond_cmd->add_option("--kappa", c_opt.kappa, "Threshold in the j-th domain")
        ->required();
    cond_cmd->add_option("--grid", c_opt.grid, "Number of grid points (default 201)");
    cond_cmd->add_option("-o,--out", c_opt.out, "Output CSV (default stdout)");
    cond_cmd->callback([&]() {
        const egse::Theta theta = load_theta(c_opt.theta, c_opt.generator);
        const std::vector<egse::LinkSpec> links =
            egse::parse_link_list(c_opt.links_csv);
        if (c_opt.grid < 2) throw egse::argument_error("conditional: grid too small");
        std::string text = "y,pdf\n";
        for (int k = 0; k < c_opt.grid; ++k) {
            const double p =
                0.001 + (0.999 - 0.001) * static_cast<double>(k) / (c_opt.grid - 1);
            const double y =
                egse::marginal_quantile(p, c_opt.i - 1, theta, links);
            const double pdf = std::exp(egse::selection_conditional_logpdf(
                y, c_opt.i - 1, c_opt.j - 1, c_opt.kappa, theta, links));
            text += fmt17(y) + "," + fmt17(pdf) + "\n";
        }
        write_text(c_opt.out, text);
    });

    // ---- moment ----
    auto* moment_cmd = app.add_subcommand(
        "moment", "Mixed moment E[prod Y_i^{m_i}]; closed form or Monte Carlo");
    struct {
        std::string theta, links_csv, generator, m_csv, method = "auto";
        std::uint64_t mc_size = 100000, seed = 0;
    } m_opt;
    moment_cmd->add_option("--theta", m_opt.theta, "Parameter JSON file")->required();
    moment_cmd->add_option("--link", m_opt.links_csv, "Link tokens")->required();
    moment_cmd->add_option("--generator", m_opt.generator, "Generator token");
    moment_cmd->add_option("--m", m_opt.m_csv, "Comma-separated exponents")->required();
    moment_cmd
        ->add_option("--method", m_opt.method,
                     "auto, closed (log links + normal), or mc")
        ->check(CLI::IsMember({"auto", "closed", "mc"}));
    moment_cmd->add_option("--mc-size", m_opt.mc_size, "Monte Carlo sample size");
    moment_cmd->add_option("--seed", m_opt.seed, "RNG seed")->required();
    moment_cmd->callback([&]() {
        const egse::Theta theta = load_theta(m_opt.theta, m_opt.generator);
        const std::vector<egse::LinkSpec> links =
            egse::parse_link_list(m_opt.links_csv);
        std::vector<int> exponents;
        for (const std::string& tok : split_commas(m_opt.m_csv))
            exponents.push_back(std::stoi(tok));

        bool closed = m_opt.method == "closed";
        if (m_opt.method == "auto") {
            closed = !theta.kind.student;
            for (const egse::LinkSpec& link : links)
                closed = closed && link.family == egse::LinkFamily::log_link;
        }
        json j;
        j["schema_version"] = kSchemaVersion;
        if (closed) {
            j["estimate"] = egse::log_link_mixed_moment(exponents, theta, links);
            j["stderr"] = 0.0;
            j["method"] = "closed_form_log_link";
        } else {
            egse::MomentRequest req;
            req.exponents = exponents;
            req.mc_size = m_opt.mc_size;
            req.seed = m_opt.seed;
            const egse::McEstimate est = egse::mc_moment(req, theta, links);
            j["estimate"] = est.estimate;
            j["stderr"] = est.std_error;
            j["method"] = "monte_carlo";
        }
        std::cout << j.dump() << "\n";
    });

    // ---- kl ----
    auto* kl_cmd = app.add_subcommand(
        "kl", "Kullback-Leibler divergence between two parameter sets");
    struct {
        std::string theta1, theta2, links_csv, generator, method = "mc";
        std::uint64_t mc_size = 100000, seed = 0;
    } kl_opt;
    kl_cmd->add_option("--theta1", kl_opt.theta1, "Left parameter JSON")->required();
    kl_cmd->add_option("--theta2", kl_opt.theta2, "Right parameter JSON")->required();
    kl_cmd->add_option("--link", kl_opt.links_csv,
                       "Link tokens (the divergence does not depend on them)");
    kl_cmd->add_option("--generator", kl_opt.generator, "Generator token");
    kl_cmd->add_option("--method", kl_opt.method, "mc or closed (unskewed normal)")
        ->check(CLI::IsMember({"mc", "closed"}));
    kl_cmd->add_option("--mc-size", kl_opt.mc_size, "Monte Carlo sample size");
    kl_cmd->add_option("--seed", kl_opt.seed, "RNG seed")->required();
    kl_cmd->callback([&]() {
        const egse::Theta theta1 = load_theta(kl_opt.theta1, kl_opt.generator);
        const egse::Theta theta2 = load_theta(kl_opt.theta2, kl_opt.generator);
        json j;
        j["schema_version"] = kSchemaVersion;
        if (kl_opt.method == "closed") {
            j["estimate"] = egse::kl_gaussian_closed_form(theta1, theta2);
            j["stderr"] = 0.0;
            j["method"] = "gaussian_closed_form";
        } else {
            std::vector<egse::LinkSpec> links;
            if (!kl_opt.links_csv.empty())
                links = egse::parse_link_list(kl_opt.links_csv);
            const egse::McEstimate est = egse::kl_divergence_mc(
                theta1, theta2, links, kl_opt.mc_size, kl_opt.seed);
            j["estimate"] = est.estimate;
            j["stderr"] = est.std_error;
            j["method"] = "monte_carlo";
        }
        std::cout << j.dump() << "\n";
    });

    // ---- gof ----
    auto* gof_cmd = app.add_subcommand(
        "gof", "Quantile-residual diagnostics for a fitted model");
    struct {
        std::string fit, qq, residuals;
        CommonData data;
        std::uint64_t seed = 0;
        bool per_margin = false;
    } g_opt;
    gof_cmd->add_option("--fit", g_opt.fit, "fit.json from the fit verb")->required();
    gof_cmd->add_option("--data", g_opt.data.data_path, "CSV data file")->required();
    gof_cmd->add_option("--cols", g_opt.data.cols_csv, "Column names")->required();
    gof_cmd->add_option("--link", g_opt.data.links_csv, "Link tokens")->required();
    gof_cmd->add_flag("--percent", g_opt.data.percent,
                      "Rescale 0-100 percentages to (0,1)");
    gof_cmd->add_option("--seed", g_opt.seed,
                        "Reserved for discrete links; residuals are deterministic");
    gof_cmd->add_flag("--per-margin", g_opt.per_margin,
                      "Use both marginal CDFs instead of the marginal + "
                      "conditional pair");
    gof_cmd->add_option("--qq", g_opt.qq, "Write QQ pairs to this CSV");
    gof_cmd->add_option("--residuals", g_opt.residuals,
                        "Write raw residuals to this CSV");
    gof_cmd->callback([&]() {
        const json fit_doc = read_json_file(g_opt.fit);
        if (!fit_doc.contains("theta"))
            throw egse::argument_error(g_opt.fit + ": missing theta");
        const egse::Theta theta = theta_from_json(fit_doc["theta"], "", g_opt.fit);

        std::vector<egse::LinkSpec> links;
        const egse::Dataset ds = load_dataset(g_opt.data, &links);
        const egse::ResidualReport rep = egse::quantile_residuals(
            ds.values, theta, links, g_opt.seed, !g_opt.per_margin);
        const egse::GofTest ks = egse::ks_test(rep.residuals);
        const egse::GofTest ad = egse::ad_test(rep.residuals);

        json j;
        j["schema_version"] = kSchemaVersion;
        j["ks_stat"] = ks.stat;
        j["ks_pvalue"] = ks.pvalue;
        j["ad_stat"] = ad.stat;
        j["ad_pvalue"] = ad.pvalue;
        j["clamped"] = rep.clamped;
        j["residual_count"] = rep.residuals.size();
        j["seed"] = rep.seed;
        std::cout << j.dump() << "\n";

        if (!g_opt.qq.empty()) {
            std::string text = "theoretical,empirical\n";
            for (const auto& [t, e] : egse::qq_points(rep.residuals))
                text += fmt17(t) + "," + fmt17(e) + "\n";
            write_text(g_opt.qq, text);
        }
        if (!g_opt.residuals.empty()) {
            std::string text = "residual\n";
            for (Eigen::Index i = 0; i < rep.residuals.size(); ++i)
                text += fmt17(rep.residuals[i]) + "\n";
            write_text(g_opt.residuals, text);
        }
    });

    // ---- study ----
    auto* study_cmd = app.add_subcommand(
        "study", "Simulation study: simulate, refit, aggregate RB and RMSE");
    struct {
        std::string config, out;
        std::uint64_t seed = 0;
    } s_opt;
    study_cmd->add_option("--config", s_opt.config, "Scenario JSON file")->required();
    study_cmd->add_option("--seed", s_opt.seed, "Base RNG seed")->required();
    study_cmd->add_option("--out", s_opt.out, "Output CSV (default stdout)");
    study_cmd->callback([&]() {
        const json cfg = read_json_file(s_opt.config);
        egse::StudyScenario sc;
        sc.true_theta.mu = to_vector(cfg.at("mu"), "mu");
        sc.true_theta.lambda = to_vector(cfg.at("lambda"), "lambda");
        sc.true_theta.tau = cfg.value("tau", 0.0);
        const double s1 = cfg.at("sigma1").get<double>();
        const double s2 = cfg.at("sigma2").get<double>();
        sc.true_theta.sigma.resize(2, 2);
        sc.true_theta.sigma << s1 * s1, 0.0, 0.0, s2 * s2;
        sc.true_theta.kind =
            egse::parse_generator_token(cfg.value("generator", "normal"));
        sc.links = egse::parse_link_list(cfg.at("links").get<std::string>());
        if (cfg.contains("sizes")) {
            sc.sample_sizes.clear();
            for (const auto& v : cfg["sizes"]) sc.sample_sizes.push_back(v.get<int>());
        }
        if (cfg.contains("rhos")) {
            sc.rho_values.clear();
            for (const auto& v : cfg["rhos"]) sc.rho_values.push_back(v.get<double>());
        }
        sc.replications = cfg.value("replications", 100);
        if (cfg.contains("tau_fixed"))
            sc.fit_options.tau_fixed = cfg["tau_fixed"].get<double>();
        sc.base_seed = s_opt.seed;
        const egse::StudyReport report = egse::run_study(sc);
        write_text(s_opt.out, egse::study_csv(report));
    });

    // ---- summarize ----
    auto* sum_cmd = app.add_subcommand(
        "summarize", "Per-column summary statistics of a CSV");
    struct {
        std::string data_path, cols_csv;
        bool percent = false;
    } sum_opt;
    sum_cmd->add_option("--data", sum_opt.data_path, "CSV data file")->required();
    sum_cmd->add_option("--cols", sum_opt.cols_csv, "Column names")->required();
    sum_cmd->add_flag("--percent", sum_opt.percent,
                      "Divide 0-100 values by 100 before summarizing");
    sum_cmd->callback([&]() {
        const std::vector<std::string> cols = split_commas(sum_opt.cols_csv);
        // Summaries need no domain restriction; a full-line link admits any
        // finite value.
        std::vector<egse::LinkSpec> links(cols.size(),
                                          egse::parse_link_token("sinh"));
        egse::Dataset ds = egse::load_csv(sum_opt.data_path, cols, links, false);
        if (sum_opt.percent) {
            for (Eigen::Index r = 0; r < ds.values.rows(); ++r)
                for (Eigen::Index c = 0; c < ds.values.cols(); ++c)
                    if (ds.values(r, c) >= 0.0 && ds.values(r, c) <= 100.0)
                        ds.values(r, c) /= 100.0;
        }
        const std::vector<egse::ColumnSummary> sums = egse::summarize(ds);
        json j;
        j["schema_version"] = kSchemaVersion;
        json arr = json::array();
        for (std::size_t c = 0; c < sums.size(); ++c) {
            const egse::ColumnSummary& s = sums[c];
            json col;
            col["name"] = ds.column_names[c];
            col["min"] = s.min;
            col["median"] = s.median;
            col["mean"] = s.mean;
            col["max"] = s.max;
            col["sd"] = s.sd;
            col["cv"] = s.cv;
            col["skewness"] = s.skewness;
            col["kurtosis"] = s.kurtosis;
            col["degenerate"] = s.degenerate;
            arr.push_back(col);
        }
        j["columns"] = arr;
        std::cout << j.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const egse::argument_error& e) {
        emit_error("argument", e.what());
        return 2;
    } catch (const egse::domain_error& e) {
        emit_error("domain", e.what());
        return 1;
    } catch (const egse::matrix_error& e) {
        emit_error("matrix", e.what());
        return 1;
    } catch (const egse::numeric_error& e) {
        emit_error("numeric", e.what());
        return 1;
    } catch (const egse::progress_error& e) {
        emit_error("progress", e.what());
        return 1;
    } catch (const egse::unsupported_error& e) {
        emit_error("unsupported", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}
