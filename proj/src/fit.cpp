#include "egse/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egse/errors.hpp"
#include "egse/linalg.hpp"
#include "egse/special.hpp"

namespace egse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCdfFloor = 1e-300;

Eigen::MatrixXd transform_data(const Eigen::MatrixXd& data,
                               const std::vector<LinkSpec>& links) {
    if (data.cols() != static_cast<Eigen::Index>(links.size()))
        throw argument_error("fit: number of links must match number of columns");
    if (data.rows() == 0) throw argument_error("fit: empty data");
    Eigen::MatrixXd yg(data.rows(), data.cols());
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            try {
                yg(r, c) = eval_link(links[static_cast<std::size_t>(c)], data(r, c));
            } catch (const domain_error& e) {
                throw domain_error("row " + std::to_string(r + 1) + ", column " +
                                   std::to_string(c + 1) + ": " + e.what());
            }
        }
    }
    return yg;
}

// phi(a)/Phi(a), stable into the deep left tail via the Mills asymptote.
double normal_hazard(double a) {
    if (a > -30.0) return norm_pdf(a) / std::fmax(norm_cdf(a), kCdfFloor);
    const double a2 = a * a;
    return -a / (1.0 - 1.0 / a2 + 3.0 / (a2 * a2));
}

// Latent-scale log-likelihood and its gradient, summed over rows. gsigma is
// the gradient with respect to Sigma in the trace sense: d(sum ll) =
// tr(gsigma dSigma) for symmetric perturbations dSigma.
struct ModelGrad {
    double loglik = 0.0;
    Eigen::VectorXd gmu;
    Eigen::MatrixXd gsigma;
    Eigen::VectorXd glambda;
    double gtau = 0.0;
};

ModelGrad model_gradient(const Eigen::MatrixXd& yg, const Theta& theta) {
    const int n = theta.dim();
    const Eigen::Index m = yg.rows();
    const SigmaFactor fac = SigmaFactor::make(theta.sigma);
    const Eigen::VectorXd sigma_lambda = theta.sigma * theta.lambda;
    const double u = 1.0 + theta.lambda.dot(sigma_lambda);
    const double root_u = std::sqrt(u);
    const double c = theta.tau / root_u;

    double f_den, big_f_den;
    if (theta.kind.student) {
        f_den = student_pdf(c, theta.kind.nu);
        big_f_den = student_cdf(c, theta.kind.nu);
    } else {
        f_den = norm_pdf(c);
        big_f_den = norm_cdf(c);
    }
    big_f_den = std::fmax(big_f_den, kCdfFloor);
    const double coeff_u = f_den * c / (2.0 * u * big_f_den);
    const double base_const = -0.5 * fac.log_det -
                              log_normalization_constant(theta.kind, n) -
                              std::log(big_f_den);

    ModelGrad out;
    out.gmu = Eigen::VectorXd::Zero(n);
    out.gsigma = Eigen::MatrixXd::Zero(n, n);
    out.glambda = Eigen::VectorXd::Zero(n);

    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::VectorXd d = yg.row(r).transpose() - theta.mu;
        const Eigen::VectorXd kd = fac.solve(d);
        const double q = d.dot(kd);
        const double a = theta.lambda.dot(d) + theta.tau;

        double h, w_a, w_q;
        if (theta.kind.student) {
            const double nu = theta.kind.nu;
            const double dfn = nu + n;
            const double scale = std::sqrt(dfn / (nu + q));
            const double ar = a * scale;
            const double big_f = std::fmax(student_cdf(ar, dfn), kCdfFloor);
            const double f = student_pdf(ar, dfn);
            h = -dfn / (2.0 * (nu + q));
            w_a = f * scale / big_f;
            w_q = -f * a * scale / (2.0 * (nu + q) * big_f);
            out.loglik +=
                base_const + generator_log_value(theta.kind, n, q) + std::log(big_f);
        } else {
            h = -0.5;
            w_q = 0.0;
            w_a = normal_hazard(a);
            out.loglik +=
                base_const - 0.5 * q + std::log(std::fmax(norm_cdf(a), kCdfFloor));
        }

        const double hw = h + w_q;
        out.gmu.noalias() += -2.0 * hw * kd - w_a * theta.lambda;
        out.gsigma.noalias() += -hw * (kd * kd.transpose());
        out.glambda.noalias() += w_a * d;
        out.gtau += w_a;
    }

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd sigma_inv = fac.solve(eye);
    const double dm = static_cast<double>(m);
    out.gsigma.noalias() += dm * (-0.5 * sigma_inv +
                                  coeff_u * (theta.lambda * theta.lambda.transpose()));
    out.glambda.noalias() += dm * 2.0 * coeff_u * sigma_lambda;
    out.gtau -= dm * f_den / (big_f_den * root_u);
    return out;
}

// Unconstrained optimizer chart: mu free, Sigma through its Cholesky factor
// with log diagonal, lambda free, tau free or pinned.
struct Chart {
    int n = 0;
    bool tau_free = true;
    double tau_value = 0.0;  // used when pinned
    GeneratorKind kind;

    int tri_count() const { return n * (n + 1) / 2; }
    int size() const { return 2 * n + tri_count() + (tau_free ? 1 : 0); }

    Eigen::VectorXd pack(const Theta& theta) const {
        const SigmaFactor fac = SigmaFactor::make(theta.sigma);
        const Eigen::MatrixXd chol = fac.lower();
        Eigen::VectorXd x(size());
        int k = 0;
        for (int i = 0; i < n; ++i) x[k++] = theta.mu[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                x[k++] = (i == j) ? std::log(chol(i, i)) : chol(i, j);
        for (int i = 0; i < n; ++i) x[k++] = theta.lambda[i];
        if (tau_free) x[k++] = theta.tau;
        return x;
    }

    Eigen::MatrixXd unpack_chol(const Eigen::VectorXd& x) const {
        Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(n, n);
        int k = n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                chol(i, j) = (i == j) ? std::exp(x[k++]) : x[k++];
        return chol;
    }

    Theta unpack(const Eigen::VectorXd& x) const {
        Theta theta;
        theta.kind = kind;
        theta.mu = x.segment(0, n);
        const Eigen::MatrixXd chol = unpack_chol(x);
        theta.sigma = chol * chol.transpose();
        theta.lambda = x.segment(n + tri_count(), n);
        theta.tau = tau_free ? x[size() - 1] : tau_value;
        return theta;
    }

    Eigen::VectorXd gradient(const ModelGrad& g, const Eigen::MatrixXd& chol) const {
        const Eigen::MatrixXd gl = 2.0 * g.gsigma * chol;
        Eigen::VectorXd out(size());
        int k = 0;
        for (int i = 0; i < n; ++i) out[k++] = g.gmu[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                out[k++] = (i == j) ? gl(i, i) * chol(i, i) : gl(i, j);
        for (int i = 0; i < n; ++i) out[k++] = g.glambda[i];
        if (tau_free) out[k++] = g.gtau;
        return out;
    }
};

// Negated latent log-likelihood over the chart (minimization form). Any
// failure inside the model evaluation reads as +inf.
struct Objective {
    const Eigen::MatrixXd& yg;
    const Chart& chart;

    double eval(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
        if (!x.allFinite()) return kInf;
        try {
            const Theta theta = chart.unpack(x);
            if (!theta.sigma.allFinite()) return kInf;
            const ModelGrad g = model_gradient(yg, theta);
            if (!std::isfinite(g.loglik)) return kInf;
            if (grad) {
                *grad = -chart.gradient(g, chart.unpack_chol(x));
                if (!grad->allFinite()) return kInf;
            }
            return -g.loglik;
        } catch (const std::exception&) {
            return kInf;
        }
    }
};

struct SimplexResult {
    Eigen::VectorXd x;
    double fval = kInf;
    int evaluations = 0;
};

// Plain Nelder-Mead rescue used when line searches stall. Budgeted, keeps the
// best vertex.
SimplexResult nelder_mead(const Objective& obj, const Eigen::VectorXd& x0,
                          double f0) {
    const int dim = static_cast<int>(x0.size());
    const int budget = 250 * dim + 250;
    int evals = 0;

    std::vector<Eigen::VectorXd> pts(dim + 1, x0);
    std::vector<double> fv(dim + 1, f0);
    for (int i = 0; i < dim; ++i) {
        pts[i + 1][i] += 0.05 * std::fmax(1.0, std::fabs(x0[i]));
        fv[i + 1] = obj.eval(pts[i + 1], nullptr);
        ++evals;
    }

    std::vector<int> order(dim + 1);
    while (evals < budget) {
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&fv](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], worst = order[dim], second = order[dim - 1];
        if (std::isfinite(fv[best]) &&
            std::fabs(fv[worst] - fv[best]) < 1e-10 * (1.0 + std::fabs(fv[best])))
            break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i <= dim; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
        const double f_refl = obj.eval(refl, nullptr);
        ++evals;
        if (f_refl < fv[best]) {
            const Eigen::VectorXd expand = centroid + 2.0 * (centroid - pts[worst]);
            const double f_exp = obj.eval(expand, nullptr);
            ++evals;
            if (f_exp < f_refl) {
                pts[worst] = expand;
                fv[worst] = f_exp;
            } else {
                pts[worst] = refl;
                fv[worst] = f_refl;
            }
        } else if (f_refl < fv[second]) {
            pts[worst] = refl;
            fv[worst] = f_refl;
        } else {
            const Eigen::VectorXd contr = centroid + 0.5 * (pts[worst] - centroid);
            const double f_con = obj.eval(contr, nullptr);
            ++evals;
            if (f_con < fv[worst]) {
                pts[worst] = contr;
                fv[worst] = f_con;
            } else {
                for (int i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    fv[i] = obj.eval(pts[i], nullptr);
                    ++evals;
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (fv[i] < fv[best]) best = i;
    return {pts[best], fv[best], evals};
}

struct OptResult {
    Eigen::VectorXd x;
    double fval = kInf;
    bool converged = false;
    int iterations = 0;
};

// BFGS with Armijo backtracking on the negated log-likelihood; falls back to
// a simplex pass after three consecutive failed line searches.
OptResult bfgs_minimize(const Objective& obj, Eigen::VectorXd x,
                        const FitOptions& opts) {
    const int dim = static_cast<int>(x.size());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);

    Eigen::VectorXd g(dim);
    double f = obj.eval(x, &g);
    if (!std::isfinite(f))
        throw numeric_error("fit: log-likelihood not finite at the starting point");

    Eigen::MatrixXd hinv = eye;
    int failed_searches = 0;
    OptResult res;
    res.iterations = 0;

    // The objective is a sum over rows, so both f and its gradient grow
    // linearly with the sample size while the attainable decrease per step is
    // capped by the rounding noise of f. An absolute gradient test would then
    // be unreachable on large samples; scale it by max(1, |f|) instead.
    const auto stationary = [&opts](const Eigen::VectorXd& grad, double fval) {
        return grad.cwiseAbs().maxCoeff() <=
               opts.gradient_tolerance * std::fmax(1.0, std::fabs(fval));
    };

    while (res.iterations < opts.max_iter) {
        if (stationary(g, f)) {
            res.converged = true;
            break;
        }
        ++res.iterations;

        Eigen::VectorXd p = -(hinv * g);
        double slope = p.dot(g);
        if (!(slope < 0.0) || !p.allFinite()) {
            hinv = eye;
            p = -g;
            slope = p.dot(g);
        }

        double t = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new, g_new(dim);
        double f_new = kInf;
        for (int bt = 0; bt < 50; ++bt) {
            x_new = x + t * p;
            f_new = obj.eval(x_new, &g_new);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }

        if (!accepted) {
            if (++failed_searches >= 3) {
                const SimplexResult sr = nelder_mead(obj, x, f);
                if (sr.fval < f - 1e-12) {
                    x = sr.x;
                    f = obj.eval(x, &g);
                    hinv = eye;
                    failed_searches = 0;
                    continue;
                }
                break;
            }
            hinv = eye;
            continue;
        }
        failed_searches = 0;

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd yv = g_new - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd left = eye - rho * (s * yv.transpose());
            hinv = left * hinv * left.transpose() + rho * (s * s.transpose());
        }

        const double step = s.cwiseAbs().maxCoeff();
        x = x_new;
        f = f_new;
        g = g_new;
        if (step <= opts.step_tolerance) break;
    }

    if (!res.converged) res.converged = stationary(g, f);
    res.x = x;
    res.fval = f;
    return res;
}

Theta moment_start(const Eigen::MatrixXd& yg, const GeneratorKind& kind,
                   double tau0) {
    const Eigen::Index m = yg.rows();
    const int n = static_cast<int>(yg.cols());
    Theta theta;
    theta.kind = kind;
    theta.mu = yg.colwise().mean().transpose();
    const Eigen::MatrixXd centered = yg.rowwise() - theta.mu.transpose();
    theta.sigma = (centered.adjoint() * centered) / static_cast<double>(m - 1);
    // Guard against degenerate columns; a ridge keeps the start factorizable.
    double ridge = 1e-8 * std::fmax(1.0, theta.sigma.trace() / n);
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (Eigen::LLT<Eigen::MatrixXd>(theta.sigma).info() == Eigen::Success) break;
        theta.sigma += ridge * Eigen::MatrixXd::Identity(n, n);
        ridge *= 10.0;
    }
    theta.lambda = Eigen::VectorXd::Zero(n);
    theta.tau = tau0;
    return theta;
}

void check_options(const FitOptions& opts) {
    if (opts.max_iter < 1) throw argument_error("fit: max_iter must be >= 1");
    if (!(opts.gradient_tolerance > 0.0))
        throw argument_error("fit: gradient_tolerance must be positive");
    if (!(opts.step_tolerance > 0.0))
        throw argument_error("fit: step_tolerance must be positive");
}

int rho_count(int n) { return n * (n - 1) / 2; }

Eigen::VectorXd user_pack(const Theta& theta, bool tau_free) {
    const int n = theta.dim();
    Eigen::VectorXd v(2 * n + rho_count(n) + n + (tau_free ? 1 : 0));
    int k = 0;
    for (int i = 0; i < n; ++i) v[k++] = theta.mu[i];
    for (int i = 0; i < n; ++i) v[k++] = std::sqrt(theta.sigma(i, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            v[k++] = theta.sigma(i, j) /
                     std::sqrt(theta.sigma(i, i) * theta.sigma(j, j));
    for (int i = 0; i < n; ++i) v[k++] = theta.lambda[i];
    if (tau_free) v[k++] = theta.tau;
    return v;
}

Theta user_unpack(const Eigen::VectorXd& v, int n, bool tau_free,
                  double tau_value, const GeneratorKind& kind) {
    Theta theta;
    theta.kind = kind;
    theta.mu = v.segment(0, n);
    Eigen::VectorXd s = v.segment(n, n);
    for (int i = 0; i < n; ++i)
        if (!(s[i] > 0.0))
            throw numeric_error("standard_errors: scale left the positive cone");
    theta.sigma.resize(n, n);
    int k = 2 * n;
    for (int i = 0; i < n; ++i) theta.sigma(i, i) = s[i] * s[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            theta.sigma(i, j) = v[k] * s[i] * s[j];
            theta.sigma(j, i) = theta.sigma(i, j);
            ++k;
        }
    theta.lambda = v.segment(k, n);
    theta.tau = tau_free ? v[v.size() - 1] : tau_value;
    return theta;
}

Eigen::VectorXd user_gradient(const Eigen::MatrixXd& yg, const Theta& theta,
                              bool tau_free) {
    const int n = theta.dim();
    const ModelGrad g = model_gradient(yg, theta);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = std::sqrt(theta.sigma(i, i));

    Eigen::VectorXd v(2 * n + rho_count(n) + n + (tau_free ? 1 : 0));
    int k = 0;
    for (int i = 0; i < n; ++i) v[k++] = g.gmu[i];
    for (int i = 0; i < n; ++i) {
        double acc = 2.0 * s[i] * g.gsigma(i, i);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double rho_ij = theta.sigma(i, j) / (s[i] * s[j]);
            acc += 2.0 * g.gsigma(i, j) * rho_ij * s[j];
        }
        v[k++] = acc;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            v[k++] = 2.0 * g.gsigma(i, j) * s[i] * s[j];
    for (int i = 0; i < n; ++i) v[k++] = g.glambda[i];
    if (tau_free) v[k++] = g.gtau;
    return v;
}

}  // namespace

double loglikelihood(const Eigen::MatrixXd& data, const Theta& theta,
                     const std::vector<LinkSpec>& links) {
    return egse_logpdf_batch(data, theta, links).sum();
}

Eigen::VectorXd loglik_gradient(const Eigen::MatrixXd& data, const Theta& theta,
                                const std::vector<LinkSpec>& links) {
    validate_theta(theta);
    const Eigen::MatrixXd yg = transform_data(data, links);
    const ModelGrad g = model_gradient(yg, theta);
    const int n = theta.dim();

    // Chain rule into the precision chart: dSigma = -Sigma dK Sigma.
    const Eigen::MatrixXd gk = -theta.sigma * g.gsigma * theta.sigma;
    Eigen::VectorXd out(n + n * (n + 1) / 2 + n + 1);
    int k = 0;
    for (int i = 0; i < n; ++i) out[k++] = g.gmu[i];
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            out[k++] = (i == j) ? gk(i, i) : 2.0 * gk(i, j);
    for (int i = 0; i < n; ++i) out[k++] = g.glambda[i];
    out[k++] = g.gtau;
    return out;
}

FitResult fit_mle(const Eigen::MatrixXd& data, const std::vector<LinkSpec>& links,
                  const GeneratorKind& kind, const FitOptions& opts) {
    check_options(opts);
    const Eigen::MatrixXd yg = transform_data(data, links);
    if (yg.rows() < 10)
        throw argument_error("fit: need at least 10 rows of data");

    const int n = static_cast<int>(yg.cols());
    Chart chart;
    chart.n = n;
    chart.tau_free = !opts.tau_fixed.has_value();
    chart.tau_value = opts.tau_fixed.value_or(0.0);
    chart.kind = kind;

    std::vector<Theta> starts;
    if (opts.start.has_value()) {
        Theta start = *opts.start;
        start.kind = kind;
        if (!chart.tau_free) start.tau = chart.tau_value;
        validate_theta(start);
        starts.push_back(start);
    } else {
        // lambda = 0 with mu at the column means is always a stationary point,
        // so a single symmetric start can strand the optimizer on that saddle.
        // Add skewed starts signed by the transformed-data skewness.
        const Theta base = moment_start(yg, kind, chart.tau_value);
        starts.push_back(base);
        Eigen::VectorXd signs(n);
        for (int c = 0; c < n; ++c) {
            const Eigen::ArrayXd centered =
                yg.col(c).array() - yg.col(c).mean();
            const double m3 = centered.cube().mean();
            signs[c] = (m3 < 0.0) ? -1.0 : 1.0;
        }
        for (const double scale : {0.5, -0.5}) {
            Theta skewed = base;
            skewed.lambda = scale * signs;
            starts.push_back(skewed);
        }
    }

    const Objective obj{yg, chart};
    const bool staged = chart.tau_free && !opts.start.has_value();
    OptResult opt;
    Theta theta_best;
    SeResult se_best;
    int rank_best = -1;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        Eigen::VectorXd x0 = chart.pack(starts[s]);
        int warmup_iters = 0;
        if (staged) {
            // With tau free the default starts are fragile: at lambda = 0 the
            // skew factor cancels and tau is a perfectly flat direction, while
            // skewed starts tend to slide onto the escape ridge (tau -> -inf
            // with lambda and mu compensating). Fitting with tau pinned first
            // removes both pathologies, then tau is released from an interior
            // point that already has the right skew orientation.
            Chart pinned = chart;
            pinned.tau_free = false;
            pinned.tau_value = starts[s].tau;
            const Objective pre{yg, pinned};
            OptResult held = bfgs_minimize(pre, pinned.pack(starts[s]), opts);
            warmup_iters = held.iterations;
            x0 = chart.pack(pinned.unpack(held.x));
        }
        OptResult attempt = bfgs_minimize(obj, x0, opts);
        attempt.iterations += warmup_iters;

        // The likelihood also has escape ridges: tau -> -inf with lambda and
        // mu compensating, and |lambda| -> inf once a hyperplane through mu
        // separates the transformed data (worth up to log 2 per row). Along
        // either ridge the gradient decays to zero without a maximum ever
        // being attained, so a stationarity test alone can bless a ridge
        // point. A genuine interior maximum is the only place the observed
        // information is positive definite, so rank candidates by converged,
        // then curvature, then objective value.
        const Theta theta = chart.unpack(attempt.x);
        const SeResult se =
            standard_errors(data, theta, links, chart.tau_free);
        const int rank =
            attempt.converged ? (se.valid ? 2 : 1) : 0;
        const bool better =
            rank > rank_best || (rank == rank_best && attempt.fval < opt.fval);
        if (better) {
            rank_best = rank;
            opt = std::move(attempt);
            theta_best = theta;
            se_best = se;
        }
    }

    FitResult res;
    res.theta_hat = theta_best;
    res.psi_hat = to_identifiable(res.theta_hat);
    res.loglik = loglikelihood(data, res.theta_hat, links);
    res.converged = opt.converged;
    res.iterations = opt.iterations;
    res.std_errors = se_best.values;
    res.se_valid = se_best.valid;
    res.se_note = se_best.note;
    return res;
}

FitResult profile_nu(const Eigen::MatrixXd& data, const std::vector<LinkSpec>& links,
                     const FitOptions& opts) {
    check_options(opts);
    std::vector<int> grid = opts.nu_grid;
    if (grid.empty()) {
        grid.resize(50);
        for (int i = 0; i < 50; ++i) grid[i] = i + 1;
    }
    for (int nu : grid)
        if (nu < 1) throw argument_error("profile_nu: grid entries must be >= 1");

    FitResult best;
    best.loglik = -kInf;
    std::optional<Theta> warm = opts.start;
    std::vector<std::pair<double, double>> trace;
    trace.reserve(grid.size());

    for (int nu : grid) {
        const GeneratorKind kind = GeneratorKind::student_t(nu);
        FitOptions cell = opts;
        cell.nu_grid.clear();

        cell.start.reset();
        FitResult pick = fit_mle(data, links, kind, cell);
        if (warm.has_value()) {
            // Warm start from the previous grid point often lands on a better
            // optimum when the profile is flat; keep whichever wins.
            cell.start = warm;
            const FitResult warmed = fit_mle(data, links, kind, cell);
            if (warmed.loglik > pick.loglik) pick = warmed;
        }

        trace.emplace_back(static_cast<double>(nu), pick.loglik);
        warm = pick.theta_hat;
        if (pick.loglik > best.loglik) best = pick;
    }
    best.nu_profile = std::move(trace);
    return best;
}

SeResult standard_errors(const Eigen::MatrixXd& data, const Theta& theta_hat,
                         const std::vector<LinkSpec>& links, bool tau_free) {
    SeResult out;
    try {
        validate_theta(theta_hat);
        const Eigen::MatrixXd yg = transform_data(data, links);
        const int n = theta_hat.dim();
        const Eigen::VectorXd v0 = user_pack(theta_hat, tau_free);
        const int dim = static_cast<int>(v0.size());

        Eigen::MatrixXd hess(dim, dim);
        for (int j = 0; j < dim; ++j) {
            const double h = 1e-5 * std::fmax(1.0, std::fabs(v0[j]));
            Eigen::VectorXd vp = v0, vm = v0;
            vp[j] += h;
            vm[j] -= h;
            const Eigen::VectorXd gp = user_gradient(
                yg, user_unpack(vp, n, tau_free, theta_hat.tau, theta_hat.kind),
                tau_free);
            const Eigen::VectorXd gm = user_gradient(
                yg, user_unpack(vm, n, tau_free, theta_hat.tau, theta_hat.kind),
                tau_free);
            hess.col(j) = (gp - gm) / (2.0 * h);
        }
        hess = 0.5 * (hess + hess.transpose()).eval();

        const Eigen::MatrixXd info = -hess;
        const Eigen::LLT<Eigen::MatrixXd> llt(info);
        if (llt.info() != Eigen::Success) {
            out.note = "observed information matrix is not positive definite";
            return out;
        }
        const Eigen::MatrixXd cov =
            llt.solve(Eigen::MatrixXd::Identity(dim, dim));
        out.values.resize(dim);
        for (int i = 0; i < dim; ++i) {
            if (!(cov(i, i) > 0.0)) {
                out.values.resize(0);
                out.note = "nonpositive variance on the covariance diagonal";
                return out;
            }
            out.values[i] = std::sqrt(cov(i, i));
        }
        out.valid = true;
    } catch (const std::exception& e) {
        out.values.resize(0);
        out.valid = false;
        out.note = e.what();
    }
    return out;
}

}  // namespace egse
