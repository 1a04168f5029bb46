#include "fixsearch/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "fixsearch/errors.hpp"
#include "fixsearch/rng.hpp"

namespace fixsearch {

namespace {

constexpr double kLog2Pi = 1.8378770664093453; // log(2 pi)

uint64_t sample_value_hash(const std::vector<double>& row) {
    return fnv1a64(row.data(), row.size() * sizeof(double));
}

// Lower-triangular Cholesky of a D x D symmetric matrix (row-major).
// Returns false if the matrix is not positive-definite.
bool cholesky(const std::vector<double>& a, int d, std::vector<double>& l) {
    l.assign(static_cast<size_t>(d) * d, 0.0);
    for (int j = 0; j < d; ++j) {
        double diag = a[static_cast<size_t>(j) * d + j];
        for (int t = 0; t < j; ++t) diag -= l[static_cast<size_t>(j) * d + t] * l[static_cast<size_t>(j) * d + t];
        if (!(diag > 0.0)) return false;
        const double root = std::sqrt(diag);
        l[static_cast<size_t>(j) * d + j] = root;
        for (int i = j + 1; i < d; ++i) {
            double s = a[static_cast<size_t>(i) * d + j];
            for (int t = 0; t < j; ++t) s -= l[static_cast<size_t>(i) * d + t] * l[static_cast<size_t>(j) * d + t];
            l[static_cast<size_t>(i) * d + j] = s / root;
        }
    }
    return true;
}

// Per-component Gaussian evaluator: caches the Cholesky factor and log-det.
struct ComponentDensity {
    int dim = 0;
    std::vector<double> chol;
    double logdet = 0.0;

    // Factors cov, escalating diagonal jitter until positive-definite.
    void prepare(const std::vector<double>& cov, int d, double reg,
                 std::vector<std::string>& warnings) {
        dim = d;
        std::vector<double> work = cov;
        double jitter = std::max(reg, 1e-10);
        for (int attempt = 0; attempt < 60; ++attempt) {
            if (cholesky(work, d, chol)) {
                logdet = 0.0;
                for (int i = 0; i < d; ++i) logdet += 2.0 * std::log(chol[static_cast<size_t>(i) * d + i]);
                return;
            }
            for (int i = 0; i < d; ++i) work[static_cast<size_t>(i) * d + i] += jitter;
            if (attempt == 0) warnings.push_back("covariance required extra jitter to stay positive-definite");
            jitter *= 10.0;
        }
        throw DataError("covariance matrix is not positive-definite even after regularization");
    }

    double log_pdf(const double* x, const double* mu) const {
        double quad = 0.0;
        // Forward solve L z = (x - mu); quad = |z|^2.
        double z[16];
        for (int i = 0; i < dim; ++i) {
            double s = x[i] - mu[i];
            for (int t = 0; t < i; ++t) s -= chol[static_cast<size_t>(i) * dim + t] * z[t];
            z[i] = s / chol[static_cast<size_t>(i) * dim + i];
            quad += z[i] * z[i];
        }
        return -0.5 * (dim * kLog2Pi + logdet + quad);
    }
};

struct Standardizer {
    std::vector<double> shift, scale;

    std::vector<double> apply(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (size_t d = 0; d < row.size(); ++d) out[d] = (row[d] - shift[d]) / scale[d];
        return out;
    }
};

Standardizer fit_standardizer(const std::vector<std::vector<double>>& samples, int dim,
                              std::vector<std::string>& warnings) {
    const size_t n = samples.size();
    Standardizer s;
    s.shift.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    for (const auto& row : samples)
        for (int d = 0; d < dim; ++d) s.shift[d] += row[d];
    for (int d = 0; d < dim; ++d) s.shift[d] /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (const auto& row : samples)
        for (int d = 0; d < dim; ++d) {
            const double c = row[d] - s.shift[d];
            var[d] += c * c;
        }
    for (int d = 0; d < dim; ++d) {
        var[d] /= static_cast<double>(n);
        if (var[d] > 0.0) {
            s.scale[d] = std::sqrt(var[d]);
        } else {
            s.scale[d] = 1.0;
            warnings.push_back("zero-variance dimension " + std::to_string(d) + ": scale set to 1");
        }
    }
    return s;
}

// k-means++ seeding with counter-based randomness keyed to each sample's
// value hash, so the chosen centers do not depend on sample order. Selection
// for rounds > 0 is one weighted draw (key = log(u)/weight, take the max).
std::vector<std::vector<double>> kmeanspp_centers(const std::vector<std::vector<double>>& x,
                                                  int k, uint64_t seed) {
    const size_t n = x.size();
    const int dim = static_cast<int>(x.front().size());
    std::vector<uint64_t> hashes(n);
    for (size_t i = 0; i < n; ++i) hashes[i] = sample_value_hash(x[i]);

    std::vector<std::vector<double>> centers;
    centers.reserve(k);

    size_t first = 0;
    {
        double best_u = std::numeric_limits<double>::infinity();
        uint64_t best_h = 0;
        for (size_t i = 0; i < n; ++i) {
            const double u = counter_u01(seed, 0, hashes[i]);
            if (u < best_u || (u == best_u && hashes[i] < best_h)) {
                best_u = u;
                best_h = hashes[i];
                first = i;
            }
        }
    }
    centers.push_back(x[first]);

    std::vector<double> dist2(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double c = x[i][d] - centers[0][d];
            s += c * c;
        }
        dist2[i] = s;
    }

    for (int round = 1; round < k; ++round) {
        double best_key = -std::numeric_limits<double>::infinity();
        uint64_t best_h = std::numeric_limits<uint64_t>::max();
        size_t pick = n; // n = nothing picked yet
        for (size_t i = 0; i < n; ++i) {
            if (dist2[i] <= 0.0) continue;
            const double u = std::max(counter_u01(seed, static_cast<uint64_t>(round), hashes[i]), 1e-300);
            const double key = std::log(u) / dist2[i];
            if (key > best_key || (key == best_key && hashes[i] < best_h)) {
                best_key = key;
                best_h = hashes[i];
                pick = i;
            }
        }
        if (pick == n) {
            // Fewer distinct values than k: fall back to the lowest-hash sample.
            size_t fallback = 0;
            for (size_t i = 1; i < n; ++i)
                if (hashes[i] < hashes[fallback]) fallback = i;
            pick = fallback;
        }
        centers.push_back(x[pick]);
        for (size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) {
                const double c = x[i][d] - centers.back()[d];
                s += c * c;
            }
            dist2[i] = std::min(dist2[i], s);
        }
    }
    return centers;
}

} // namespace

CovarianceType covariance_type_from_string(const std::string& s) {
    if (s == "full") return CovarianceType::Full;
    if (s == "diagonal") return CovarianceType::Diagonal;
    throw ValidationError("covariance must be 'full' or 'diagonal'");
}

std::string to_string(CovarianceType t) {
    return t == CovarianceType::Full ? "full" : "diagonal";
}

void GmmConfig::validate_or_throw() const {
    if (k < 1) throw ValidationError("GMM requires k >= 1");
    if (max_iters < 1) throw ValidationError("GMM requires max_iters >= 1");
    if (!(tol > 0.0)) throw ValidationError("GMM requires tol > 0");
    if (reg < 0.0) throw ValidationError("GMM requires reg >= 0");
}

std::vector<double> GmmModel::mean_in_input_space(int component) const {
    std::vector<double> out = means[component];
    if (standardized)
        for (int d = 0; d < dim; ++d) out[d] = out[d] * scaler_scale[d] + scaler_shift[d];
    return out;
}

GmmModel fit(const std::vector<std::vector<double>>& samples, const GmmConfig& cfg) {
    cfg.validate_or_throw();
    const size_t n = samples.size();
    if (n < static_cast<size_t>(cfg.k))
        throw ValidationError("GMM fit requires at least k samples (N >= k)");
    const int dim = static_cast<int>(samples.front().size());
    if (dim < 1) throw ValidationError("GMM fit requires D >= 1");
    if (dim > 16) throw ValidationError("GMM fit supports at most 16 dimensions");
    for (const auto& row : samples) {
        if (static_cast<int>(row.size()) != dim)
            throw ValidationError("GMM samples must share one dimensionality");
        for (double v : row)
            if (!std::isfinite(v)) throw ValidationError("GMM samples must be finite");
    }

    GmmModel model;
    model.k = cfg.k;
    model.dim = dim;
    model.standardized = cfg.standardize;
    model.scaler_shift.assign(dim, 0.0);
    model.scaler_scale.assign(dim, 1.0);

    std::vector<std::vector<double>> x = samples;
    if (cfg.standardize) {
        const Standardizer s = fit_standardizer(samples, dim, model.warnings);
        model.scaler_shift = s.shift;
        model.scaler_scale = s.scale;
        for (auto& row : x) row = s.apply(row);
    }

    // Initial parameters: k-means++ centers, per-dimension global variance on
    // the diagonal, uniform weights.
    model.means = kmeanspp_centers(x, cfg.k, cfg.seed);
    std::vector<double> global_var(dim, 0.0), global_mean(dim, 0.0);
    for (const auto& row : x)
        for (int d = 0; d < dim; ++d) global_mean[d] += row[d];
    for (int d = 0; d < dim; ++d) global_mean[d] /= static_cast<double>(n);
    for (const auto& row : x)
        for (int d = 0; d < dim; ++d) {
            const double c = row[d] - global_mean[d];
            global_var[d] += c * c;
        }
    for (int d = 0; d < dim; ++d)
        global_var[d] = global_var[d] / static_cast<double>(n) + std::max(cfg.reg, 1e-12);

    model.weights.assign(cfg.k, 1.0 / cfg.k);
    model.covariances.assign(cfg.k, std::vector<double>(static_cast<size_t>(dim) * dim, 0.0));
    for (int j = 0; j < cfg.k; ++j)
        for (int d = 0; d < dim; ++d)
            model.covariances[j][static_cast<size_t>(d) * dim + d] = global_var[d];

    std::vector<ComponentDensity> densities(cfg.k);
    std::vector<double> resp(n * static_cast<size_t>(cfg.k), 0.0);
    std::vector<double> sample_ll(n, 0.0);
    double prev_ll = std::numeric_limits<double>::quiet_NaN();

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        // E-step.
        for (int j = 0; j < cfg.k; ++j)
            densities[j].prepare(model.covariances[j], dim, cfg.reg, model.warnings);
        double ll = 0.0;
        std::vector<double> logp(cfg.k);
        for (size_t i = 0; i < n; ++i) {
            double m = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < cfg.k; ++j) {
                logp[j] = std::log(model.weights[j]) +
                          densities[j].log_pdf(x[i].data(), model.means[j].data());
                m = std::max(m, logp[j]);
            }
            double denom = 0.0;
            for (int j = 0; j < cfg.k; ++j) denom += std::exp(logp[j] - m);
            for (int j = 0; j < cfg.k; ++j)
                resp[i * cfg.k + j] = std::exp(logp[j] - m) / denom;
            sample_ll[i] = m + std::log(denom);
            ll += sample_ll[i];
        }
        model.loglik_trace.push_back(ll);
        model.final_loglik = ll;
        model.iterations_run = iter;

        if (iter > 1) {
            const double rel = std::abs(ll - prev_ll) / std::max(std::abs(prev_ll), 1e-12);
            if (rel < cfg.tol) break;
        }
        prev_ll = ll;

        // M-step, fixed summation order (sample index ascending).
        for (int j = 0; j < cfg.k; ++j) {
            double nj = 0.0;
            for (size_t i = 0; i < n; ++i) nj += resp[i * cfg.k + j];
            if (!(nj > 1e-12)) {
                // Responsibilities underflowed to zero: leave the parameters
                // alone and let the collapse pass re-seed this component.
                model.weights[j] = 0.0;
                continue;
            }
            std::vector<double> mu(dim, 0.0);
            for (size_t i = 0; i < n; ++i)
                for (int d = 0; d < dim; ++d) mu[d] += resp[i * cfg.k + j] * x[i][d];
            for (int d = 0; d < dim; ++d) mu[d] /= nj;

            std::vector<double>& cov = model.covariances[j];
            std::fill(cov.begin(), cov.end(), 0.0);
            if (cfg.covariance == CovarianceType::Full) {
                for (size_t i = 0; i < n; ++i) {
                    const double r = resp[i * cfg.k + j];
                    for (int a = 0; a < dim; ++a) {
                        const double ca = x[i][a] - mu[a];
                        for (int b = a; b < dim; ++b)
                            cov[static_cast<size_t>(a) * dim + b] += r * ca * (x[i][b] - mu[b]);
                    }
                }
                for (int a = 0; a < dim; ++a)
                    for (int b = a; b < dim; ++b) {
                        cov[static_cast<size_t>(a) * dim + b] /= nj;
                        cov[static_cast<size_t>(b) * dim + a] = cov[static_cast<size_t>(a) * dim + b];
                    }
            } else {
                for (size_t i = 0; i < n; ++i) {
                    const double r = resp[i * cfg.k + j];
                    for (int d = 0; d < dim; ++d) {
                        const double c = x[i][d] - mu[d];
                        cov[static_cast<size_t>(d) * dim + d] += r * c * c;
                    }
                }
                for (int d = 0; d < dim; ++d) cov[static_cast<size_t>(d) * dim + d] /= nj;
            }
            for (int d = 0; d < dim; ++d) cov[static_cast<size_t>(d) * dim + d] += cfg.reg;

            model.means[j] = std::move(mu);
            model.weights[j] = nj / static_cast<double>(n);
        }

        // Collapsed components are re-seeded at the least-explained sample.
        bool reseeded = false;
        for (int j = 0; j < cfg.k; ++j) {
            if (model.weights[j] >= 1e-8) continue;
            size_t worst = 0;
            for (size_t i = 1; i < n; ++i)
                if (sample_ll[i] < sample_ll[worst]) worst = i;
            model.means[j] = x[worst];
            std::fill(model.covariances[j].begin(), model.covariances[j].end(), 0.0);
            for (int d = 0; d < dim; ++d)
                model.covariances[j][static_cast<size_t>(d) * dim + d] = global_var[d];
            model.weights[j] = 1.0 / static_cast<double>(n);
            model.warnings.push_back("component " + std::to_string(j) +
                                     " collapsed; re-seeded at least-explained sample");
            reseeded = true;
        }
        if (reseeded) {
            double wsum = 0.0;
            for (double w : model.weights) wsum += w;
            for (double& w : model.weights) w /= wsum;
        }
    }
    return model;
}

ClusterLabels predict(const GmmModel& model, const std::vector<std::vector<double>>& samples) {
    if (model.k < 1) throw ValidationError("predict requires a fitted model");
    const size_t n = samples.size();
    ClusterLabels out;
    out.k = model.k;
    out.labels.resize(n);
    out.responsibilities.resize(n * static_cast<size_t>(model.k));

    std::vector<std::string> scratch_warnings;
    std::vector<ComponentDensity> densities(model.k);
    for (int j = 0; j < model.k; ++j)
        densities[j].prepare(model.covariances[j], model.dim, 0.0, scratch_warnings);

    for (size_t i = 0; i < n; ++i) {
        const auto& row = samples[i];
        if (static_cast<int>(row.size()) != model.dim)
            throw ValidationError("predict sample dimension mismatch");
        std::vector<double> z(model.dim);
        for (int d = 0; d < model.dim; ++d) {
            if (!std::isfinite(row[d])) throw ValidationError("predict samples must be finite");
            z[d] = model.standardized ? (row[d] - model.scaler_shift[d]) / model.scaler_scale[d]
                                      : row[d];
        }
        std::vector<double> logp(model.k);
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < model.k; ++j) {
            logp[j] = std::log(model.weights[j]) + densities[j].log_pdf(z.data(), model.means[j].data());
            m = std::max(m, logp[j]);
        }
        double denom = 0.0;
        for (int j = 0; j < model.k; ++j) denom += std::exp(logp[j] - m);
        int best = 0;
        for (int j = 0; j < model.k; ++j) {
            const double r = std::exp(logp[j] - m) / denom;
            out.responsibilities[i * model.k + j] = r;
            if (r > out.responsibilities[i * model.k + best]) best = j;
        }
        out.labels[i] = best;
    }
    return out;
}

} // namespace fixsearch
