#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fixsearch {

enum class CovarianceType { Full, Diagonal };

CovarianceType covariance_type_from_string(const std::string& s);
std::string to_string(CovarianceType t);

struct GmmConfig {
    int k = 1;
    int max_iters = 200;
    double tol = 1e-6; // relative log-likelihood change
    CovarianceType covariance = CovarianceType::Full;
    double reg = 1e-6; // added to covariance diagonals each M-step
    uint64_t seed = 0;
    bool standardize = true;

    void validate_or_throw() const;
};

/// Mixture fitted by EM. When standardize was on, means and covariances live
/// in the standardized feature space and `scaler_*` hold the per-dimension
/// shift/scale that predict() re-applies; mean_in_input_space() maps back.
struct GmmModel {
    int k = 0;
    int dim = 0;
    std::vector<double> weights;                  // K, simplex
    std::vector<std::vector<double>> means;       // K x D
    std::vector<std::vector<double>> covariances; // K x (D*D), row-major symmetric
    bool standardized = false;
    std::vector<double> scaler_shift, scaler_scale; // D
    double final_loglik = 0.0;
    int iterations_run = 0;
    std::vector<double> loglik_trace; // one entry per EM iteration
    std::vector<std::string> warnings;

    std::vector<double> mean_in_input_space(int component) const;
};

/// Hard labels plus the full responsibility matrix (rows sum to 1).
struct ClusterLabels {
    int k = 0;
    std::vector<int> labels;              // N, argmax with ties to lowest index
    std::vector<double> responsibilities; // N x K row-major

    double responsibility(size_t i, int j) const {
        return responsibilities[i * static_cast<size_t>(k) + j];
    }
    double max_responsibility(size_t i) const { return responsibility(i, labels[i]); }
};

/// EM fit: optional per-dimension standardization, value-keyed k-means++
/// seeding (shuffling the samples does not change the chosen centers), then
/// alternating E/M steps until the relative log-likelihood change drops
/// below tol or max_iters is hit. Deterministic for fixed (samples, cfg).
GmmModel fit(const std::vector<std::vector<double>>& samples, const GmmConfig& cfg);

/// Responsibilities and argmax labels for new samples under the model.
ClusterLabels predict(const GmmModel& model, const std::vector<std::vector<double>>& samples);

} // namespace fixsearch
