// K-nearest-neighbor classification over change-feature vectors with the two
// evaluation protocols: stratified k-fold CV and leave-one-out CV. Macro
// metrics are pooled over out-of-fold predictions.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bchange::classify {

struct LabeledPoint {
    std::vector<double> features;
    bool positive = false;
};

using Dataset = std::vector<LabeledPoint>;

// Fatal evaluation-configuration problems (class-starved folds, single-class
// data); mapped to exit code 2 by the CLI.
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Cosine distance between feature vectors; asserts nonzero norms (histogram
// normalization guarantees them).
double feature_cosine_distance(const std::vector<double>& a, const std::vector<double>& b);

struct KnnModel {
    Dataset training;
    int k = 1;
};

// Majority label among the k nearest training points. Distance ties at the
// k-th rank resolve by training-set insertion order; class-vote ties resolve
// to the label of the single nearest neighbor.
bool knn_predict(const KnnModel& model, const std::vector<double>& x);

struct Confusion {
    std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
    bool operator==(const Confusion&) const = default;
};

struct Metrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Macro-averaged metrics over the two classes; 0/0 is defined as 0.
Metrics macro_metrics(const Confusion& confusion);

enum class Protocol { stratified_kfold, loocv };

struct KMetrics {
    int k = 1;
    Metrics metrics;
    Confusion confusion;
};

struct EvalReport {
    Protocol protocol = Protocol::stratified_kfold;
    std::uint64_t seed = 0;
    int folds = 0;  // 0 for LOOCV
    std::vector<KMetrics> per_k;
    int best_k = 1;  // highest macro-F1, smallest k on ties
    std::size_t n_accounts = 0;
    std::size_t n_predictions = 0;

    const KMetrics& at_best() const;
};

struct EvalOptions {
    int k_min = 1;
    int k_max = 10;
    bool parallel = true;  // serial path kept as the reference implementation
};

// Class proportions are preserved per fold within one account. Throws
// EvalError when a class has fewer members than folds or a class is absent.
EvalReport stratified_kfold(const Dataset& data, int folds, std::uint64_t seed,
                            const EvalOptions& opts = {});

// One held-out prediction per account; requires >= 3 accounts, both classes.
EvalReport loocv(const Dataset& data, const EvalOptions& opts = {});

const char* to_string(Protocol p);

}  // namespace bchange::classify
