#include "bchange/classify.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "bchange/rng.hpp"

namespace bchange::classify {

namespace {

// Ranked (distance, training position) list for one test point, smallest
// first; position order breaks distance ties.
std::vector<std::pair<double, std::size_t>> rank_neighbors(
    const Dataset& data, const std::vector<std::size_t>& training, const std::vector<double>& x,
    std::size_t keep) {
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(training.size());
    for (std::size_t pos = 0; pos < training.size(); ++pos)
        ranked.emplace_back(feature_cosine_distance(data[training[pos]].features, x), pos);
    keep = std::min(keep, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                      ranked.end());
    ranked.resize(keep);
    return ranked;
}

bool vote(const Dataset& data, const std::vector<std::size_t>& training,
          const std::vector<std::pair<double, std::size_t>>& ranked, int k) {
    int positives = 0;
    for (int i = 0; i < k; ++i)
        if (data[training[ranked[static_cast<std::size_t>(i)].second]].positive) ++positives;
    if (2 * positives == k) return data[training[ranked[0].second]].positive;
    return 2 * positives > k;
}

struct FoldPlan {
    std::vector<std::size_t> training;  // data indices, insertion order
    std::vector<std::size_t> test;
};

// Out-of-fold predictions for every k in [k_min, k_max], pooled per k.
EvalReport evaluate_folds(const Dataset& data, const std::vector<FoldPlan>& folds,
                          const EvalOptions& opts) {
    std::size_t min_train = data.size();
    for (const auto& f : folds) min_train = std::min(min_train, f.training.size());
    const int k_max = std::min<int>(opts.k_max, static_cast<int>(min_train));
    const int k_min = std::max(1, opts.k_min);
    if (k_max < k_min) throw EvalError("training folds too small for the requested k range");

    EvalReport report;
    report.n_accounts = data.size();
    report.per_k.resize(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k)
        report.per_k[static_cast<std::size_t>(k - k_min)].k = k;

    for (const auto& fold : folds) {
        const std::size_t n_test = fold.test.size();
        // One vote per (test point, k); slot-indexed so the reduction order
        // is fixed regardless of worker count.
        std::vector<std::uint8_t> votes(n_test * static_cast<std::size_t>(k_max - k_min + 1));

        const auto predict_one = [&](std::size_t t) {
            const auto ranked = rank_neighbors(data, fold.training, data[fold.test[t]].features,
                                               static_cast<std::size_t>(k_max));
            for (int k = k_min; k <= k_max; ++k)
                votes[t * static_cast<std::size_t>(k_max - k_min + 1) +
                      static_cast<std::size_t>(k - k_min)] =
                    vote(data, fold.training, ranked, k) ? 1 : 0;
        };

        if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::size_t t = 0; t < n_test; ++t) predict_one(t);
        } else {
            for (std::size_t t = 0; t < n_test; ++t) predict_one(t);
        }

        for (std::size_t t = 0; t < n_test; ++t) {
            const bool truth = data[fold.test[t]].positive;
            for (int k = k_min; k <= k_max; ++k) {
                const bool predicted =
                    votes[t * static_cast<std::size_t>(k_max - k_min + 1) +
                          static_cast<std::size_t>(k - k_min)] != 0;
                Confusion& c = report.per_k[static_cast<std::size_t>(k - k_min)].confusion;
                if (truth && predicted) ++c.tp;
                else if (truth && !predicted) ++c.fn;
                else if (!truth && predicted) ++c.fp;
                else ++c.tn;
            }
        }
        report.n_predictions += n_test;
    }

    double best_f1 = -1.0;
    for (auto& km : report.per_k) {
        km.metrics = macro_metrics(km.confusion);
        if (km.metrics.f1 > best_f1) {
            best_f1 = km.metrics.f1;
            report.best_k = km.k;
        }
    }
    return report;
}

void require_both_classes(const Dataset& data) {
    bool pos = false, neg = false;
    for (const auto& p : data) (p.positive ? pos : neg) = true;
    if (!pos || !neg) throw EvalError("both classes must be present");
}

}  // namespace

double feature_cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    assert(na > 0.0 && nb > 0.0);
    return 1.0 - dot / std::sqrt(na * nb);
}

bool knn_predict(const KnnModel& model, const std::vector<double>& x) {
    if (model.training.empty()) throw EvalError("empty training set");
    const int k = std::min<int>(model.k, static_cast<int>(model.training.size()));
    std::vector<std::size_t> all(model.training.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto ranked = rank_neighbors(model.training, all, x, static_cast<std::size_t>(k));
    return vote(model.training, all, ranked, k);
}

Metrics macro_metrics(const Confusion& c) {
    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    const auto f1_of = [](double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); };

    const double p_pos = ratio(c.tp, c.tp + c.fp);
    const double r_pos = ratio(c.tp, c.tp + c.fn);
    const double p_neg = ratio(c.tn, c.tn + c.fn);
    const double r_neg = ratio(c.tn, c.tn + c.fp);

    Metrics m;
    m.precision = (p_pos + p_neg) / 2;
    m.recall = (r_pos + r_neg) / 2;
    m.f1 = (f1_of(p_pos, r_pos) + f1_of(p_neg, r_neg)) / 2;
    return m;
}

const KMetrics& EvalReport::at_best() const {
    for (const auto& km : per_k)
        if (km.k == best_k) return km;
    throw std::logic_error("best_k missing from per_k table");
}

EvalReport stratified_kfold(const Dataset& data, int folds, std::uint64_t seed,
                            const EvalOptions& opts) {
    if (folds < 2) throw EvalError("need at least 2 folds");
    require_both_classes(data);

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < data.size(); ++i)
        (data[i].positive ? pos_idx : neg_idx).push_back(i);
    if (pos_idx.size() < static_cast<std::size_t>(folds) ||
        neg_idx.size() < static_cast<std::size_t>(folds))
        throw EvalError("a class has fewer members than folds");

    rng::Pcg32 gen(seed);
    gen.shuffle(pos_idx);
    gen.shuffle(neg_idx);

    // Round-robin dealing keeps per-class fold sizes within one.
    std::vector<int> fold_of(data.size());
    for (std::size_t i = 0; i < pos_idx.size(); ++i)
        fold_of[pos_idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    for (std::size_t i = 0; i < neg_idx.size(); ++i)
        fold_of[neg_idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));

    std::vector<FoldPlan> plans(static_cast<std::size_t>(folds));
    for (std::size_t i = 0; i < data.size(); ++i)
        for (int f = 0; f < folds; ++f)
            (fold_of[i] == f ? plans[static_cast<std::size_t>(f)].test
                             : plans[static_cast<std::size_t>(f)].training)
                .push_back(i);

    EvalReport report = evaluate_folds(data, plans, opts);
    report.protocol = Protocol::stratified_kfold;
    report.seed = seed;
    report.folds = folds;
    return report;
}

EvalReport loocv(const Dataset& data, const EvalOptions& opts) {
    if (data.size() < 3) throw EvalError("LOOCV needs at least 3 accounts");
    require_both_classes(data);

    std::vector<FoldPlan> plans(data.size());
    for (std::size_t held = 0; held < data.size(); ++held) {
        plans[held].test.push_back(held);
        plans[held].training.reserve(data.size() - 1);
        for (std::size_t i = 0; i < data.size(); ++i)
            if (i != held) plans[held].training.push_back(i);
    }

    EvalReport report = evaluate_folds(data, plans, opts);
    report.protocol = Protocol::loocv;
    report.folds = 0;
    return report;
}

const char* to_string(Protocol p) {
    return p == Protocol::stratified_kfold ? "stratified_kfold" : "loocv";
}

}  // namespace bchange::classify
