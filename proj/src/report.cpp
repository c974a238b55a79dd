#include "bchange/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bchange::report {

namespace {

using nlohmann::json;

std::vector<double> mean_of(const std::vector<const std::vector<double>*>& rows) {
    std::vector<double> mean(rows.front()->size(), 0.0);
    for (const auto* row : rows)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*row)[i];
    for (double& v : mean) v /= static_cast<double>(rows.size());
    return mean;
}

std::string format_metric(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << v;
    return os.str();
}

std::string segmentation_label(const segment::ChangeSetting& s) {
    if (s.segmentation == segment::Segmentation::sets_of_k)
        return "sets-of-" + std::to_string(s.k);
    return segment::to_string(s.segmentation);
}

json setting_to_json(const segment::ChangeSetting& s) {
    return json{{"segmentation", segment::to_string(s.segmentation)},
                {"k", s.k},
                {"pause_threshold", s.pause_threshold},
                {"selection", segment::to_string(s.selection)},
                {"distance", segment::to_string(s.distance)},
                {"count_pauses_in_k", s.count_pauses_in_k}};
}

segment::ChangeSetting setting_from_json(const json& j) {
    segment::ChangeSetting s;
    s.segmentation = *segment::parse_segmentation(j.at("segmentation").get<std::string>());
    s.k = j.at("k").get<int>();
    s.pause_threshold = j.at("pause_threshold").get<std::int64_t>();
    s.selection = *segment::parse_selection(j.at("selection").get<std::string>());
    s.distance = *segment::parse_distance(j.at("distance").get<std::string>());
    s.count_pauses_in_k = j.at("count_pauses_in_k").get<bool>();
    return s;
}

json eval_to_json(const classify::EvalReport& e) {
    json per_k = json::array();
    for (const auto& km : e.per_k) {
        per_k.push_back(json{{"k", km.k},
                             {"precision", km.metrics.precision},
                             {"recall", km.metrics.recall},
                             {"f1", km.metrics.f1},
                             {"tp", km.confusion.tp},
                             {"fn", km.confusion.fn},
                             {"fp", km.confusion.fp},
                             {"tn", km.confusion.tn}});
    }
    return json{{"protocol", classify::to_string(e.protocol)},
                {"seed", e.seed},
                {"folds", e.folds},
                {"per_k", per_k},
                {"best_k", e.best_k},
                {"n_accounts", e.n_accounts},
                {"n_predictions", e.n_predictions}};
}

classify::EvalReport eval_from_json(const json& j) {
    classify::EvalReport e;
    e.protocol = j.at("protocol").get<std::string>() == "loocv"
                     ? classify::Protocol::loocv
                     : classify::Protocol::stratified_kfold;
    e.seed = j.at("seed").get<std::uint64_t>();
    e.folds = j.at("folds").get<int>();
    e.best_k = j.at("best_k").get<int>();
    e.n_accounts = j.at("n_accounts").get<std::size_t>();
    e.n_predictions = j.at("n_predictions").get<std::size_t>();
    for (const auto& jk : j.at("per_k")) {
        classify::KMetrics km;
        km.k = jk.at("k").get<int>();
        km.metrics.precision = jk.at("precision").get<double>();
        km.metrics.recall = jk.at("recall").get<double>();
        km.metrics.f1 = jk.at("f1").get<double>();
        km.confusion.tp = jk.at("tp").get<std::uint64_t>();
        km.confusion.fn = jk.at("fn").get<std::uint64_t>();
        km.confusion.fp = jk.at("fp").get<std::uint64_t>();
        km.confusion.tn = jk.at("tn").get<std::uint64_t>();
        e.per_k.push_back(km);
    }
    return e;
}

}  // namespace

ClassHistograms class_histograms(const std::vector<features::ChangeFeatures>& feats,
                                 const std::vector<ingest::Label>& labels) {
    if (feats.size() != labels.size())
        throw std::invalid_argument("features and labels must be aligned");

    std::vector<const std::vector<double>*> pa, pc, na, nc;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        if (labels[i] == ingest::Label::positive) {
            pa.push_back(&feats[i].action_hist);
            pc.push_back(&feats[i].content_hist);
        } else {
            na.push_back(&feats[i].action_hist);
            nc.push_back(&feats[i].content_hist);
        }
    }
    if (pa.empty() || na.empty()) throw std::invalid_argument("both classes must be non-empty");

    ClassHistograms ch;
    ch.n_positive = pa.size();
    ch.n_negative = na.size();
    ch.positive_action = mean_of(pa);
    ch.positive_content = mean_of(pc);
    ch.negative_action = mean_of(na);
    ch.negative_content = mean_of(nc);
    return ch;
}

std::string class_histograms_csv(const ClassHistograms& ch) {
    const std::size_t bins = ch.positive_action.size();
    std::ostringstream os;
    os << "class,view,n_accounts";
    for (std::size_t b = 0; b < bins; ++b) os << ",b" << b;
    os << '\n';
    const auto row = [&](const char* cls, const char* view, std::size_t n,
                         const std::vector<double>& h) {
        os << cls << ',' << view << ',' << n;
        for (double v : h) os << ',' << format_metric(v);
        os << '\n';
    };
    row("positive", "action", ch.n_positive, ch.positive_action);
    row("positive", "content", ch.n_positive, ch.positive_content);
    row("negative", "action", ch.n_negative, ch.negative_action);
    row("negative", "content", ch.n_negative, ch.negative_content);
    return os.str();
}

std::string to_json_string(const RunReport& r, int indent) {
    json j;
    j["dataset_id"] = r.dataset_id;
    j["campaign"] = r.campaign;
    j["setting"] = setting_to_json(r.setting);
    j["seed"] = r.seed;
    j["bins"] = r.bins;
    j["normalize"] = r.normalize;
    j["codec"] = json{{"name", r.codec_params.name},
                      {"window_size", r.codec_params.window_size},
                      {"min_match", r.codec_params.min_match},
                      {"max_match", r.codec_params.max_match},
                      {"max_chain", r.codec_params.max_chain},
                      {"version", r.codec_params.version}};
    j["accounts_loaded"] = r.accounts_loaded;
    j["accounts_in"] = r.accounts_in;
    j["excluded"] = r.excluded;
    j["degenerate_content_pairs"] = r.degenerate_content_pairs;
    if (r.eval) j["eval"] = eval_to_json(*r.eval);
    if (r.mean_metrics)
        j["mean_metrics"] = json{{"precision", r.mean_metrics->precision},
                                 {"recall", r.mean_metrics->recall},
                                 {"f1", r.mean_metrics->f1}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j.dump(indent) + "\n";
}

RunReport report_from_json_string(const std::string& text) {
    const json j = json::parse(text);
    RunReport r;
    r.dataset_id = j.at("dataset_id").get<std::string>();
    r.campaign = j.at("campaign").get<std::string>();
    r.setting = setting_from_json(j.at("setting"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.bins = j.at("bins").get<int>();
    r.normalize = j.at("normalize").get<bool>();
    r.codec_params.name = j.at("codec").at("name").get<std::string>();
    r.codec_params.window_size = j.at("codec").at("window_size").get<std::size_t>();
    r.codec_params.min_match = j.at("codec").at("min_match").get<std::size_t>();
    r.codec_params.max_match = j.at("codec").at("max_match").get<std::size_t>();
    r.codec_params.max_chain = j.at("codec").at("max_chain").get<std::size_t>();
    r.codec_params.version = j.at("codec").at("version").get<int>();
    r.accounts_loaded = j.at("accounts_loaded").get<std::size_t>();
    r.accounts_in = j.at("accounts_in").get<std::size_t>();
    r.excluded = j.at("excluded").get<std::map<std::string, std::size_t>>();
    r.degenerate_content_pairs = j.at("degenerate_content_pairs").get<std::size_t>();
    if (j.contains("eval")) r.eval = eval_from_json(j.at("eval"));
    if (j.contains("mean_metrics")) {
        classify::Metrics m;
        m.precision = j.at("mean_metrics").at("precision").get<double>();
        m.recall = j.at("mean_metrics").at("recall").get<double>();
        m.f1 = j.at("mean_metrics").at("f1").get<double>();
        r.mean_metrics = m;
    }
    if (j.contains("failure")) r.failure = j.at("failure").get<std::string>();
    return r;
}

std::string results_table(const std::vector<RunReport>& reports) {
    // Best-F1 flag per segmentation group, computed over summary rows only
    // (campaign rows describe a single campaign, not a setting).
    std::map<std::string, double> group_best;
    const auto row_f1 = [](const RunReport& r) -> std::optional<double> {
        if (r.eval) return r.eval->at_best().metrics.f1;
        if (r.mean_metrics) return r.mean_metrics->f1;
        return std::nullopt;
    };
    const auto is_summary = [](const RunReport& r) {
        return r.campaign.empty() || r.campaign == "mean";
    };
    for (const auto& r : reports) {
        if (!is_summary(r)) continue;
        const auto f1 = row_f1(r);
        if (!f1) continue;
        const std::string group = segmentation_label(r.setting);
        auto it = group_best.find(group);
        if (it == group_best.end() || *f1 > it->second) group_best[group] = *f1;
    }

    std::ostringstream os;
    os << "dataset,campaign,segmentation,selection,distance,accounts_in,excluded,"
          "best_k,precision,recall,f1,best_in_group\n";
    for (const auto& r : reports) {
        std::size_t n_excluded = 0;
        for (const auto& [reason, count] : r.excluded) n_excluded += count;
        os << r.dataset_id << ',' << r.campaign << ',' << segmentation_label(r.setting) << ','
           << segment::to_string(r.setting.selection) << ','
           << segment::to_string(r.setting.distance) << ',' << r.accounts_in << ','
           << n_excluded << ',';
        const auto f1 = row_f1(r);
        if (!f1) {
            os << ",,,," << '\n';
            continue;
        }
        classify::Metrics m;
        std::string best_k = "-";
        if (r.eval) {
            m = r.eval->at_best().metrics;
            best_k = std::to_string(r.eval->best_k);
        } else {
            m = *r.mean_metrics;
        }
        const bool flagged = is_summary(r) &&
                             group_best.at(segmentation_label(r.setting)) == *f1;
        os << best_k << ',' << format_metric(m.precision) << ',' << format_metric(m.recall)
           << ',' << format_metric(m.f1) << ',' << (flagged ? "*" : "") << '\n';
    }
    return os.str();
}

std::string per_k_table(const std::vector<RunReport>& reports) {
    std::ostringstream os;
    os << "dataset,campaign,segmentation,selection,distance,k,precision,recall,f1,best\n";
    for (const auto& r : reports) {
        if (!r.eval) continue;
        for (const auto& km : r.eval->per_k) {
            os << r.dataset_id << ',' << r.campaign << ',' << segmentation_label(r.setting) << ','
               << segment::to_string(r.setting.selection) << ','
               << segment::to_string(r.setting.distance) << ',' << km.k << ','
               << format_metric(km.metrics.precision) << ',' << format_metric(km.metrics.recall)
               << ',' << format_metric(km.metrics.f1) << ','
               << (km.k == r.eval->best_k ? "*" : "") << '\n';
        }
    }
    return os.str();
}

std::string features_csv(const std::vector<features::ChangeFeatures>& feats,
                         const std::vector<ingest::Label>& labels) {
    if (feats.size() != labels.size())
        throw std::invalid_argument("features and labels must be aligned");
    std::ostringstream os;
    const std::size_t bins = feats.empty() ? features::kDefaultBins : feats[0].action_hist.size();
    os << "account_id,label";
    for (std::size_t b = 0; b < bins; ++b) os << ",a" << b;
    for (std::size_t b = 0; b < bins; ++b) os << ",c" << b;
    os << '\n';
    os.setf(std::ios::fixed);
    os.precision(6);
    for (std::size_t i = 0; i < feats.size(); ++i) {
        os << feats[i].account_id << ',' << ingest::to_string(labels[i]);
        for (double v : feats[i].action_hist) os << ',' << v;
        for (double v : feats[i].content_hist) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

}  // namespace bchange::report
