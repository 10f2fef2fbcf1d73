#include "depdyn/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "depdyn/errors.hpp"

namespace depdyn::evaluate {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double p, double r) { return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size()) {
        throw DimensionError("confusion needs equal-length non-empty label vectors");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1)) {
            throw DimensionError("labels must be 0 or 1");
        }
        if (y_true[i] == 1) {
            y_pred[i] == 1 ? ++cm.tp : ++cm.fn;
        } else {
            y_pred[i] == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DimensionError("empty confusion matrix");
    MetricsReport r;
    const auto tp = static_cast<double>(cm.tp);
    const auto fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn);
    const auto tn = static_cast<double>(cm.tn);

    r.per_class[1].precision = safe_div(tp, tp + fp);
    r.per_class[1].recall = safe_div(tp, tp + fn);
    r.per_class[1].f1 = f1_of(r.per_class[1].precision, r.per_class[1].recall);

    r.per_class[0].precision = safe_div(tn, tn + fn);
    r.per_class[0].recall = safe_div(tn, tn + fp);
    r.per_class[0].f1 = f1_of(r.per_class[0].precision, r.per_class[0].recall);

    r.accuracy = (tp + tn) / static_cast<double>(cm.total());
    r.macro_precision = 0.5 * (r.per_class[0].precision + r.per_class[1].precision);
    r.macro_recall = 0.5 * (r.per_class[0].recall + r.per_class[1].recall);
    r.macro_f1 = 0.5 * (r.per_class[0].f1 + r.per_class[1].f1);
    return r;
}

AggregateMetrics aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw DimensionError("no reports to aggregate");
    const double n = static_cast<double>(reports.size());
    AggregateMetrics agg;

    auto fold = [&](auto&& get, double& mean_out, double& stdev_out) {
        double mean = 0.0;
        for (const auto& r : reports) mean += get(r);
        mean /= n;
        double ss = 0.0;
        for (const auto& r : reports) {
            const double d = get(r) - mean;
            ss += d * d;
        }
        mean_out = mean;
        stdev_out = reports.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    };

    fold([](const MetricsReport& r) { return r.accuracy; }, agg.mean.accuracy,
         agg.stdev.accuracy);
    fold([](const MetricsReport& r) { return r.macro_precision; }, agg.mean.macro_precision,
         agg.stdev.macro_precision);
    fold([](const MetricsReport& r) { return r.macro_recall; }, agg.mean.macro_recall,
         agg.stdev.macro_recall);
    fold([](const MetricsReport& r) { return r.macro_f1; }, agg.mean.macro_f1,
         agg.stdev.macro_f1);
    for (int c = 0; c < 2; ++c) {
        fold([c](const MetricsReport& r) { return r.per_class[c].precision; },
             agg.mean.per_class[c].precision, agg.stdev.per_class[c].precision);
        fold([c](const MetricsReport& r) { return r.per_class[c].recall; },
             agg.mean.per_class[c].recall, agg.stdev.per_class[c].recall);
        fold([c](const MetricsReport& r) { return r.per_class[c].f1; },
             agg.mean.per_class[c].f1, agg.stdev.per_class[c].f1);
    }
    return agg;
}

void print_results_table(std::span<const ResultRow> rows, std::ostream& out) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-8s %9s %9s %9s %9s\n", "Features", "Method",
                  "Precision", "Recall", "F1-Score", "Accuracy");
    out << line;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%-12s %-8s %9.3f %9.3f %9.3f %9.3f\n",
                      row.features.c_str(), row.method.c_str(), row.report.macro_precision,
                      row.report.macro_recall, row.report.macro_f1, row.report.accuracy);
        out << line;
    }
}

}  // namespace depdyn::evaluate
