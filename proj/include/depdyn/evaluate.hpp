#ifndef DEPDYN_EVALUATE_HPP
#define DEPDYN_EVALUATE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace depdyn::evaluate {

// Class 1 (depressed) is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    ClassMetrics per_class[2];  // index = class label
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

// Per-class precision/recall/F1 with the 0/0 -> 0 convention; macro values
// are plain means over the two classes.
MetricsReport metrics(const ConfusionMatrix& cm);

struct AggregateMetrics {
    MetricsReport mean;
    MetricsReport stdev;  // sample standard deviation over folds
};

AggregateMetrics aggregate(std::span<const MetricsReport> reports);

// One row of the results table: feature mode + classifier + metrics.
struct ResultRow {
    std::string features;
    std::string method;
    MetricsReport report;
};

// Aligned plain-text table (Features / Method / Precision / Recall /
// F1-Score / Accuracy).
void print_results_table(std::span<const ResultRow> rows, std::ostream& out);

}  // namespace depdyn::evaluate

#endif
