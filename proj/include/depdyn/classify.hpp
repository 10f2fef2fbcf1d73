#ifndef DEPDYN_CLASSIFY_HPP
#define DEPDYN_CLASSIFY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "depdyn/vectorize.hpp"

namespace depdyn::classify {

using vectorize::FeatureMode;
using vectorize::FeatureVector;

double sigmoid(double z);

// ---------------------------------------------------------------- logistic

struct LogRegHyper {
    double l2_lambda = 1e-4;
    double learning_rate = 0.5;
    std::size_t epochs = 500;
    double tolerance = 1e-6;  // on the gradient infinity norm
};

struct LogRegModel {
    FeatureMode mode = FeatureMode::TFIDF;
    std::vector<double> weights;
    double bias = 0.0;
    LogRegHyper hyper;
};

// Mean cross-entropy + (lambda/2)*||w||^2 (bias unpenalized).
double logreg_loss(std::span<const FeatureVector> x, std::span<const int> y,
                   std::span<const double> weights, double bias, double l2_lambda);

struct LogRegGradient {
    std::vector<double> weights;
    double bias = 0.0;
    double inf_norm = 0.0;
};

LogRegGradient logreg_gradient(std::span<const FeatureVector> x, std::span<const int> y,
                               std::span<const double> weights, double bias, double l2_lambda);

// Full-batch gradient descent from zero initialization; stops when the
// gradient infinity norm falls below hyper.tolerance or epochs run out.
LogRegModel fit_logreg(std::span<const FeatureVector> x, std::span<const int> y,
                       const LogRegHyper& hyper = {});

// ------------------------------------------------------------- naive Bayes

struct GnbModel {
    FeatureMode mode = FeatureMode::TFIDF;
    std::size_t dimension = 0;
    std::array<double, 2> class_priors{};
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> variances;  // floored at var_epsilon
    double var_epsilon = 0.0;
    // Cached per-class log-density of the all-zero vector (sparse speedup).
    std::array<double, 2> zero_log_density{};
};

// Per-class maximum-likelihood means and population variances with the
// variance floored at var_epsilon; pass var_epsilon <= 0 for the automatic
// floor 1e-9 * (largest per-feature variance over the data), min 1e-12.
// Absent sparse entries are explicit zeros.
GnbModel fit_gnb(std::span<const FeatureVector> x, std::span<const int> y,
                 double var_epsilon = 0.0);

// ------------------------------------------------- linear discriminant

inline constexpr std::size_t kLinDiscDimensionCap = 5000;

struct LinDiscModel {
    FeatureMode mode = FeatureMode::TFIDF;
    std::size_t dimension = 0;
    std::array<double, 2> class_priors{};
    std::array<std::vector<double>, 2> class_means;
    std::vector<double> direction;  // shrunken-covariance solve of mu1 - mu0
    double intercept = 0.0;         // from means and log-priors
    double shrinkage = 0.1;
};

// Pooled within-class covariance (divisor n-2), shrunken toward
// (trace/d) * I by `shrinkage`, then a symmetric positive-definite solve for
// the discriminant direction.  Refuses dimensions above kLinDiscDimensionCap.
LinDiscModel fit_lindisc(std::span<const FeatureVector> x, std::span<const int> y,
                         double shrinkage = 0.1);

// ----------------------------------------------------------------- scoring

double predict_proba(const LogRegModel& model, const FeatureVector& x);
double predict_proba(const GnbModel& model, const FeatureVector& x);
double predict_proba(const LinDiscModel& model, const FeatureVector& x);

using ClassifierModel = std::variant<LogRegModel, GnbModel, LinDiscModel>;

enum class ClassifierKind { LogReg, Gnb, LinDisc };
std::string to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_kind_from_string(const std::string& s);

double predict_proba(const ClassifierModel& model, const FeatureVector& x);
int predict(const ClassifierModel& model, const FeatureVector& x, double threshold = 0.5);

void save_classifier(const ClassifierModel& model, const std::string& path);
ClassifierModel load_classifier(const std::string& path);

// JSON forms, also used when embedding models inside a pipeline artifact.
nlohmann::json classifier_to_json(const ClassifierModel& model);
ClassifierModel classifier_from_json(const nlohmann::json& j);

}  // namespace depdyn::classify

#endif
