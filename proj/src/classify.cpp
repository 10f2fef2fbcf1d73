#include "depdyn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Dense>

#include "depdyn/errors.hpp"

namespace depdyn::classify {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void require_consistent(std::span<const FeatureVector> x, std::span<const int> y) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainError("training data and labels must be non-empty and equal-length");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i].dimension != x[0].dimension || x[i].mode != x[0].mode) {
            throw DimensionError("inconsistent feature dimensions in training data");
        }
    }
    for (const int label : y) {
        if (label != 0 && label != 1) throw TrainError("labels must be 0 or 1");
    }
}

std::array<std::size_t, 2> class_counts(std::span<const int> y) {
    std::array<std::size_t, 2> n{};
    for (const int label : y) ++n[static_cast<std::size_t>(label)];
    return n;
}

void check_dimension(FeatureMode mode, std::size_t dimension, const FeatureVector& x) {
    if (x.mode != mode || x.dimension != dimension) {
        throw DimensionError("feature vector does not match model (mode " +
                             vectorize::to_string(x.mode) + " dim " +
                             std::to_string(x.dimension) + " vs mode " +
                             vectorize::to_string(mode) + " dim " + std::to_string(dimension) +
                             ")");
    }
}

double dot_with(const FeatureVector& x, std::span<const double> w) {
    double z = 0.0;
    x.for_each([&](std::size_t col, double val) { z += w[col] * val; });
    return z;
}

// log(1 + exp(-|z|)) + max(z,0) - z*y, the overflow-safe cross entropy.
double cross_entropy(double z, int y) {
    const double zy = z * static_cast<double>(y);
    return std::max(z, 0.0) - zy + std::log1p(std::exp(-std::abs(z)));
}

nlohmann::json hyper_to_json(const LogRegHyper& h) {
    return {{"l2_lambda", h.l2_lambda},
            {"learning_rate", h.learning_rate},
            {"epochs", h.epochs},
            {"tolerance", h.tolerance}};
}

LogRegHyper hyper_from_json(const nlohmann::json& j) {
    LogRegHyper h;
    h.l2_lambda = j.at("l2_lambda").get<double>();
    h.learning_rate = j.at("learning_rate").get<double>();
    h.epochs = j.at("epochs").get<std::size_t>();
    h.tolerance = j.at("tolerance").get<double>();
    return h;
}

FeatureMode mode_from_json(const nlohmann::json& j) {
    const auto mode = vectorize::feature_mode_from_string(j.at("mode").get<std::string>());
    if (!mode) throw FormatError("unknown feature mode in model artifact");
    return *mode;
}

}  // namespace

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logreg_loss(std::span<const FeatureVector> x, std::span<const int> y,
                   std::span<const double> weights, double bias, double l2_lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        loss += cross_entropy(dot_with(x[i], weights) + bias, y[i]);
    }
    loss /= static_cast<double>(x.size());
    double reg = 0.0;
    for (const double w : weights) reg += w * w;
    return loss + 0.5 * l2_lambda * reg;
}

LogRegGradient logreg_gradient(std::span<const FeatureVector> x, std::span<const int> y,
                               std::span<const double> weights, double bias, double l2_lambda) {
    LogRegGradient g;
    g.weights.assign(weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = sigmoid(dot_with(x[i], weights) + bias);
        const double diff = (p - static_cast<double>(y[i])) * inv_n;
        x[i].for_each([&](std::size_t col, double val) { g.weights[col] += diff * val; });
        g.bias += diff;
    }
    for (std::size_t c = 0; c < weights.size(); ++c) g.weights[c] += l2_lambda * weights[c];
    g.inf_norm = std::abs(g.bias);
    for (const double w : g.weights) g.inf_norm = std::max(g.inf_norm, std::abs(w));
    return g;
}

LogRegModel fit_logreg(std::span<const FeatureVector> x, std::span<const int> y,
                       const LogRegHyper& hyper) {
    require_consistent(x, y);
    const auto counts = class_counts(y);
    if (counts[0] == 0 || counts[1] == 0) {
        // With l2 regularization a one-class fit is still well-posed; it is
        // almost always a data-plumbing mistake upstream, so reject it only
        // when unregularized (unbounded bias).
        if (hyper.l2_lambda <= 0.0 && (counts[0] == 0 || counts[1] == 0)) {
            throw TrainError("logistic regression needs both classes without regularization");
        }
    }

    LogRegModel model;
    model.mode = x[0].mode;
    model.hyper = hyper;
    model.weights.assign(x[0].dimension, 0.0);
    model.bias = 0.0;

    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        const LogRegGradient g =
            logreg_gradient(x, y, model.weights, model.bias, hyper.l2_lambda);
        if (!std::isfinite(g.inf_norm)) {
            throw TrainError("non-finite gradient at epoch " + std::to_string(epoch) +
                             "; lower the learning rate");
        }
        if (g.inf_norm <= hyper.tolerance) break;
        for (std::size_t c = 0; c < model.weights.size(); ++c) {
            model.weights[c] -= hyper.learning_rate * g.weights[c];
        }
        model.bias -= hyper.learning_rate * g.bias;
    }
    const double final_loss = logreg_loss(x, y, model.weights, model.bias, hyper.l2_lambda);
    if (!std::isfinite(final_loss)) {
        throw TrainError("logistic regression diverged: non-finite loss after training");
    }
    return model;
}

GnbModel fit_gnb(std::span<const FeatureVector> x, std::span<const int> y, double var_epsilon) {
    require_consistent(x, y);
    const auto counts = class_counts(y);
    if (counts[0] < 2 || counts[1] < 2) {
        throw TrainError("Gaussian naive Bayes needs >=2 examples per class (got " +
                         std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + ")");
    }

    GnbModel model;
    model.mode = x[0].mode;
    model.dimension = x[0].dimension;
    const std::size_t d = model.dimension;
    const double n = static_cast<double>(x.size());
    model.class_priors = {static_cast<double>(counts[0]) / n,
                          static_cast<double>(counts[1]) / n};

    // Sparse-friendly moments; absent entries are zeros and contribute
    // nothing to the sums.
    std::array<std::vector<double>, 2> sum;
    std::array<std::vector<double>, 2> sumsq;
    std::vector<double> all_sum(d, 0.0), all_sumsq(d, 0.0);
    for (int c = 0; c < 2; ++c) {
        sum[c].assign(d, 0.0);
        sumsq[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        x[i].for_each([&](std::size_t col, double val) {
            sum[c][col] += val;
            sumsq[c][col] += val * val;
            all_sum[col] += val;
            all_sumsq[col] += val * val;
        });
    }

    if (var_epsilon <= 0.0) {
        double max_var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double mean = all_sum[j] / n;
            max_var = std::max(max_var, all_sumsq[j] / n - mean * mean);
        }
        var_epsilon = std::max(1e-9 * max_var, 1e-12);
    }
    model.var_epsilon = var_epsilon;

    for (int c = 0; c < 2; ++c) {
        const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
        auto& means = model.means[static_cast<std::size_t>(c)];
        auto& vars = model.variances[static_cast<std::size_t>(c)];
        means.assign(d, 0.0);
        vars.assign(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            const double mean = sum[static_cast<std::size_t>(c)][j] / nc;
            const double var = sumsq[static_cast<std::size_t>(c)][j] / nc - mean * mean;
            means[j] = mean;
            vars[j] = std::max(var, var_epsilon);
        }
    }

    for (int c = 0; c < 2; ++c) {
        double base = 0.0;
        const auto& means = model.means[static_cast<std::size_t>(c)];
        const auto& vars = model.variances[static_cast<std::size_t>(c)];
        for (std::size_t j = 0; j < d; ++j) {
            base += -0.5 * std::log(kTwoPi * vars[j]) - means[j] * means[j] / (2.0 * vars[j]);
        }
        model.zero_log_density[static_cast<std::size_t>(c)] = base;
    }
    return model;
}

LinDiscModel fit_lindisc(std::span<const FeatureVector> x, std::span<const int> y,
                         double shrinkage) {
    require_consistent(x, y);
    if (shrinkage < 0.0 || shrinkage > 1.0) throw TrainError("shrinkage must be in [0,1]");
    const auto counts = class_counts(y);
    if (counts[0] < 2 || counts[1] < 2) {
        throw TrainError("linear discriminant needs >=2 examples per class");
    }
    const std::size_t d = x[0].dimension;
    if (d > kLinDiscDimensionCap) {
        throw TrainError("linear discriminant dimension " + std::to_string(d) + " exceeds the " +
                         std::to_string(kLinDiscDimensionCap) +
                         "-column cap; lower tfidf max_features or use the MM feature mode");
    }

    LinDiscModel model;
    model.mode = x[0].mode;
    model.dimension = d;
    model.shrinkage = shrinkage;
    const double n = static_cast<double>(x.size());
    model.class_priors = {static_cast<double>(counts[0]) / n,
                          static_cast<double>(counts[1]) / n};

    for (int c = 0; c < 2; ++c) model.class_means[static_cast<std::size_t>(c)].assign(d, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto& mean = model.class_means[static_cast<std::size_t>(y[i])];
        x[i].for_each([&](std::size_t col, double val) { mean[col] += val; });
    }
    for (int c = 0; c < 2; ++c) {
        const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
        for (double& v : model.class_means[static_cast<std::size_t>(c)]) v /= nc;
    }

    // Pooled within-class scatter via sum of outer products minus the class
    // rank-1 corrections, divisor n-2.
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                    static_cast<Eigen::Index>(d));
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t i = 0; i < x.size(); ++i) {
        entries.clear();
        x[i].for_each([&](std::size_t col, double val) { entries.emplace_back(col, val); });
        for (const auto& [ca, va] : entries) {
            for (const auto& [cb, vb] : entries) {
                scatter(static_cast<Eigen::Index>(ca), static_cast<Eigen::Index>(cb)) += va * vb;
            }
        }
    }
    for (int c = 0; c < 2; ++c) {
        const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
        Eigen::Map<const Eigen::VectorXd> mu(model.class_means[static_cast<std::size_t>(c)].data(),
                                             static_cast<Eigen::Index>(d));
        scatter.noalias() -= nc * (mu * mu.transpose());
    }
    Eigen::MatrixXd cov = scatter / (n - 2.0);

    const double trace_mean = cov.trace() / static_cast<double>(d);
    Eigen::MatrixXd shrunk = (1.0 - shrinkage) * cov;
    shrunk.diagonal().array() += shrinkage * trace_mean;

    Eigen::VectorXd delta(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        delta(static_cast<Eigen::Index>(j)) = model.class_means[1][j] - model.class_means[0][j];
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(shrunk);
    if (llt.info() != Eigen::Success) {
        throw TrainError("shrunken covariance is not positive definite; increase shrinkage");
    }
    const Eigen::VectorXd w = llt.solve(delta);

    model.direction.assign(w.data(), w.data() + w.size());
    double mean_term = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        mean_term += model.direction[j] * (model.class_means[0][j] + model.class_means[1][j]);
    }
    model.intercept =
        -0.5 * mean_term + std::log(model.class_priors[1] / model.class_priors[0]);
    return model;
}

double predict_proba(const LogRegModel& model, const FeatureVector& x) {
    check_dimension(model.mode, model.weights.size(), x);
    return sigmoid(dot_with(x, model.weights) + model.bias);
}

double predict_proba(const GnbModel& model, const FeatureVector& x) {
    check_dimension(model.mode, model.dimension, x);
    std::array<double, 2> logp{};
    for (int c = 0; c < 2; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        double lp = std::log(model.class_priors[ci]) + model.zero_log_density[ci];
        x.for_each([&](std::size_t col, double val) {
            const double mu = model.means[ci][col];
            const double var = model.variances[ci][col];
            const double dev = val - mu;
            lp += (-dev * dev + mu * mu) / (2.0 * var);
        });
        logp[ci] = lp;
    }
    return sigmoid(logp[1] - logp[0]);
}

double predict_proba(const LinDiscModel& model, const FeatureVector& x) {
    check_dimension(model.mode, model.dimension, x);
    return sigmoid(dot_with(x, model.direction) + model.intercept);
}

double predict_proba(const ClassifierModel& model, const FeatureVector& x) {
    return std::visit([&](const auto& m) { return predict_proba(m, x); }, model);
}

int predict(const ClassifierModel& model, const FeatureVector& x, double threshold) {
    return predict_proba(model, x) >= threshold ? 1 : 0;
}

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::LogReg: return "logreg";
        case ClassifierKind::Gnb: return "gnb";
        case ClassifierKind::LinDisc: return "lindisc";
    }
    return "?";
}

std::optional<ClassifierKind> classifier_kind_from_string(const std::string& s) {
    if (s == "logreg" || s == "lr") return ClassifierKind::LogReg;
    if (s == "gnb") return ClassifierKind::Gnb;
    if (s == "lindisc" || s == "lda") return ClassifierKind::LinDisc;
    return std::nullopt;
}

nlohmann::json classifier_to_json(const ClassifierModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["artifact"] = "classifier";
    if (const auto* lr = std::get_if<LogRegModel>(&model)) {
        j["model_type"] = "logreg";
        j["mode"] = vectorize::to_string(lr->mode);
        j["dimension"] = lr->weights.size();
        j["weights"] = lr->weights;
        j["bias"] = lr->bias;
        j["hyper"] = hyper_to_json(lr->hyper);
    } else if (const auto* gnb = std::get_if<GnbModel>(&model)) {
        j["model_type"] = "gnb";
        j["mode"] = vectorize::to_string(gnb->mode);
        j["dimension"] = gnb->dimension;
        j["class_priors"] = gnb->class_priors;
        j["means"] = gnb->means;
        j["variances"] = gnb->variances;
        j["var_epsilon"] = gnb->var_epsilon;
    } else if (const auto* ld = std::get_if<LinDiscModel>(&model)) {
        j["model_type"] = "lindisc";
        j["mode"] = vectorize::to_string(ld->mode);
        j["dimension"] = ld->dimension;
        j["class_priors"] = ld->class_priors;
        j["class_means"] = ld->class_means;
        j["direction"] = ld->direction;
        j["intercept"] = ld->intercept;
        j["shrinkage"] = ld->shrinkage;
    }
    return j;
}

ClassifierModel classifier_from_json(const nlohmann::json& j) {
    const std::string type = j.at("model_type").get<std::string>();
    try {
        if (type == "logreg") {
            LogRegModel m;
            m.mode = mode_from_json(j);
            m.weights = j.at("weights").get<std::vector<double>>();
            m.bias = j.at("bias").get<double>();
            m.hyper = hyper_from_json(j.at("hyper"));
            return m;
        }
        if (type == "gnb") {
            GnbModel m;
            m.mode = mode_from_json(j);
            m.dimension = j.at("dimension").get<std::size_t>();
            m.class_priors = j.at("class_priors").get<std::array<double, 2>>();
            m.means = j.at("means").get<std::array<std::vector<double>, 2>>();
            m.variances = j.at("variances").get<std::array<std::vector<double>, 2>>();
            m.var_epsilon = j.at("var_epsilon").get<double>();
            for (int c = 0; c < 2; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                double base = 0.0;
                for (std::size_t col = 0; col < m.dimension; ++col) {
                    base += -0.5 * std::log(kTwoPi * m.variances[ci][col]) -
                            m.means[ci][col] * m.means[ci][col] / (2.0 * m.variances[ci][col]);
                }
                m.zero_log_density[ci] = base;
            }
            return m;
        }
        if (type == "lindisc") {
            LinDiscModel m;
            m.mode = mode_from_json(j);
            m.dimension = j.at("dimension").get<std::size_t>();
            m.class_priors = j.at("class_priors").get<std::array<double, 2>>();
            m.class_means = j.at("class_means").get<std::array<std::vector<double>, 2>>();
            m.direction = j.at("direction").get<std::vector<double>>();
            m.intercept = j.at("intercept").get<double>();
            m.shrinkage = j.at("shrinkage").get<double>();
            return m;
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed classifier artifact: ") + e.what());
    }
    throw FormatError("unknown model_type: " + type);
}

void save_classifier(const ClassifierModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write classifier: " + path);
    out << classifier_to_json(model).dump(2) << '\n';
}

ClassifierModel load_classifier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open classifier: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("artifact", "") != "classifier") {
        throw FormatError("not a classifier artifact: " + path);
    }
    return classifier_from_json(j);
}

}  // namespace depdyn::classify
