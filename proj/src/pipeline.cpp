#include "depdyn/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "depdyn/artifact.hpp"
#include "depdyn/errors.hpp"
#include "depdyn/rng.hpp"

namespace depdyn::pipeline {

namespace {

// Substream ids for derive_seed(config.seed, ...): the topic sampler gets
// stream 0, document i gets stream kDocStreamBase + i.
constexpr std::uint64_t kTopicStream = 0;
constexpr std::uint64_t kDocStreamBase = 1;

// Deterministic parallel map: slot i is computed from index i alone, so the
// result is identical for any thread count.
template <typename Fn>
void parallel_index_map(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, threads);
    if (threads == 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

nlohmann::json term_set_to_json(const lexicons::TermSet& set) {
    return {{"word_stems", std::vector<std::string>(set.word_stems.begin(),
                                                    set.word_stems.end())},
            {"glyphs", std::vector<std::string>(set.glyphs.begin(), set.glyphs.end())}};
}

lexicons::TermSet term_set_from_json(const nlohmann::json& j) {
    lexicons::TermSet set;
    for (const auto& w : j.at("word_stems")) set.word_stems.insert(w.get<std::string>());
    for (const auto& g : j.at("glyphs")) set.glyphs.insert(g.get<std::string>());
    return set;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
    return {
        {"mode", vectorize::to_string(c.mode)},
        {"preprocess", {{"language", c.preprocess.language}, {"min_words", c.preprocess.min_words}}},
        {"tfidf", {{"min_df", c.tfidf.min_df}, {"max_features", c.tfidf.max_features}}},
        {"topics",
         {{"k", c.topics.k},
          {"alpha", c.topics.alpha},
          {"beta", c.topics.beta},
          {"sweeps", c.topics.sweeps},
          {"fold_in_sweeps", c.topics.fold_in_sweeps}}},
        {"classifier",
         {{"type", classify::to_string(c.classifier.kind)},
          {"l2_lambda", c.classifier.logreg.l2_lambda},
          {"learning_rate", c.classifier.logreg.learning_rate},
          {"epochs", c.classifier.logreg.epochs},
          {"tolerance", c.classifier.logreg.tolerance},
          {"gnb_var_epsilon", c.classifier.gnb_var_epsilon},
          {"lindisc_shrinkage", c.classifier.lindisc_shrinkage},
          {"threshold", c.classifier.threshold}}},
        {"evaluation",
         {{"protocol", c.evaluation.protocol == Protocol::Holdout ? "holdout" : "kfold"},
          {"train_fraction", c.evaluation.train_fraction},
          {"folds", c.evaluation.folds}}},
        {"seed", c.seed},
    };
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig c;
    const auto mode = vectorize::feature_mode_from_string(j.at("mode").get<std::string>());
    if (!mode) throw FormatError("unknown feature mode in pipeline artifact");
    c.mode = *mode;
    c.preprocess.language = j.at("preprocess").at("language").get<std::string>();
    c.preprocess.min_words = j.at("preprocess").at("min_words").get<std::size_t>();
    c.tfidf.min_df = j.at("tfidf").at("min_df").get<std::size_t>();
    c.tfidf.max_features = j.at("tfidf").at("max_features").get<std::size_t>();
    const auto& topics = j.at("topics");
    c.topics.k = topics.at("k").get<std::size_t>();
    c.topics.alpha = topics.at("alpha").get<double>();
    c.topics.beta = topics.at("beta").get<double>();
    c.topics.sweeps = topics.at("sweeps").get<std::size_t>();
    c.topics.fold_in_sweeps = topics.at("fold_in_sweeps").get<std::size_t>();
    const auto& cls = j.at("classifier");
    const auto kind = classify::classifier_kind_from_string(cls.at("type").get<std::string>());
    if (!kind) throw FormatError("unknown classifier type in pipeline artifact");
    c.classifier.kind = *kind;
    c.classifier.logreg.l2_lambda = cls.at("l2_lambda").get<double>();
    c.classifier.logreg.learning_rate = cls.at("learning_rate").get<double>();
    c.classifier.logreg.epochs = cls.at("epochs").get<std::size_t>();
    c.classifier.logreg.tolerance = cls.at("tolerance").get<double>();
    c.classifier.gnb_var_epsilon = cls.at("gnb_var_epsilon").get<double>();
    c.classifier.lindisc_shrinkage = cls.at("lindisc_shrinkage").get<double>();
    c.classifier.threshold = cls.at("threshold").get<double>();
    const auto& ev = j.at("evaluation");
    c.evaluation.protocol =
        ev.at("protocol").get<std::string>() == "kfold" ? Protocol::KFold : Protocol::Holdout;
    c.evaluation.train_fraction = ev.at("train_fraction").get<double>();
    c.evaluation.folds = ev.at("folds").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

PreprocessedCorpus preprocess_corpus(const std::vector<corpus::TweetRecord>& records,
                                     const std::set<std::string>& stopwords,
                                     const textprep::PreprocessConfig& config,
                                     std::size_t threads) {
    std::vector<std::optional<textprep::TokenDoc>> slots(records.size());
    parallel_index_map(records.size(), threads, [&](std::size_t i) {
        slots[i] = textprep::preprocess(records[i], stopwords, config);
    });
    PreprocessedCorpus out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            out.docs.push_back(std::move(*slots[i]));
            out.source_index.push_back(i);
        } else {
            ++out.filtered;
        }
    }
    return out;
}

std::size_t FittedPipeline::feature_dimension() const {
    const std::size_t dense = lexicons::kEmotionDims + config.topics.k + lexicons::kDomainDims;
    switch (config.mode) {
        case vectorize::FeatureMode::MM: return dense;
        case vectorize::FeatureMode::TFIDF: return tfidf.vocab_size();
        case vectorize::FeatureMode::MM_TFIDF: return tfidf.vocab_size() + dense;
    }
    return 0;
}

vectorize::FeatureVector FittedPipeline::features_for(const textprep::TokenDoc& doc,
                                                      std::uint64_t doc_stream) const {
    std::vector<std::pair<std::uint32_t, double>> sparse;
    if (config.mode != vectorize::FeatureMode::MM) {
        sparse = vectorize::tfidf_transform(tfidf, doc);
    }
    std::vector<double> dense;
    if (config.mode != vectorize::FeatureMode::TFIDF) {
        const auto emo = lexicons::emotion_features(doc, lexicons.emotion);
        const auto theta = topics::lda_infer(*topic_model, doc, config.topics.fold_in_sweeps,
                                             derive_seed(config.seed, doc_stream));
        const auto dom = lexicons::domain_features(doc, lexicons.symptoms);
        dense = vectorize::pack_dense_block(emo, theta, dom);
    }
    return vectorize::assemble_features(std::move(sparse), std::move(dense), config.mode,
                                        tfidf.vocab_size());
}

FittedPipeline fit_pipeline(const std::vector<textprep::TokenDoc>& docs,
                            const std::vector<int>& labels, const PipelineConfig& config,
                            const LexiconSet& lexicons) {
    if (docs.size() != labels.size() || docs.empty()) {
        throw TrainError("pipeline fit needs equal-length non-empty docs and labels");
    }
    FittedPipeline fitted;
    fitted.config = config;
    fitted.lexicons = lexicons;
    fitted.tfidf = vectorize::fit_tfidf(docs, config.tfidf.min_df, config.tfidf.max_features);

    if (config.mode != vectorize::FeatureMode::TFIDF) {
        topics::LdaParams params;
        params.k = config.topics.k;
        params.alpha = config.topics.alpha;
        params.beta = config.topics.beta;
        params.sweeps = config.topics.sweeps;
        params.seed = derive_seed(config.seed, kTopicStream);
        params.vocab = fitted.tfidf.terms;
        fitted.topic_model = topics::lda_train(docs, params);
    }

    std::vector<vectorize::FeatureVector> features(docs.size());
    parallel_index_map(docs.size(), config.threads, [&](std::size_t i) {
        features[i] = fitted.features_for(docs[i], kDocStreamBase + i);
    });

    switch (config.classifier.kind) {
        case classify::ClassifierKind::LogReg:
            fitted.classifier = classify::fit_logreg(features, labels, config.classifier.logreg);
            break;
        case classify::ClassifierKind::Gnb:
            fitted.classifier =
                classify::fit_gnb(features, labels, config.classifier.gnb_var_epsilon);
            break;
        case classify::ClassifierKind::LinDisc:
            fitted.classifier =
                classify::fit_lindisc(features, labels, config.classifier.lindisc_shrinkage);
            break;
    }
    return fitted;
}

std::vector<Prediction> predict_batch(const FittedPipeline& fitted,
                                      const std::vector<textprep::TokenDoc>& docs,
                                      std::size_t threads) {
    std::vector<Prediction> out(docs.size());
    parallel_index_map(docs.size(), threads, [&](std::size_t i) {
        const auto fv = fitted.features_for(docs[i], kDocStreamBase + i);
        const double p = classify::predict_proba(fitted.classifier, fv);
        out[i] = {docs[i].record_ref, p, p >= fitted.config.classifier.threshold ? 1 : 0};
    });
    return out;
}

CrossValidationResult cross_validate(const std::vector<corpus::LabeledExample>& examples,
                                     const PipelineConfig& config, const LexiconSet& lexicons,
                                     const std::set<std::string>& stopwords, std::size_t k,
                                     std::uint64_t seed) {
    std::vector<corpus::TweetRecord> records;
    records.reserve(examples.size());
    for (const auto& e : examples) records.push_back(e.record);
    PreprocessedCorpus prep =
        preprocess_corpus(records, stopwords, config.preprocess, config.threads);

    std::vector<corpus::LabeledExample> usable;
    std::vector<int> labels;
    usable.reserve(prep.docs.size());
    for (std::size_t i = 0; i < prep.docs.size(); ++i) {
        usable.push_back(examples[prep.source_index[i]]);
        labels.push_back(examples[prep.source_index[i]].label);
    }

    const corpus::FoldPlan plan = corpus::kfold(usable, k, seed);
    CrossValidationResult result;
    result.filtered = prep.filtered;

    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<textprep::TokenDoc> train_docs, test_docs;
        std::vector<int> train_labels, test_labels;
        for (std::size_t i = 0; i < prep.docs.size(); ++i) {
            if (plan.assignments[i] == fold) {
                test_docs.push_back(prep.docs[i]);
                test_labels.push_back(labels[i]);
            } else {
                train_docs.push_back(prep.docs[i]);
                train_labels.push_back(labels[i]);
            }
        }
        PipelineConfig fold_config = config;
        fold_config.seed = derive_seed(seed, 100 + fold);
        FittedPipeline fitted;
        try {
            fitted = fit_pipeline(train_docs, train_labels, fold_config, lexicons);
        } catch (const std::exception& e) {
            throw TrainError("fold " + std::to_string(fold) + ": " + e.what());
        }
        const auto preds = predict_batch(fitted, test_docs, config.threads);
        std::vector<int> y_pred;
        y_pred.reserve(preds.size());
        for (const auto& p : preds) y_pred.push_back(p.label);
        result.folds.push_back({fold, evaluate::metrics(evaluate::confusion(test_labels, y_pred))});
    }
    std::vector<evaluate::MetricsReport> reports;
    reports.reserve(result.folds.size());
    for (const auto& f : result.folds) reports.push_back(f.report);
    result.aggregate = evaluate::aggregate(reports);
    return result;
}

HoldoutResult holdout_evaluate(const std::vector<corpus::LabeledExample>& examples,
                               const PipelineConfig& config, const LexiconSet& lexicons,
                               const std::set<std::string>& stopwords, double train_fraction,
                               std::uint64_t seed) {
    std::vector<corpus::TweetRecord> records;
    records.reserve(examples.size());
    for (const auto& e : examples) records.push_back(e.record);
    PreprocessedCorpus prep =
        preprocess_corpus(records, stopwords, config.preprocess, config.threads);

    std::vector<corpus::LabeledExample> usable;
    usable.reserve(prep.docs.size());
    for (std::size_t i = 0; i < prep.docs.size(); ++i) {
        usable.push_back(examples[prep.source_index[i]]);
    }

    const corpus::SplitResult parts = corpus::split(usable, train_fraction, seed);
    std::vector<textprep::TokenDoc> train_docs, test_docs;
    std::vector<int> train_labels, test_labels;
    for (const std::size_t i : parts.train) {
        train_docs.push_back(prep.docs[i]);
        train_labels.push_back(usable[i].label);
    }
    for (const std::size_t i : parts.test) {
        test_docs.push_back(prep.docs[i]);
        test_labels.push_back(usable[i].label);
    }

    HoldoutResult result;
    result.train_size = train_docs.size();
    result.test_size = test_docs.size();
    result.filtered = prep.filtered;
    result.fitted = fit_pipeline(train_docs, train_labels, config, lexicons);
    const auto preds = predict_batch(result.fitted, test_docs, config.threads);
    std::vector<int> y_pred;
    y_pred.reserve(preds.size());
    for (const auto& p : preds) y_pred.push_back(p.label);
    result.report = evaluate::metrics(evaluate::confusion(test_labels, y_pred));
    return result;
}

void FittedPipeline::save(const std::string& path, const std::string& config_hash) const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["artifact"] = "pipeline_model";
    j["config"] = config_to_json(config);
    j["lexicons"] = {
        {"emotion",
         {{"positive", term_set_to_json(lexicons.emotion.positive)},
          {"negative", term_set_to_json(lexicons.emotion.negative)}}},
        {"symptoms", nlohmann::json::array()},
        {"antidepressants", term_set_to_json(lexicons.symptoms.antidepressants)},
    };
    for (const auto& cat : lexicons.symptoms.categories) {
        j["lexicons"]["symptoms"].push_back(term_set_to_json(cat));
    }
    j["tfidf"] = {{"terms", tfidf.terms},
                  {"df", tfidf.df},
                  {"n_docs", tfidf.n_docs},
                  {"min_df", tfidf.min_df},
                  {"max_features", tfidf.max_features}};
    if (topic_model) {
        j["topic_model"] = {{"k", topic_model->k},
                            {"alpha", topic_model->alpha},
                            {"beta", topic_model->beta},
                            {"vocab", topic_model->vocab_terms},
                            {"topic_word_counts", topic_model->topic_word_counts},
                            {"topic_totals", topic_model->topic_totals},
                            {"seed", topic_model->seed},
                            {"sweeps_run", topic_model->sweeps_run}};
    } else {
        j["topic_model"] = nullptr;
    }
    j["classifier"] = classify::classifier_to_json(classifier);
    artifact::write_artifact_json(path, std::move(j), config_hash, config.seed);
}

FittedPipeline FittedPipeline::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pipeline model: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("artifact", "") != "pipeline_model") {
        throw FormatError("not a pipeline model artifact: " + path);
    }
    FittedPipeline fitted;
    try {
        fitted.config = config_from_json(j.at("config"));
        const auto& lex = j.at("lexicons");
        fitted.lexicons.emotion.positive = term_set_from_json(lex.at("emotion").at("positive"));
        fitted.lexicons.emotion.negative = term_set_from_json(lex.at("emotion").at("negative"));
        const auto& sym = lex.at("symptoms");
        if (sym.size() != lexicons::kSymptomCategories) {
            throw FormatError("pipeline artifact must carry 9 symptom categories");
        }
        for (std::size_t i = 0; i < lexicons::kSymptomCategories; ++i) {
            fitted.lexicons.symptoms.categories[i] = term_set_from_json(sym.at(i));
        }
        fitted.lexicons.symptoms.antidepressants =
            term_set_from_json(lex.at("antidepressants"));

        const auto& tf = j.at("tfidf");
        fitted.tfidf.terms = tf.at("terms").get<std::vector<std::string>>();
        fitted.tfidf.df = tf.at("df").get<std::vector<std::uint32_t>>();
        fitted.tfidf.n_docs = tf.at("n_docs").get<std::size_t>();
        fitted.tfidf.min_df = tf.at("min_df").get<std::size_t>();
        fitted.tfidf.max_features = tf.at("max_features").get<std::size_t>();
        for (std::uint32_t col = 0; col < fitted.tfidf.terms.size(); ++col) {
            fitted.tfidf.vocab[fitted.tfidf.terms[col]] = col;
        }

        if (!j.at("topic_model").is_null()) {
            const auto& tm = j.at("topic_model");
            topics::TopicModel model;
            model.k = tm.at("k").get<std::size_t>();
            model.alpha = tm.at("alpha").get<double>();
            model.beta = tm.at("beta").get<double>();
            model.vocab_terms = tm.at("vocab").get<std::vector<std::string>>();
            model.topic_word_counts =
                tm.at("topic_word_counts").get<std::vector<std::int64_t>>();
            model.topic_totals = tm.at("topic_totals").get<std::vector<std::int64_t>>();
            model.seed = tm.at("seed").get<std::uint64_t>();
            model.sweeps_run = tm.at("sweeps_run").get<std::uint64_t>();
            for (std::uint32_t i = 0; i < model.vocab_terms.size(); ++i) {
                model.vocab[model.vocab_terms[i]] = i;
            }
            model.validate();
            fitted.topic_model = std::move(model);
        }
        fitted.classifier = classify::classifier_from_json(j.at("classifier"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed pipeline artifact: ") + e.what());
    }
    return fitted;
}

}  // namespace depdyn::pipeline
