#ifndef DEPDYN_PIPELINE_HPP
#define DEPDYN_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depdyn/classify.hpp"
#include "depdyn/corpus.hpp"
#include "depdyn/evaluate.hpp"
#include "depdyn/lexicons.hpp"
#include "depdyn/textprep.hpp"
#include "depdyn/topics.hpp"
#include "depdyn/vectorize.hpp"

namespace depdyn::pipeline {

struct TfidfParams {
    std::size_t min_df = 5;
    std::size_t max_features = 50000;
};

struct TopicParams {
    std::size_t k = 25;
    double alpha = 2.0;
    double beta = 0.01;
    std::size_t sweeps = 1000;
    std::size_t fold_in_sweeps = 50;
};

struct ClassifierParams {
    classify::ClassifierKind kind = classify::ClassifierKind::LogReg;
    classify::LogRegHyper logreg;
    double gnb_var_epsilon = 0.0;     // <= 0: automatic floor
    double lindisc_shrinkage = 0.1;
    double threshold = 0.5;
};

enum class Protocol { Holdout, KFold };

struct EvaluationParams {
    Protocol protocol = Protocol::Holdout;
    double train_fraction = 0.75;
    std::size_t folds = 5;
};

struct PipelineConfig {
    vectorize::FeatureMode mode = vectorize::FeatureMode::MM_TFIDF;
    textprep::PreprocessConfig preprocess;
    TfidfParams tfidf;
    TopicParams topics;
    ClassifierParams classifier;
    EvaluationParams evaluation;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
};

struct LexiconSet {
    lexicons::EmotionLexicon emotion;
    lexicons::SymptomLexicons symptoms;
};

// Everything needed to score unseen documents.  The TF-IDF model is always
// fitted (it also bounds the topic-model vocabulary); the topic model exists
// only for modes with a dense block.
struct FittedPipeline {
    PipelineConfig config;
    LexiconSet lexicons;
    vectorize::TfidfModel tfidf;
    std::optional<topics::TopicModel> topic_model;
    classify::ClassifierModel classifier;

    std::size_t feature_dimension() const;

    // Feature vector for one preprocessed document.  doc_stream seeds the
    // fold-in inference substream (derive_seed(config.seed, doc_stream)).
    vectorize::FeatureVector features_for(const textprep::TokenDoc& doc,
                                          std::uint64_t doc_stream) const;

    void save(const std::string& path, const std::string& config_hash) const;
    static FittedPipeline load(const std::string& path);
};

// Preprocesses records, dropping the ones the filters reject.
struct PreprocessedCorpus {
    std::vector<textprep::TokenDoc> docs;
    std::vector<std::size_t> source_index;  // doc -> index into the input
    std::size_t filtered = 0;
};

PreprocessedCorpus preprocess_corpus(const std::vector<corpus::TweetRecord>& records,
                                     const std::set<std::string>& stopwords,
                                     const textprep::PreprocessConfig& config,
                                     std::size_t threads = 1);

// Fits TF-IDF, the topic model (when the mode has a dense block) and the
// classifier on the given documents.
FittedPipeline fit_pipeline(const std::vector<textprep::TokenDoc>& docs,
                            const std::vector<int>& labels, const PipelineConfig& config,
                            const LexiconSet& lexicons);

struct Prediction {
    std::string record_ref;
    double proba = 0.0;
    int label = 0;
};

std::vector<Prediction> predict_batch(const FittedPipeline& fitted,
                                      const std::vector<textprep::TokenDoc>& docs,
                                      std::size_t threads = 1);

struct FoldReport {
    std::size_t fold = 0;
    evaluate::MetricsReport report;
};

struct CrossValidationResult {
    std::vector<FoldReport> folds;
    evaluate::AggregateMetrics aggregate;
    std::size_t filtered = 0;  // examples dropped by preprocessing
};

// Stratified k-fold over full pipeline configurations; TF-IDF and topic
// models are fitted inside each fold on its training docs only.
CrossValidationResult cross_validate(const std::vector<corpus::LabeledExample>& examples,
                                     const PipelineConfig& config, const LexiconSet& lexicons,
                                     const std::set<std::string>& stopwords, std::size_t k,
                                     std::uint64_t seed);

struct HoldoutResult {
    evaluate::MetricsReport report;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t filtered = 0;
    FittedPipeline fitted;
};

HoldoutResult holdout_evaluate(const std::vector<corpus::LabeledExample>& examples,
                               const PipelineConfig& config, const LexiconSet& lexicons,
                               const std::set<std::string>& stopwords, double train_fraction,
                               std::uint64_t seed);

}  // namespace depdyn::pipeline

#endif
