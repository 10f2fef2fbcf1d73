#ifndef DEPDYN_TOPICS_HPP
#define DEPDYN_TOPICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depdyn/rng.hpp"
#include "depdyn/textprep.hpp"

namespace depdyn::topics {

struct LdaParams {
    std::size_t k = 25;
    double alpha = 2.0;  // 50 / K at the default K
    double beta = 0.01;
    std::size_t sweeps = 1000;
    std::uint64_t seed = 0;
    // When set, restricts the model vocabulary (out-of-list tokens are
    // dropped); otherwise every distinct training token is used.
    std::optional<std::vector<std::string>> vocab;
};

struct TopicModel {
    std::size_t k = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::string> vocab_terms;         // index -> term
    std::map<std::string, std::uint32_t> vocab;   // term -> index
    std::vector<std::int64_t> topic_word_counts;  // flat K x V
    std::vector<std::int64_t> topic_totals;       // K
    std::uint64_t seed = 0;
    std::uint64_t sweeps_run = 0;

    std::size_t vocab_size() const { return vocab_terms.size(); }
    std::int64_t count(std::size_t topic, std::size_t word) const {
        return topic_word_counts[topic * vocab_size() + word];
    }
    // phi_k(v) = (count + beta) / (total + V*beta); each row sums to 1.
    double phi(std::size_t topic, std::size_t word) const;
    std::vector<double> phi_row(std::size_t topic) const;

    // Count conservation and non-negativity; throws FormatError on violation.
    void validate() const;

    void save(const std::string& path) const;
    static TopicModel load(const std::string& path);
};

// Collapsed Gibbs sampler exposed sweep-by-sweep so callers can observe
// invariants between sweeps; lda_train is the run-to-completion wrapper.
class GibbsSampler {
public:
    GibbsSampler(const std::vector<textprep::TokenDoc>& docs, const LdaParams& params);

    void run_sweep();
    std::size_t sweeps_done() const { return sweeps_done_; }
    std::size_t total_tokens() const { return token_doc_.size(); }
    const std::vector<std::int64_t>& topic_totals() const { return topic_totals_; }
    TopicModel model() const;

private:
    void sample_token(std::size_t i);

    std::size_t k_;
    double alpha_;
    double beta_;
    std::uint64_t seed_;
    std::size_t sweeps_done_ = 0;
    std::vector<std::string> vocab_terms_;
    std::map<std::string, std::uint32_t> vocab_;
    // token stream: word id, owning doc, current topic
    std::vector<std::uint32_t> token_word_;
    std::vector<std::uint32_t> token_doc_;
    std::vector<std::uint32_t> token_topic_;
    std::size_t n_docs_ = 0;
    std::vector<std::int64_t> doc_topic_;         // flat D x K
    std::vector<std::int64_t> topic_word_;        // flat K x V
    std::vector<std::int64_t> topic_totals_;      // K
    std::vector<double> cdf_;                     // scratch
    Rng rng_;
};

TopicModel lda_train(const std::vector<textprep::TokenDoc>& docs, const LdaParams& params);

// Fold-in inference: samples the document's in-vocabulary tokens against
// frozen topic-word counts; theta_k = (n_k + alpha) / (n + K*alpha).
// Out-of-vocabulary tokens are ignored; a document with none yields the
// uniform prior mean.
std::vector<double> lda_infer(const TopicModel& model, const textprep::TokenDoc& doc,
                              std::size_t fold_in_sweeps, std::uint64_t seed);

// Top-n terms of one topic by phi, ties lexicographic; n is clamped to V.
std::vector<std::string> top_words(const TopicModel& model, std::size_t topic_index,
                                   std::size_t n);

}  // namespace depdyn::topics

#endif
