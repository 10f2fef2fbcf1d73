#include "depdyn/topics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "depdyn/errors.hpp"

namespace depdyn::topics {

double TopicModel::phi(std::size_t topic, std::size_t word) const {
    const double v = static_cast<double>(vocab_size());
    return (static_cast<double>(count(topic, word)) + beta) /
           (static_cast<double>(topic_totals[topic]) + v * beta);
}

std::vector<double> TopicModel::phi_row(std::size_t topic) const {
    std::vector<double> row(vocab_size());
    for (std::size_t v = 0; v < row.size(); ++v) row[v] = phi(topic, v);
    return row;
}

void TopicModel::validate() const {
    if (k == 0 || vocab_terms.empty()) throw FormatError("topic model is empty");
    if (topic_word_counts.size() != k * vocab_size() || topic_totals.size() != k) {
        throw FormatError("topic model count shapes are inconsistent");
    }
    for (std::size_t t = 0; t < k; ++t) {
        std::int64_t sum = 0;
        for (std::size_t v = 0; v < vocab_size(); ++v) {
            const std::int64_t c = count(t, v);
            if (c < 0) throw FormatError("negative topic-word count");
            sum += c;
        }
        if (sum != topic_totals[t]) {
            throw FormatError("topic total mismatch for topic " + std::to_string(t) + ": " +
                              std::to_string(sum) + " vs " + std::to_string(topic_totals[t]));
        }
    }
}

GibbsSampler::GibbsSampler(const std::vector<textprep::TokenDoc>& docs, const LdaParams& params)
    : k_(params.k),
      alpha_(params.alpha),
      beta_(params.beta),
      seed_(params.seed),
      rng_(params.seed) {
    if (params.k < 2) throw TrainError("topic count must be >= 2");
    if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
        throw TrainError("alpha and beta must be positive");
    }

    if (params.vocab) {
        std::set<std::string> uniq(params.vocab->begin(), params.vocab->end());
        vocab_terms_.assign(uniq.begin(), uniq.end());
    } else {
        std::set<std::string> uniq;
        for (const auto& d : docs) uniq.insert(d.tokens.begin(), d.tokens.end());
        vocab_terms_.assign(uniq.begin(), uniq.end());
    }
    for (std::uint32_t i = 0; i < vocab_terms_.size(); ++i) vocab_[vocab_terms_[i]] = i;
    if (vocab_terms_.empty()) throw TrainError("empty training corpus");

    n_docs_ = docs.size();
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& tok : docs[d].tokens) {
            const auto it = vocab_.find(tok);
            if (it == vocab_.end()) continue;
            token_word_.push_back(it->second);
            token_doc_.push_back(static_cast<std::uint32_t>(d));
        }
    }
    if (token_word_.empty()) throw TrainError("empty training corpus");
    if (k_ > token_word_.size()) {
        throw TrainError("topic count " + std::to_string(k_) + " exceeds total token count " +
                         std::to_string(token_word_.size()));
    }

    const std::size_t v = vocab_terms_.size();
    doc_topic_.assign(n_docs_ * k_, 0);
    topic_word_.assign(k_ * v, 0);
    topic_totals_.assign(k_, 0);
    token_topic_.resize(token_word_.size());
    cdf_.resize(k_);

    for (std::size_t i = 0; i < token_word_.size(); ++i) {
        const auto z = static_cast<std::uint32_t>(rng_.below(k_));
        token_topic_[i] = z;
        ++doc_topic_[token_doc_[i] * k_ + z];
        ++topic_word_[z * v + token_word_[i]];
        ++topic_totals_[z];
    }
}

void GibbsSampler::sample_token(std::size_t i) {
    const std::size_t v = vocab_terms_.size();
    const std::uint32_t w = token_word_[i];
    const std::uint32_t d = token_doc_[i];
    const std::uint32_t old = token_topic_[i];

    --doc_topic_[d * k_ + old];
    --topic_word_[old * v + w];
    --topic_totals_[old];

    const double vbeta = static_cast<double>(v) * beta_;
    double total = 0.0;
    for (std::size_t t = 0; t < k_; ++t) {
        const double word_part = (static_cast<double>(topic_word_[t * v + w]) + beta_) /
                                 (static_cast<double>(topic_totals_[t]) + vbeta);
        const double doc_part = static_cast<double>(doc_topic_[d * k_ + t]) + alpha_;
        total += word_part * doc_part;
        cdf_[t] = total;
    }
    const double u = rng_.uniform01() * total;
    std::size_t z = 0;
    while (z + 1 < k_ && u >= cdf_[z]) ++z;

    token_topic_[i] = static_cast<std::uint32_t>(z);
    ++doc_topic_[d * k_ + z];
    ++topic_word_[z * v + w];
    ++topic_totals_[z];
}

void GibbsSampler::run_sweep() {
    for (std::size_t i = 0; i < token_word_.size(); ++i) sample_token(i);
    ++sweeps_done_;
}

TopicModel GibbsSampler::model() const {
    TopicModel m;
    m.k = k_;
    m.alpha = alpha_;
    m.beta = beta_;
    m.vocab_terms = vocab_terms_;
    m.vocab = vocab_;
    m.topic_word_counts = topic_word_;
    m.topic_totals = topic_totals_;
    m.seed = seed_;
    m.sweeps_run = sweeps_done_;
    return m;
}

TopicModel lda_train(const std::vector<textprep::TokenDoc>& docs, const LdaParams& params) {
    if (params.sweeps < 1) throw TrainError("need at least one training sweep");
    GibbsSampler sampler(docs, params);
    for (std::size_t s = 0; s < params.sweeps; ++s) sampler.run_sweep();
    return sampler.model();
}

std::vector<double> lda_infer(const TopicModel& model, const textprep::TokenDoc& doc,
                              std::size_t fold_in_sweeps, std::uint64_t seed) {
    const std::size_t k = model.k;
    std::vector<double> theta(k, 1.0 / static_cast<double>(k));

    std::vector<std::uint32_t> words;
    for (const auto& tok : doc.tokens) {
        const auto it = model.vocab.find(tok);
        if (it != model.vocab.end()) words.push_back(it->second);
    }
    const double n = static_cast<double>(words.size());
    if (words.empty()) return theta;

    Rng rng(seed);
    const std::size_t v = model.vocab_size();
    const double vbeta = static_cast<double>(v) * model.beta;
    std::vector<std::int64_t> local(k, 0);
    std::vector<std::uint32_t> z(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        z[i] = static_cast<std::uint32_t>(rng.below(k));
        ++local[z[i]];
    }
    std::vector<double> cdf(k);
    for (std::size_t sweep = 0; sweep < fold_in_sweeps; ++sweep) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            --local[z[i]];
            double total = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                const double word_part =
                    (static_cast<double>(model.count(t, words[i])) + model.beta) /
                    (static_cast<double>(model.topic_totals[t]) + vbeta);
                const double doc_part = static_cast<double>(local[t]) + model.alpha;
                total += word_part * doc_part;
                cdf[t] = total;
            }
            const double u = rng.uniform01() * total;
            std::size_t t = 0;
            while (t + 1 < k && u >= cdf[t]) ++t;
            z[i] = static_cast<std::uint32_t>(t);
            ++local[t];
        }
    }
    const double denom = n + static_cast<double>(k) * model.alpha;
    for (std::size_t t = 0; t < k; ++t) {
        theta[t] = (static_cast<double>(local[t]) + model.alpha) / denom;
    }
    return theta;
}

std::vector<std::string> top_words(const TopicModel& model, std::size_t topic_index,
                                   std::size_t n) {
    if (topic_index >= model.k) {
        throw DimensionError("topic index " + std::to_string(topic_index) + " out of range (K=" +
                             std::to_string(model.k) + ")");
    }
    if (n < 1) throw DimensionError("top_words needs n >= 1");
    std::vector<std::size_t> order(model.vocab_size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::int64_t ca = model.count(topic_index, a);
        const std::int64_t cb = model.count(topic_index, b);
        if (ca != cb) return ca > cb;  // phi order == count order within a topic
        return model.vocab_terms[a] < model.vocab_terms[b];
    });
    const std::size_t take = std::min(n, order.size());
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(model.vocab_terms[order[i]]);
    return out;
}

void TopicModel::save(const std::string& path) const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["artifact"] = "topic_model";
    j["k"] = k;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["vocab"] = vocab_terms;
    j["topic_word_counts"] = topic_word_counts;
    j["topic_totals"] = topic_totals;
    j["seed"] = seed;
    j["sweeps_run"] = sweeps_run;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write topic model: " + path);
    out << j.dump(2) << '\n';
}

TopicModel TopicModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open topic model: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("artifact", "") != "topic_model") {
        throw FormatError("not a topic model artifact: " + path);
    }
    TopicModel m;
    try {
        m.k = j.at("k").get<std::size_t>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.vocab_terms = j.at("vocab").get<std::vector<std::string>>();
        m.topic_word_counts = j.at("topic_word_counts").get<std::vector<std::int64_t>>();
        m.topic_totals = j.at("topic_totals").get<std::vector<std::int64_t>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.sweeps_run = j.at("sweeps_run").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed topic model: ") + e.what());
    }
    for (std::uint32_t i = 0; i < m.vocab_terms.size(); ++i) m.vocab[m.vocab_terms[i]] = i;
    m.validate();
    return m;
}

}  // namespace depdyn::topics
