#include "depdyn/synth.hpp"

#include <cmath>
#include <cstdio>

#include "depdyn/errors.hpp"
#include "depdyn/rng.hpp"

namespace depdyn::synth {

namespace {

std::vector<std::string> make_vocab(const char* prefix, std::size_t n) {
    std::vector<std::string> words;
    words.reserve(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
        words.emplace_back(buf);
    }
    return words;
}

void validate(const SyntheticSpec& spec) {
    if (spec.n_docs < 2) throw TrainError("synthetic spec needs >= 2 documents");
    if (!(spec.class_balance > 0.0 && spec.class_balance < 1.0)) {
        throw TrainError("class_balance must be in (0,1)");
    }
    if (spec.min_words < 5 || spec.max_words < spec.min_words) {
        throw TrainError("need 5 <= min_words <= max_words");
    }
    if (spec.class_vocab_size == 0 || spec.noise_vocab_size == 0) {
        throw TrainError("vocabulary sizes must be positive");
    }
    if (spec.regions.empty()) throw TrainError("need at least one region");
    for (const double p :
         {spec.signal_strength, spec.cross_noise, spec.emotion_signal, spec.emotion_cross}) {
        if (p < 0.0 || p > 1.0) throw TrainError("probabilities must be in [0,1]");
    }
    if (spec.signal_strength + spec.cross_noise > 1.0) {
        throw TrainError("signal_strength + cross_noise must be <= 1");
    }
    if (!(spec.start_date <= spec.end_date)) throw TrainError("start_date after end_date");
}

}  // namespace

std::vector<corpus::LabeledExample> gen_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    const auto class1_vocab = make_vocab("siga", spec.class_vocab_size);
    const auto class0_vocab = make_vocab("sigb", spec.class_vocab_size);
    const auto noise_vocab = make_vocab("noise", spec.noise_vocab_size);

    const std::size_t n_pos = static_cast<std::size_t>(
        std::llround(spec.class_balance * static_cast<double>(spec.n_docs)));
    const std::int64_t day_lo = spec.start_date.day_number();
    const std::int64_t day_hi = spec.end_date.day_number();

    Rng rng(spec.seed);
    std::vector<corpus::LabeledExample> out;
    out.reserve(spec.n_docs);
    char idbuf[24];
    for (std::size_t i = 0; i < spec.n_docs; ++i) {
        const int label = i < n_pos ? 1 : 0;
        const auto& own = label == 1 ? class1_vocab : class0_vocab;
        const auto& other = label == 1 ? class0_vocab : class1_vocab;

        const std::size_t len =
            spec.min_words + static_cast<std::size_t>(
                                 rng.below(spec.max_words - spec.min_words + 1));
        std::string text;
        for (std::size_t t = 0; t < len; ++t) {
            const double u = rng.uniform01();
            const std::string* word = nullptr;
            if (u < spec.signal_strength) {
                word = &own[rng.below(own.size())];
            } else if (u < spec.signal_strength + spec.cross_noise) {
                word = &other[rng.below(other.size())];
            } else {
                word = &noise_vocab[rng.below(noise_vocab.size())];
            }
            if (!text.empty()) text.push_back(' ');
            text += *word;
        }
        if (rng.uniform01() < spec.emotion_signal) {
            text.push_back(' ');
            text += label == 1 ? spec.positive_glyph : spec.negative_glyph;
        }
        if (rng.uniform01() < spec.emotion_cross) {
            text.push_back(' ');
            text += label == 1 ? spec.negative_glyph : spec.positive_glyph;
        }

        corpus::TweetRecord rec;
        std::snprintf(idbuf, sizeof idbuf, "syn%06zu", i);
        rec.id = idbuf;
        const std::int64_t day =
            day_lo + static_cast<std::int64_t>(rng.below(
                         static_cast<std::uint64_t>(day_hi - day_lo + 1)));
        const std::int64_t sec = static_cast<std::int64_t>(rng.below(86400));
        rec.created_at = UtcTime{day * 86400 + sec};
        rec.region_id = spec.regions[rng.below(spec.regions.size())];
        rec.lang = "en";
        rec.text = std::move(text);
        out.push_back({std::move(rec), label});
    }
    return out;
}

}  // namespace depdyn::synth
