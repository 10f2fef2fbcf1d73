#ifndef DEPDYN_SYNTH_HPP
#define DEPDYN_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "depdyn/corpus.hpp"

namespace depdyn::synth {

// Seeded synthetic labeled corpus standing in for the unavailable labeled
// tweet sets.  Class-c documents draw tokens from their own class
// vocabulary with probability signal_strength, from the opposite class
// vocabulary with probability cross_noise, and from the shared noise
// vocabulary otherwise.  Emotion glyphs (invisible to TF-IDF, visible to
// the emotion lexicon) are planted with probability emotion_signal for the
// matching polarity and emotion_cross for the opposite one.
struct SyntheticSpec {
    std::size_t n_docs = 5000;
    double class_balance = 0.5;  // fraction labeled 1
    std::size_t class_vocab_size = 30;
    std::size_t noise_vocab_size = 60;
    std::size_t min_words = 8;   // >= 5 so the length filter passes
    std::size_t max_words = 18;
    double signal_strength = 0.28;
    double cross_noise = 0.10;
    double emotion_signal = 0.80;
    double emotion_cross = 0.05;
    std::string positive_glyph = "😭";  // planted in class-1 docs
    std::string negative_glyph = "😊";  // planted in class-0 docs
    std::vector<std::string> regions = {"RYDE", "NSYD", "WLBY"};
    Date start_date{2020, 1, 1};
    Date end_date{2020, 5, 22};
    std::uint64_t seed = 7;
};

std::vector<corpus::LabeledExample> gen_synthetic(const SyntheticSpec& spec);

}  // namespace depdyn::synth

#endif
