#ifndef DEPDYN_PORTER_HPP
#define DEPDYN_PORTER_HPP

#include <string>

namespace depdyn::textprep {

// Classic Porter (1980) 5-step suffix stripper, matching the canonical C
// reference including its documented departures (words of length <= 2 are
// untouched, step-2 "bli"->"ble" and "logi"->"log").  Expects a lowercase
// token; characters outside a-z are treated as consonants.
std::string porter_stem(const std::string& token);

}  // namespace depdyn::textprep

#endif
