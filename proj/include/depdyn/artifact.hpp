#ifndef DEPDYN_ARTIFACT_HPP
#define DEPDYN_ARTIFACT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

namespace depdyn::artifact {

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

// Hash of the canonical (sorted-key) serialization; embedded in artifacts
// for provenance.
std::string config_hash(const nlohmann::json& config);

// Writes to a temp file in the target directory and renames into place, so
// readers never see a partial artifact.
void atomic_write_file(const std::string& path, const std::string& content);

// Adds {"config_hash", "seed"} provenance and writes atomically.
void write_artifact_json(const std::string& path, nlohmann::json doc,
                         const std::string& config_hash_hex, std::uint64_t seed);

}  // namespace depdyn::artifact

#endif
