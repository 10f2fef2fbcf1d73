#include "depdyn/artifact.hpp"

#include <cstdio>
#include <fstream>

#include "depdyn/errors.hpp"

namespace depdyn::artifact {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

std::string config_hash(const nlohmann::json& config) {
    return fnv1a64_hex(config.dump());
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp);
        out << content;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

void write_artifact_json(const std::string& path, nlohmann::json doc,
                         const std::string& config_hash_hex, std::uint64_t seed) {
    doc["config_hash"] = config_hash_hex;
    doc["seed"] = seed;
    atomic_write_file(path, doc.dump(2) + "\n");
}

}  // namespace depdyn::artifact
