#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef OOBLECK_CORPUS_DIR
#error "OOBLECK_CORPUS_DIR must point at the example corpus"
#endif

namespace oobleck::testing {

inline std::filesystem::path corpus_dir() { return OOBLECK_CORPUS_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Corpus module stems in sorted order.
inline std::vector<std::string> corpus_names() {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir())) {
        if (entry.path().extension() == ".visc") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

inline std::string corpus_source(const std::string& stem) { return read_file(corpus_dir() / (stem + ".visc")); }

}  // namespace oobleck::testing
