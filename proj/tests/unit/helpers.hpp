#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "firebreak/harness.hpp"

namespace testing {

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() /
               ("firebreak_test_" + name + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    return dir;
}

// Hollow 3x3 square: the eight cells around its centre.
inline std::shared_ptr<const firebreak::BlockShape> ring_shape() {
    return std::make_shared<const firebreak::BlockShape>(
        "ring", std::vector<firebreak::Offset>{
                    {0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
}

inline bool is_subset(const std::vector<firebreak::CellIndex>& small,
                      const std::vector<firebreak::CellIndex>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace testing
