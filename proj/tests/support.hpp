#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ctrade/ctrade.hpp"

namespace ctrade::testing {

/// Fresh empty directory under the system temp path, removed on scope exit.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ctrade-" + tag + "-" + std::to_string(rd()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& child = {}) const {
        return child.empty() ? path_.string() : (path_ / child).string();
    }

  private:
    std::filesystem::path path_;
};

inline std::vector<CountryPair> synthetic_pairs(const SynthResult& s) {
    std::vector<CountryPair> out;
    for (std::size_t i = 0; i < s.countries.size(); ++i) {
        for (std::size_t j = i + 1; j < s.countries.size(); ++j) {
            out.emplace_back(s.countries[i].code, s.countries[j].code);
        }
    }
    return out;
}

} // namespace ctrade::testing
