#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "hema/model.hpp"

namespace fixture {

inline hema::Model single_term(double period, double lambda_r, double m, double n, double b, double delay = 0.0) {
    const auto c = [period](double v) { return hema::PeriodicFn::constant(period, v); };
    return hema::Model({{1.0, m, n, c(lambda_r), c(delay), c(delay)}}, c(b));
}

inline std::filesystem::path models_dir() { return HEMA_MODELS_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("hema_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p;
    }

 private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture
