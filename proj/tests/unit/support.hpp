#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "trade/core.hpp"

namespace trade::test {

inline Detection det(FrameIndex frame, BoundingBox box, double conf = 0.9, std::string ref = {},
                     std::string video = "v") {
    static std::atomic<std::size_t> counter{0};
    Detection d;
    d.video_id = std::move(video);
    d.frame = frame;
    d.box = box;
    d.confidence = conf;
    d.seq = counter++;
    d.crop_ref = ref.empty() ? d.video_id + "_" + std::to_string(frame) + "_" + std::to_string(d.seq) : ref;
    return d;
}

inline Embedding unit(std::vector<double> v) { return Embedding::normalized(std::move(v)); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("trade_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
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
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace trade::test
