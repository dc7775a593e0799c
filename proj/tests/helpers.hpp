#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "isc3/constraints.hpp"
#include "isc3/instance.hpp"
#include "isc3/routing.hpp"

namespace testutil {

// The canonical benchmark scene shape: 10 stations, 5 base stations, 30 km
// square, demands 1..5, default ISC3 thresholds.
inline isc3::DeliveryInstance canonical_instance(std::uint64_t seed = 42, int n_stations = 10) {
    return isc3::generate_instance(seed, n_stations, 30.0, 5, 1, 5);
}

inline isc3::Models default_models() { return isc3::Models{}; }

inline isc3::Isc3Demands paper_demands() { return isc3::Isc3Demands{}; }

// Scratch file that removes itself.
class TempFile {
public:
    explicit TempFile(const std::string& stem) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 (stem + "." + std::to_string(::getpid()) + "." + std::to_string(counter++)))
                    .string();
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }
    void write(const std::string& content) const {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path_, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

private:
    std::string path_;
};

}  // namespace testutil
