#pragma once

#include "ensda/core.hpp"

#include <cstdint>

namespace ensda {

/// Counter-based random stream (Philox-4x32-10). A stream is addressed by
/// (seed, stream_id); equal addresses replay the identical sequence and
/// distinct stream ids are statistically independent, so per-member and
/// per-step streams can be derived without coordination.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Derive an independent child stream; deterministic in (this, child_id).
    RngStream fork(std::uint64_t child_id) const;

    std::uint32_t next_u32();
    double uniform();    // [0, 1), 53-bit
    double gaussian();   // N(0, 1), Box-Muller

    /// n independent N(mean, std^2) draws.
    Vector gaussian_vector(Eigen::Index n, double mean = 0.0, double std = 1.0);
    Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double mean = 0.0,
                           double std = 1.0);

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Fisher-Yates sample of k distinct indices from [0, n).
    std::vector<Eigen::Index> sample_without_replacement(Eigen::Index n, Eigen::Index k);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint32_t key0_, key1_;
    std::uint64_t counter_ = 0;
    std::uint32_t block_[4];
    int block_pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// n independent N(mean, std^2) draws; std must be nonnegative.
Vector gaussian_draw(RngStream& rng, Eigen::Index n, double mean, double std);

}  // namespace ensda
