#include "ensda/rng.hpp"

#include <cmath>
#include <numbers>

namespace ensda {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

void philox4x32_10(std::uint64_t counter, std::uint64_t stream, std::uint32_t key0,
                   std::uint32_t key1, std::uint32_t out[4]) {
    std::uint32_t c0 = std::uint32_t(counter);
    std::uint32_t c1 = std::uint32_t(counter >> 32);
    std::uint32_t c2 = std::uint32_t(stream);
    std::uint32_t c3 = std::uint32_t(stream >> 32);
    std::uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(kM0) * c0;
        const std::uint64_t p1 = std::uint64_t(kM1) * c2;
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kW0;
        k1 += kW1;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t key = splitmix64(seed);
    key0_ = std::uint32_t(key);
    key1_ = std::uint32_t(key >> 32);
}

RngStream RngStream::fork(std::uint64_t child_id) const {
    return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(child_id + 0x51ED2701ull)));
}

std::uint32_t RngStream::next_u32() {
    if (block_pos_ == 4) {
        philox4x32_10(counter_++, stream_id_, key0_, key1_, block_);
        block_pos_ = 0;
    }
    return block_[block_pos_++];
}

double RngStream::uniform() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t bits = (hi << 32) | lo;
    return double(bits >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Vector RngStream::gaussian_vector(Eigen::Index n, double mean, double std) {
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = mean + std * gaussian();
    return out;
}

Matrix RngStream::gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double mean,
                                  double std) {
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = mean + std * gaussian();
    return out;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    // rejection sampling keeps the draw exactly uniform
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t bits = (hi << 32) | lo;
        if (bits < limit) return bits % n;
    }
}

std::vector<Eigen::Index> RngStream::sample_without_replacement(Eigen::Index n,
                                                                Eigen::Index k) {
    if (k > n) throw ArgumentError("sample_without_replacement: k > n");
    std::vector<Eigen::Index> pool(n);
    for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto j = i + Eigen::Index(uniform_index(std::uint64_t(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

Vector gaussian_draw(RngStream& rng, Eigen::Index n, double mean, double std) {
    if (std < 0.0) throw ArgumentError("gaussian_draw: negative std");
    if (n < 1) throw ArgumentError("gaussian_draw: n must be >= 1");
    if (std == 0.0) return Vector::Constant(n, mean);
    return rng.gaussian_vector(n, mean, std);
}

}  // namespace ensda
