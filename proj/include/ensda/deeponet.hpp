#pragma once

#include "ensda/lstm.hpp"

namespace ensda {

/// Fully connected stack with tanh after every layer.
struct MlpParams {
    std::vector<Matrix> W;
    std::vector<Vector> b;

    static MlpParams init(const std::vector<Eigen::Index>& sizes, RngStream& rng);

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        for (auto& w : W) fn(w);
        for (auto& v : b) fn(v);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        for (const auto& w : W) fn(w);
        for (const auto& v : b) fn(v);
    }
};

struct MlpCache {
    Matrix input;
    std::vector<Matrix> activations;  // post-tanh output of each layer
};

Matrix mlp_forward(const MlpParams& p, const Matrix& input, MlpCache* cache = nullptr);
/// Returns gradient w.r.t. the input; parameter gradients accumulate into grads.
Matrix mlp_backward(const MlpParams& p, const MlpCache& cache, const Matrix& d_out,
                    MlpParams& grads);

/// Recurrent operator network: an LSTM branch consumes a history window of
/// snapshots on the sensor grid and emits latent coefficients; a trunk maps
/// each query location to latent features; their dot product is the predicted
/// next snapshot. Sensor and query locations coincide.
struct RDeepOnetModel {
    std::vector<LstmLayerParams> branch_layers;
    Matrix branch_w;  // p x hidden, dense readout from the final hidden state
    Vector branch_b;
    MlpParams trunk;  // scalar location -> p features
    Vector grid;      // query locations, normalized to [0, 1)
    int history = 10;

    Eigen::Index n_grid() const { return grid.size(); }
    Eigen::Index latent_dim() const { return branch_w.rows(); }

    static RDeepOnetModel init(Eigen::Index n_grid, Eigen::Index latent_dim,
                               const std::vector<Eigen::Index>& branch_hidden,
                               const std::vector<Eigen::Index>& trunk_hidden, int history,
                               RngStream& rng);
    static RDeepOnetModel zeros_like(const RDeepOnetModel& other);

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        for (auto& layer : branch_layers) layer.for_each_tensor(fn);
        fn(branch_w);
        fn(branch_b);
        trunk.for_each_tensor(fn);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        for (const auto& layer : branch_layers) layer.for_each_tensor(fn);
        fn(branch_w);
        fn(branch_b);
        trunk.for_each_tensor(fn);
    }
};

struct RDeepOnetCache {
    std::vector<std::vector<LstmCellCache>> branch_cells;
    Matrix branch_top_h;  // hidden x batch
    Matrix beta;          // p x batch
    MlpCache trunk_cache;
    Matrix trunk_features;  // p x n_grid
};

/// steps: history snapshots, each n_grid x batch; returns n_grid x batch.
Matrix rdeeponet_forward_batch(const RDeepOnetModel& m, std::span<const Matrix> steps,
                               RDeepOnetCache* cache = nullptr);

Vector rdeeponet_forward(const RDeepOnetModel& m, std::span<const Vector> history);

void rdeeponet_backward_batch(const RDeepOnetModel& m, const RDeepOnetCache& cache,
                              const Matrix& d_out, RDeepOnetModel& grads);

}  // namespace ensda
