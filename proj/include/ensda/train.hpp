#pragma once

#include "ensda/core.hpp"
#include "ensda/rng.hpp"

#include <span>
#include <vector>

namespace ensda {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam over any model type exposing for_each_tensor; the moment accumulators
/// are model-shaped mirrors so shapes track the parameters by construction.
template <typename Model>
class Adam {
public:
    Adam(const Model& model, AdamConfig cfg = {})
        : cfg_(cfg), m1_(Model::zeros_like(model)), m2_(Model::zeros_like(model)) {}

    void step(Model& params, const Model& grads) {
        ++t_;
        const double corr1 = 1.0 - std::pow(cfg_.beta1, double(t_));
        const double corr2 = 1.0 - std::pow(cfg_.beta2, double(t_));
        std::vector<double*> ps, m1s, m2s;
        std::vector<const double*> gs;
        std::vector<Eigen::Index> sizes;
        params.for_each_tensor([&](auto& t) {
            ps.push_back(t.data());
            sizes.push_back(t.size());
        });
        grads.for_each_tensor([&](const auto& t) { gs.push_back(t.data()); });
        m1_.for_each_tensor([&](auto& t) { m1s.push_back(t.data()); });
        m2_.for_each_tensor([&](auto& t) { m2s.push_back(t.data()); });
        for (std::size_t k = 0; k < ps.size(); ++k) {
            for (Eigen::Index i = 0; i < sizes[k]; ++i) {
                const double g = gs[k][i];
                m1s[k][i] = cfg_.beta1 * m1s[k][i] + (1.0 - cfg_.beta1) * g;
                m2s[k][i] = cfg_.beta2 * m2s[k][i] + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m1s[k][i] / corr1;
                const double vhat = m2s[k][i] / corr2;
                ps[k][i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

    long step_count() const { return t_; }

private:
    AdamConfig cfg_;
    Model m1_, m2_;
    long t_ = 0;
};

/// Scale all gradients so their global l2 norm is at most max_norm.
template <typename Model>
void clip_global_norm(Model& grads, double max_norm) {
    double sq = 0.0;
    grads.for_each_tensor([&](const auto& t) { sq += t.squaredNorm(); });
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        grads.for_each_tensor([&](auto& t) { t *= scale; });
    }
}

// ---- supervised window dataset ---------------------------------------------

/// Trajectories plus (trajectory, offset) items; item (j, t) pairs the window
/// [t, t+window) with the target state at t+window.
struct WindowDataset {
    std::vector<Matrix> trajectories;  // each d x (length+1)
    int window = 0;

    struct Item {
        int traj;
        long t;
    };
    std::vector<Item> items;

    Eigen::Index state_dim() const { return trajectories.front().rows(); }

    /// Enumerate every admissible window of every trajectory.
    static WindowDataset from_trajectories(std::vector<Matrix> trajs, int window);
};

struct TrainConfig {
    int epochs = 30;
    int batch_size = 500;
    double clip_norm = 5.0;
    AdamConfig adam;
};

struct TrainTrace {
    std::vector<double> epoch_mse;
};

namespace detail {

void gather_batch(const WindowDataset& data, std::span<const WindowDataset::Item> items,
                  std::vector<Matrix>& steps, Matrix& target);

void shuffle(std::vector<WindowDataset::Item>& items, RngStream& rng);

/// One pass over the dataset; returns the epoch-mean MSE.
template <typename Model, typename Forward, typename Backward>
double run_epoch(Model& model, Adam<Model>& opt, const WindowDataset& data,
                 std::vector<WindowDataset::Item>& items, const TrainConfig& cfg,
                 RngStream& rng, int epoch, Forward&& forward, Backward&& backward) {
    shuffle(items, rng);
    double loss_sum = 0.0;
    long value_count = 0;
    std::vector<Matrix> steps;
    Matrix target;
    for (std::size_t begin = 0; begin < items.size(); begin += std::size_t(cfg.batch_size)) {
        const std::size_t end = std::min(items.size(), begin + std::size_t(cfg.batch_size));
        const std::span<const WindowDataset::Item> batch{items.data() + begin, end - begin};
        gather_batch(data, batch, steps, target);

        auto [pred, cache] = forward(model, steps);
        const Matrix diff = pred - target;
        const double mse = diff.squaredNorm() / double(diff.size());
        if (!std::isfinite(mse))
            throw DivergedError("training diverged (epoch " + std::to_string(epoch) +
                                ", batch " + std::to_string(begin / cfg.batch_size) + ")");
        loss_sum += mse * double(diff.size());
        value_count += diff.size();

        if (cfg.adam.lr != 0.0) {
            Model grads = Model::zeros_like(model);
            const Matrix d_out = 2.0 * diff / double(diff.size());
            backward(model, cache, d_out, grads);
            clip_global_norm(grads, cfg.clip_norm);
            opt.step(model, grads);
        }
    }
    return loss_sum / double(value_count);
}

}  // namespace detail

/// Mini-batch Adam on the MSE loss. Deterministic given the rng (which drives
/// only the shuffle order). Throws DivergedError on a non-finite loss.
template <typename Model, typename Forward, typename Backward>
TrainTrace train_supervised(Model& model, const WindowDataset& data, const TrainConfig& cfg,
                            RngStream& rng, Forward&& forward, Backward&& backward) {
    if (data.items.empty()) throw ArgumentError("train: empty dataset");
    Adam<Model> opt(model, cfg.adam);
    auto items = data.items;
    TrainTrace trace;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch)
        trace.epoch_mse.push_back(
            detail::run_epoch(model, opt, data, items, cfg, rng, epoch, forward, backward));
    return trace;
}

/// Sequential per-dataset schedule sharing one optimizer state: cfg.epochs
/// passes over each dataset in order before moving to the next.
template <typename Model, typename Forward, typename Backward>
TrainTrace train_sequential(Model& model, std::span<const WindowDataset> datasets,
                            const TrainConfig& cfg, RngStream& rng, Forward&& forward,
                            Backward&& backward) {
    if (datasets.empty()) throw ArgumentError("train: no datasets");
    Adam<Model> opt(model, cfg.adam);
    TrainTrace trace;
    int epoch = 0;
    for (const auto& data : datasets) {
        auto items = data.items;
        for (int e = 0; e < cfg.epochs; ++e, ++epoch)
            trace.epoch_mse.push_back(
                detail::run_epoch(model, opt, data, items, cfg, rng, epoch, forward, backward));
    }
    return trace;
}

}  // namespace ensda
