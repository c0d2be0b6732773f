#pragma once

#include "ensda/deeponet.hpp"
#include "ensda/lstm.hpp"
#include "ensda/train.hpp"

#include <memory>

namespace ensda {

/// Type-erased one-step forecast model f: K past states -> next state.
class Surrogate {
public:
    virtual ~Surrogate() = default;
    virtual Eigen::Index state_dim() const = 0;
    virtual int window() const = 0;
    virtual std::string kind() const = 0;

    /// steps: window-length sequence of (d x batch) matrices, one prediction
    /// per column.
    virtual Matrix predict_batch(std::span<const Matrix> steps) const = 0;

    Vector predict(std::span<const Vector> window_states) const;
};

class LstmSurrogate final : public Surrogate {
public:
    explicit LstmSurrogate(LstmModel m) : model(std::move(m)) {}
    Eigen::Index state_dim() const override { return model.output_dim(); }
    int window() const override { return model.window; }
    std::string kind() const override { return "lstm"; }
    Matrix predict_batch(std::span<const Matrix> steps) const override {
        return lstm_forward_batch(model, steps);
    }

    LstmModel model;
};

class RDeepOnetSurrogate final : public Surrogate {
public:
    explicit RDeepOnetSurrogate(RDeepOnetModel m) : model(std::move(m)) {}
    Eigen::Index state_dim() const override { return model.n_grid(); }
    int window() const override { return model.history; }
    std::string kind() const override { return "rdeeponet"; }
    Matrix predict_batch(std::span<const Matrix> steps) const override {
        return rdeeponet_forward_batch(model, steps);
    }

    RDeepOnetModel model;
};

/// One-step prediction conditioned on the true trailing window; k indexes the
/// state being predicted, so the window is true_states[k-K, k).
Vector predict_ssp(const Surrogate& model, std::span<const Vector> true_states, long k);

/// Autoregressive rollout of n_steps predictions seeded by a true window.
/// Throws DivergedError (with the step index) on a non-finite prediction.
std::vector<Vector> predict_ltp_rollout(const Surrogate& model,
                                        std::span<const Vector> seed_window, long n_steps);

TrainTrace train_lstm(LstmModel& model, const WindowDataset& data, const TrainConfig& cfg,
                      RngStream& rng);
TrainTrace train_rdeeponet(RDeepOnetModel& model, std::span<const WindowDataset> datasets,
                           const TrainConfig& cfg, RngStream& rng);

}  // namespace ensda
