#include "ensda/surrogate.hpp"

namespace ensda {

Vector Surrogate::predict(std::span<const Vector> window_states) const {
    std::vector<Matrix> steps;
    steps.reserve(window_states.size());
    for (const auto& v : window_states) steps.push_back(v);
    return predict_batch(steps);
}

Vector predict_ssp(const Surrogate& model, std::span<const Vector> true_states, long k) {
    const int K = model.window();
    if (k < K) throw ArgumentError("predict_ssp: k must be >= window length");
    if (k > long(true_states.size()))
        throw ArgumentError("predict_ssp: k exceeds available states");
    return model.predict(true_states.subspan(std::size_t(k - K), std::size_t(K)));
}

std::vector<Vector> predict_ltp_rollout(const Surrogate& model,
                                        std::span<const Vector> seed_window, long n_steps) {
    const int K = model.window();
    if (long(seed_window.size()) != K)
        throw ArgumentError("predict_ltp_rollout: seed window length mismatch");
    std::vector<Vector> window(seed_window.begin(), seed_window.end());
    std::vector<Vector> out;
    out.reserve(std::size_t(n_steps));
    for (long s = 0; s < n_steps; ++s) {
        Vector next = model.predict(window);
        if (!next.allFinite())
            throw DivergedError("ltp rollout diverged at step " + std::to_string(s));
        out.push_back(next);
        window.erase(window.begin());
        window.push_back(out.back());
    }
    return out;
}

TrainTrace train_lstm(LstmModel& model, const WindowDataset& data, const TrainConfig& cfg,
                      RngStream& rng) {
    if (data.window != model.window)
        throw ArgumentError("train_lstm: dataset window does not match the model");
    auto forward = [](const LstmModel& m, std::span<const Matrix> steps) {
        LstmForwardCache cache;
        Matrix pred = lstm_forward_batch(m, steps, &cache);
        return std::pair{std::move(pred), std::move(cache)};
    };
    auto backward = [](const LstmModel& m, const LstmForwardCache& cache, const Matrix& d_out,
                       LstmModel& grads) { lstm_backward_batch(m, cache, d_out, grads); };
    return train_supervised(model, data, cfg, rng, forward, backward);
}

TrainTrace train_rdeeponet(RDeepOnetModel& model, std::span<const WindowDataset> datasets,
                           const TrainConfig& cfg, RngStream& rng) {
    for (const auto& data : datasets)
        if (data.window != model.history)
            throw ArgumentError("train_rdeeponet: dataset window does not match the model");
    auto forward = [](const RDeepOnetModel& m, std::span<const Matrix> steps) {
        RDeepOnetCache cache;
        Matrix pred = rdeeponet_forward_batch(m, steps, &cache);
        return std::pair{std::move(pred), std::move(cache)};
    };
    auto backward = [](const RDeepOnetModel& m, const RDeepOnetCache& cache,
                       const Matrix& d_out,
                       RDeepOnetModel& grads) { rdeeponet_backward_batch(m, cache, d_out, grads); };
    return train_sequential(model, datasets, cfg, rng, forward, backward);
}

}  // namespace ensda
