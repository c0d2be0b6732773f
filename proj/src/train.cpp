#include "ensda/train.hpp"

namespace ensda {

WindowDataset WindowDataset::from_trajectories(std::vector<Matrix> trajs, int window) {
    if (window < 1) throw ArgumentError("dataset: window must be >= 1");
    WindowDataset data;
    data.window = window;
    data.trajectories = std::move(trajs);
    for (std::size_t j = 0; j < data.trajectories.size(); ++j) {
        const long len = long(data.trajectories[j].cols());
        for (long t = 0; t + window < len; ++t)
            data.items.push_back({int(j), t});
    }
    return data;
}

namespace detail {

void gather_batch(const WindowDataset& data, std::span<const WindowDataset::Item> items,
                  std::vector<Matrix>& steps, Matrix& target) {
    const Eigen::Index d = data.state_dim();
    const Eigen::Index batch = Eigen::Index(items.size());
    steps.assign(std::size_t(data.window), Matrix(d, batch));
    target.resize(d, batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
        const auto& it = items[std::size_t(b)];
        const Matrix& traj = data.trajectories[std::size_t(it.traj)];
        for (int t = 0; t < data.window; ++t) steps[std::size_t(t)].col(b) = traj.col(it.t + t);
        target.col(b) = traj.col(it.t + data.window);
    }
}

void shuffle(std::vector<WindowDataset::Item>& items, RngStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.uniform_index(i)]);
}

}  // namespace detail

}  // namespace ensda
