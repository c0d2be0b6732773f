#include "ensda/deeponet.hpp"

namespace ensda {

namespace {

Matrix uniform_fan_in(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
    const double bound = 1.0 / std::sqrt(double(cols));
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            out(i, j) = bound * (2.0 * rng.uniform() - 1.0);
    return out;
}

std::vector<LstmLayerParams> init_lstm_stack(Eigen::Index input_dim,
                                             const std::vector<Eigen::Index>& hidden,
                                             RngStream& rng) {
    // borrow LstmModel's initializer, then keep only the recurrent layers
    LstmModel tmp = LstmModel::init(input_dim, 1, hidden, 1, rng);
    return std::move(tmp.layers);
}

}  // namespace

MlpParams MlpParams::init(const std::vector<Eigen::Index>& sizes, RngStream& rng) {
    if (sizes.size() < 2) throw ArgumentError("mlp init: need at least input and output size");
    MlpParams p;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        p.W.push_back(uniform_fan_in(sizes[l + 1], sizes[l], rng));
        p.b.push_back(Vector::Zero(sizes[l + 1]));
    }
    return p;
}

Matrix mlp_forward(const MlpParams& p, const Matrix& input, MlpCache* cache) {
    if (input.rows() != p.W.front().cols()) throw ArgumentError("mlp_forward: input size");
    if (cache != nullptr) {
        cache->input = input;
        cache->activations.clear();
    }
    Matrix h = input;
    for (std::size_t l = 0; l < p.W.size(); ++l) {
        h = (((p.W[l] * h).colwise() + p.b[l]).array().tanh()).matrix();
        if (cache != nullptr) cache->activations.push_back(h);
    }
    return h;
}

Matrix mlp_backward(const MlpParams& p, const MlpCache& cache, const Matrix& d_out,
                    MlpParams& grads) {
    Matrix dh = d_out;
    for (std::size_t l = p.W.size(); l-- > 0;) {
        const Matrix& act = cache.activations[l];
        const Matrix da = dh.cwiseProduct((1.0 - act.array().square()).matrix());
        const Matrix& below = l == 0 ? cache.input : cache.activations[l - 1];
        grads.W[l].noalias() += da * below.transpose();
        grads.b[l] += da.rowwise().sum();
        dh.noalias() = p.W[l].transpose() * da;
    }
    return dh;
}

RDeepOnetModel RDeepOnetModel::init(Eigen::Index n_grid, Eigen::Index latent_dim,
                                    const std::vector<Eigen::Index>& branch_hidden,
                                    const std::vector<Eigen::Index>& trunk_hidden,
                                    int history, RngStream& rng) {
    RDeepOnetModel m;
    m.history = history;
    m.branch_layers = init_lstm_stack(n_grid, branch_hidden, rng);
    m.branch_w = uniform_fan_in(latent_dim, branch_hidden.back(), rng);
    m.branch_b = Vector::Zero(latent_dim);
    std::vector<Eigen::Index> trunk_sizes;
    trunk_sizes.push_back(1);
    trunk_sizes.insert(trunk_sizes.end(), trunk_hidden.begin(), trunk_hidden.end());
    trunk_sizes.push_back(latent_dim);
    m.trunk = MlpParams::init(trunk_sizes, rng);
    m.grid = Vector::LinSpaced(n_grid, 0.0, double(n_grid - 1) / double(n_grid));
    return m;
}

RDeepOnetModel RDeepOnetModel::zeros_like(const RDeepOnetModel& other) {
    RDeepOnetModel z = other;
    z.for_each_tensor([](auto& t) { t.setZero(); });
    return z;
}

Matrix rdeeponet_forward_batch(const RDeepOnetModel& m, std::span<const Matrix> steps,
                               RDeepOnetCache* cache) {
    if (long(steps.size()) != m.history)
        throw ArgumentError("rdeeponet_forward: history length mismatch");
    if (steps[0].rows() != m.n_grid())
        throw ArgumentError("rdeeponet_forward: grid size mismatch");

    const Matrix top_h = lstm_stack_forward(m.branch_layers, steps,
                                            cache != nullptr ? &cache->branch_cells : nullptr);
    const Matrix beta = (m.branch_w * top_h).colwise() + m.branch_b;  // p x batch

    const Matrix locations = m.grid.transpose();  // 1 x n_grid
    MlpCache trunk_cache;
    const Matrix features =
        mlp_forward(m.trunk, locations, cache != nullptr ? &cache->trunk_cache : &trunk_cache);

    if (cache != nullptr) {
        cache->branch_top_h = top_h;
        cache->beta = beta;
        cache->trunk_features = cache->trunk_cache.activations.back();
        return cache->trunk_features.transpose() * beta;
    }
    return features.transpose() * beta;  // n_grid x batch
}

Vector rdeeponet_forward(const RDeepOnetModel& m, std::span<const Vector> history) {
    std::vector<Matrix> steps;
    steps.reserve(history.size());
    for (const auto& v : history) steps.push_back(v);
    return rdeeponet_forward_batch(m, steps);
}

void rdeeponet_backward_batch(const RDeepOnetModel& m, const RDeepOnetCache& cache,
                              const Matrix& d_out, RDeepOnetModel& grads) {
    // output = features^T beta: split the gradient between the two factors
    const Matrix d_beta = cache.trunk_features * d_out;         // p x batch
    const Matrix d_features = cache.beta * d_out.transpose();   // p x n_grid

    mlp_backward(m.trunk, cache.trunk_cache, d_features, grads.trunk);

    grads.branch_w.noalias() += d_beta * cache.branch_top_h.transpose();
    grads.branch_b += d_beta.rowwise().sum();
    const Matrix d_top_h = m.branch_w.transpose() * d_beta;
    lstm_stack_backward(m.branch_layers, cache.branch_cells, d_top_h, grads.branch_layers);
}

}  // namespace ensda
