#include "ensda/lstm.hpp"

namespace ensda {

namespace {

Matrix sigmoid(Matrix z) {
    return Matrix((1.0 + (-z.array()).exp()).inverse());
}

Matrix uniform_fan_in(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
    const double bound = 1.0 / std::sqrt(double(cols));
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            out(i, j) = bound * (2.0 * rng.uniform() - 1.0);
    return out;
}

}  // namespace

LstmLayerParams LstmLayerParams::zeros(Eigen::Index input, Eigen::Index hidden) {
    LstmLayerParams p;
    p.W_i = p.W_f = p.W_c = p.W_o = Matrix::Zero(hidden, input);
    p.U_i = p.U_f = p.U_c = p.U_o = Matrix::Zero(hidden, hidden);
    p.b_i = p.b_f = p.b_c = p.b_o = Vector::Zero(hidden);
    return p;
}

void lstm_cell_forward(const LstmLayerParams& p, const Matrix& x, const Matrix& h_prev,
                       const Matrix& c_prev, Matrix& h_out, Matrix& c_out,
                       LstmCellCache* cache) {
    if (x.rows() != p.input_size() || h_prev.rows() != p.hidden_size() ||
        c_prev.rows() != p.hidden_size() || x.cols() != h_prev.cols() ||
        x.cols() != c_prev.cols())
        throw ArgumentError("lstm_cell_forward: shape mismatch");

    const Matrix i = sigmoid((p.W_i * x + p.U_i * h_prev).colwise() + p.b_i);
    const Matrix f = sigmoid((p.W_f * x + p.U_f * h_prev).colwise() + p.b_f);
    const Matrix g = Matrix(((p.W_c * x + p.U_c * h_prev).colwise() + p.b_c).array().tanh());
    const Matrix o = sigmoid((p.W_o * x + p.U_o * h_prev).colwise() + p.b_o);

    c_out = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    const Matrix tanh_c = c_out.array().tanh().matrix();
    h_out = o.cwiseProduct(tanh_c);

    if (cache != nullptr) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->c_prev = c_prev;
        cache->i = i;
        cache->f = f;
        cache->g = g;
        cache->o = o;
        cache->c = c_out;
        cache->tanh_c = tanh_c;
    }
}

void lstm_cell_backward(const LstmLayerParams& p, const LstmCellCache& cc, const Matrix& dh,
                        const Matrix& dc_in, LstmLayerParams& grads, Matrix& dx,
                        Matrix& dh_prev, Matrix& dc_prev) {
    const Matrix d_o = dh.cwiseProduct(cc.tanh_c);
    const Matrix dc =
        dc_in + dh.cwiseProduct(cc.o).cwiseProduct((1.0 - cc.tanh_c.array().square()).matrix());
    const Matrix d_i = dc.cwiseProduct(cc.g);
    const Matrix d_f = dc.cwiseProduct(cc.c_prev);
    const Matrix d_g = dc.cwiseProduct(cc.i);
    dc_prev = dc.cwiseProduct(cc.f);

    // pre-activation gradients
    const Matrix da_i = d_i.cwiseProduct(cc.i).cwiseProduct((1.0 - cc.i.array()).matrix());
    const Matrix da_f = d_f.cwiseProduct(cc.f).cwiseProduct((1.0 - cc.f.array()).matrix());
    const Matrix da_o = d_o.cwiseProduct(cc.o).cwiseProduct((1.0 - cc.o.array()).matrix());
    const Matrix da_g = d_g.cwiseProduct((1.0 - cc.g.array().square()).matrix());

    grads.W_i.noalias() += da_i * cc.x.transpose();
    grads.W_f.noalias() += da_f * cc.x.transpose();
    grads.W_c.noalias() += da_g * cc.x.transpose();
    grads.W_o.noalias() += da_o * cc.x.transpose();
    grads.U_i.noalias() += da_i * cc.h_prev.transpose();
    grads.U_f.noalias() += da_f * cc.h_prev.transpose();
    grads.U_c.noalias() += da_g * cc.h_prev.transpose();
    grads.U_o.noalias() += da_o * cc.h_prev.transpose();
    grads.b_i += da_i.rowwise().sum();
    grads.b_f += da_f.rowwise().sum();
    grads.b_c += da_g.rowwise().sum();
    grads.b_o += da_o.rowwise().sum();

    dx.noalias() = p.W_i.transpose() * da_i;
    dx.noalias() += p.W_f.transpose() * da_f;
    dx.noalias() += p.W_c.transpose() * da_g;
    dx.noalias() += p.W_o.transpose() * da_o;

    dh_prev.noalias() = p.U_i.transpose() * da_i;
    dh_prev.noalias() += p.U_f.transpose() * da_f;
    dh_prev.noalias() += p.U_c.transpose() * da_g;
    dh_prev.noalias() += p.U_o.transpose() * da_o;
}

LstmModel LstmModel::init(Eigen::Index input_dim, Eigen::Index output_dim,
                          const std::vector<Eigen::Index>& hidden_sizes, int window,
                          RngStream& rng) {
    if (hidden_sizes.empty()) throw ArgumentError("lstm init: no layers");
    if (window < 1) throw ArgumentError("lstm init: window must be >= 1");
    LstmModel m;
    m.window = window;
    Eigen::Index in = input_dim;
    for (const Eigen::Index hidden : hidden_sizes) {
        LstmLayerParams p;
        p.W_i = uniform_fan_in(hidden, in, rng);
        p.W_f = uniform_fan_in(hidden, in, rng);
        p.W_c = uniform_fan_in(hidden, in, rng);
        p.W_o = uniform_fan_in(hidden, in, rng);
        p.U_i = uniform_fan_in(hidden, hidden, rng);
        p.U_f = uniform_fan_in(hidden, hidden, rng);
        p.U_c = uniform_fan_in(hidden, hidden, rng);
        p.U_o = uniform_fan_in(hidden, hidden, rng);
        p.b_i = Vector::Zero(hidden);
        p.b_f = Vector::Ones(hidden);  // bias toward remembering early in training
        p.b_c = Vector::Zero(hidden);
        p.b_o = Vector::Zero(hidden);
        m.layers.push_back(std::move(p));
        in = hidden;
    }
    m.head_w = uniform_fan_in(output_dim, in, rng);
    m.head_b = Vector::Zero(output_dim);
    return m;
}

LstmModel LstmModel::zeros_like(const LstmModel& other) {
    LstmModel z = other;
    z.for_each_tensor([](auto& t) { t.setZero(); });
    return z;
}

Matrix lstm_stack_forward(std::span<const LstmLayerParams> layers,
                          std::span<const Matrix> steps,
                          std::vector<std::vector<LstmCellCache>>* cells) {
    const Eigen::Index batch = steps[0].cols();
    if (cells != nullptr) {
        cells->assign(layers.size(), {});
        for (auto& per_layer : *cells) per_layer.resize(steps.size());
    }
    std::vector<Matrix> inputs(steps.begin(), steps.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& p = layers[l];
        Matrix h = Matrix::Zero(p.hidden_size(), batch);
        Matrix c = Matrix::Zero(p.hidden_size(), batch);
        for (std::size_t t = 0; t < inputs.size(); ++t) {
            Matrix h_next, c_next;
            lstm_cell_forward(p, inputs[t], h, c, h_next, c_next,
                              cells != nullptr ? &(*cells)[l][t] : nullptr);
            h = std::move(h_next);
            c = std::move(c_next);
            inputs[t] = h;  // hidden sequence feeds the next layer
        }
    }
    return inputs.back();
}

void lstm_stack_backward(std::span<const LstmLayerParams> layers,
                         const std::vector<std::vector<LstmCellCache>>& cells,
                         const Matrix& d_top_h, std::span<LstmLayerParams> grads) {
    const std::size_t K = cells.front().size();
    const Eigen::Index batch = d_top_h.cols();

    // gradient flowing into each layer's hidden output per time step
    std::vector<Matrix> dh_above(K);
    for (std::size_t t = 0; t + 1 < K; ++t)
        dh_above[t] = Matrix::Zero(layers.back().hidden_size(), batch);
    dh_above[K - 1] = d_top_h;

    for (std::size_t li = layers.size(); li-- > 0;) {
        const auto& p = layers[li];
        std::vector<Matrix> dx(K);
        Matrix dh_next = Matrix::Zero(p.hidden_size(), batch);
        Matrix dc_next = Matrix::Zero(p.hidden_size(), batch);
        for (std::size_t t = K; t-- > 0;) {
            const Matrix dh = dh_above[t] + dh_next;
            lstm_cell_backward(p, cells[li][t], dh, dc_next, grads[li], dx[t], dh_next,
                               dc_next);
        }
        dh_above = std::move(dx);
    }
}

Matrix lstm_forward_batch(const LstmModel& m, std::span<const Matrix> steps,
                          LstmForwardCache* cache) {
    if (long(steps.size()) != m.window)
        throw ArgumentError("lstm_forward: window length mismatch");
    const Matrix top_h =
        lstm_stack_forward(m.layers, steps, cache != nullptr ? &cache->cells : nullptr);
    if (cache != nullptr) cache->top_h = top_h;
    return (m.head_w * top_h).colwise() + m.head_b;
}

Vector lstm_forward(const LstmModel& m, std::span<const Vector> window) {
    std::vector<Matrix> steps;
    steps.reserve(window.size());
    for (const auto& v : window) steps.push_back(v);
    return lstm_forward_batch(m, steps);
}

void lstm_backward_batch(const LstmModel& m, const LstmForwardCache& cache,
                         const Matrix& d_out, LstmModel& grads) {
    grads.head_w.noalias() += d_out * cache.top_h.transpose();
    grads.head_b += d_out.rowwise().sum();
    const Matrix d_top_h = m.head_w.transpose() * d_out;
    lstm_stack_backward(m.layers, cache.cells, d_top_h, grads.layers);
}

}  // namespace ensda
