#pragma once

#include "ensda/core.hpp"
#include "ensda/rng.hpp"

#include <span>
#include <vector>

namespace ensda {

/// Gate parameters of one LSTM layer. Inputs enter through W_*, the recurrent
/// hidden state through U_*; all activations follow the standard gated-cell
/// equations with logistic gates and tanh candidate.
struct LstmLayerParams {
    Matrix W_i, W_f, W_c, W_o;  // hidden x input
    Matrix U_i, U_f, U_c, U_o;  // hidden x hidden
    Vector b_i, b_f, b_c, b_o;

    Eigen::Index input_size() const { return W_i.cols(); }
    Eigen::Index hidden_size() const { return W_i.rows(); }

    static LstmLayerParams zeros(Eigen::Index input, Eigen::Index hidden);

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        fn(W_i); fn(W_f); fn(W_c); fn(W_o);
        fn(U_i); fn(U_f); fn(U_c); fn(U_o);
        fn(b_i); fn(b_f); fn(b_c); fn(b_o);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        fn(W_i); fn(W_f); fn(W_c); fn(W_o);
        fn(U_i); fn(U_f); fn(U_c); fn(U_o);
        fn(b_i); fn(b_f); fn(b_c); fn(b_o);
    }
};

/// Saved intermediates of one cell evaluation; columns are batch entries.
struct LstmCellCache {
    Matrix x, h_prev, c_prev;
    Matrix i, f, g, o;  // gate activations, g is the tanh candidate
    Matrix c, tanh_c;
};

/// One gated-cell step for a batch (columns). Returns h_t, c_t and fills the
/// cache for the backward pass when given.
void lstm_cell_forward(const LstmLayerParams& p, const Matrix& x, const Matrix& h_prev,
                       const Matrix& c_prev, Matrix& h_out, Matrix& c_out,
                       LstmCellCache* cache = nullptr);

/// Backward through one cell step. dh/dc are gradients w.r.t. h_t/c_t;
/// parameter gradients accumulate into `grads` (a zeroed parameter mirror).
void lstm_cell_backward(const LstmLayerParams& p, const LstmCellCache& cache,
                        const Matrix& dh, const Matrix& dc, LstmLayerParams& grads,
                        Matrix& dx, Matrix& dh_prev, Matrix& dc_prev);

/// Runs a window through a stack of LSTM layers (layer l consumes layer
/// l-1's hidden sequence); returns the top layer's final hidden state.
Matrix lstm_stack_forward(std::span<const LstmLayerParams> layers,
                          std::span<const Matrix> steps,
                          std::vector<std::vector<LstmCellCache>>* cells = nullptr);

/// BPTT through the stack given the gradient w.r.t. the final top hidden state.
void lstm_stack_backward(std::span<const LstmLayerParams> layers,
                         const std::vector<std::vector<LstmCellCache>>& cells,
                         const Matrix& d_top_h, std::span<LstmLayerParams> grads);

/// Stacked LSTM with an affine readout from the top layer's final hidden state.
struct LstmModel {
    std::vector<LstmLayerParams> layers;
    Matrix head_w;  // out_dim x hidden
    Vector head_b;
    int window = 20;  // input window length K

    Eigen::Index input_dim() const { return layers.front().input_size(); }
    Eigen::Index output_dim() const { return head_w.rows(); }

    /// Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)], forget bias 1.
    static LstmModel init(Eigen::Index input_dim, Eigen::Index output_dim,
                          const std::vector<Eigen::Index>& hidden_sizes, int window,
                          RngStream& rng);
    static LstmModel zeros_like(const LstmModel& other);

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        for (auto& layer : layers) layer.for_each_tensor(fn);
        fn(head_w);
        fn(head_b);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        for (const auto& layer : layers) layer.for_each_tensor(fn);
        fn(head_w);
        fn(head_b);
    }
};

struct LstmForwardCache {
    std::vector<std::vector<LstmCellCache>> cells;  // [layer][time]
    Matrix top_h;                                   // hidden x batch at final step
};

/// Run a K-step window (each entry input_dim x batch) through the stack and
/// the readout; returns out_dim x batch one-step-ahead predictions.
Matrix lstm_forward_batch(const LstmModel& m, std::span<const Matrix> steps,
                          LstmForwardCache* cache = nullptr);

/// Single-window convenience form of lstm_forward_batch.
Vector lstm_forward(const LstmModel& m, std::span<const Vector> window);

/// Backprop-through-time; d_out is the loss gradient w.r.t. the predictions.
void lstm_backward_batch(const LstmModel& m, const LstmForwardCache& cache,
                         const Matrix& d_out, LstmModel& grads);

}  // namespace ensda
