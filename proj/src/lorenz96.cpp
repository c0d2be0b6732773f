#include "ensda/lorenz96.hpp"

namespace ensda {

Vector lorenz96_rhs(const Lorenz96System& sys, const Vector& x) {
    const int d = sys.d;
    if (x.size() != d) throw ArgumentError("lorenz96_rhs: dimension mismatch");
    Vector dx(d);
    for (int i = 0; i < d; ++i) {
        const int ip1 = (i + 1) % d;
        const int im1 = (i + d - 1) % d;
        const int im2 = (i + d - 2) % d;
        dx[i] = (x[ip1] - x[im2]) * x[im1] - x[i] + sys.forcing;
    }
    return dx;
}

Vector rk4_step(const Lorenz96System& sys, const Vector& x, long step_index) {
    const double h = sys.dt;
    const Vector k1 = lorenz96_rhs(sys, x);
    const Vector k2 = lorenz96_rhs(sys, x + 0.5 * h * k1);
    const Vector k3 = lorenz96_rhs(sys, x + 0.5 * h * k2);
    const Vector k4 = lorenz96_rhs(sys, x + h * k3);
    Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) throw BlowupError("lorenz96 integration blew up", step_index);
    return next;
}

std::vector<Vector> generate_trajectory(const Lorenz96System& sys, const Vector& x0,
                                        long n_steps, RngStream* rng, double noise_std) {
    if (n_steps < 0) throw ArgumentError("generate_trajectory: n_steps must be >= 0");
    std::vector<Vector> out;
    out.reserve(std::size_t(n_steps) + 1);
    Vector x = x0;
    auto store = [&](const Vector& state) {
        if (rng != nullptr && noise_std > 0.0)
            out.push_back(state + rng->gaussian_vector(state.size(), 0.0, noise_std));
        else
            out.push_back(state);
    };
    store(x);
    for (long s = 0; s < n_steps; ++s) {
        x = rk4_step(sys, x, s);
        store(x);
    }
    return out;
}

Vector lorenz96_spinup_state(const Lorenz96System& sys, RngStream& rng, long spinup_steps) {
    Vector x = Vector::Constant(sys.d, sys.forcing) + rng.gaussian_vector(sys.d);
    for (long s = 0; s < spinup_steps; ++s) x = rk4_step(sys, x, s);
    return x;
}

}  // namespace ensda
