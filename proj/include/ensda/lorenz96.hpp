#pragma once

#include "ensda/core.hpp"
#include "ensda/rng.hpp"

#include <optional>
#include <vector>

namespace ensda {

/// Cyclic Lorenz-96 system dx_i/dt = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F.
struct Lorenz96System {
    int d = 20;
    double forcing = 8.0;
    double dt = 10.0 / 2500.0;

    Lorenz96System() = default;
    Lorenz96System(int dim, double f, double step) : d(dim), forcing(f), dt(step) {
        if (d < 4) throw ArgumentError("lorenz96: d must be >= 4 for the cyclic stencil");
        if (dt <= 0) throw ArgumentError("lorenz96: dt must be positive");
    }
};

Vector lorenz96_rhs(const Lorenz96System& sys, const Vector& x);

/// Classical fixed-step RK4 advance by sys.dt.
Vector rk4_step(const Lorenz96System& sys, const Vector& x, long step_index = 0);

/// [x0, step(x0), ...], n_steps+1 states. With an RNG, each *stored* state is
/// perturbed by N(0, noise_std^2) per component; the underlying path stays clean.
std::vector<Vector> generate_trajectory(const Lorenz96System& sys, const Vector& x0,
                                        long n_steps, RngStream* rng = nullptr,
                                        double noise_std = 0.0);

/// Random attractor state: F + N(0,1) per component, integrated through a spin-up.
Vector lorenz96_spinup_state(const Lorenz96System& sys, RngStream& rng,
                             long spinup_steps = 500);

}  // namespace ensda
