#pragma once

#include "ensda/core.hpp"
#include "ensda/rng.hpp"

#include <array>
#include <vector>

namespace ensda {

struct SolitonParam {
    double c;  // amplitude parameter, wave speed equals c
    double a;  // phase offset; the peak sits at x = 2a/sqrt(c)
};

/// KdV equation v_t = -6 v v_x - v_xxx on the periodic domain [0, L),
/// advanced by a split-step Fourier scheme (exact dispersion in spectral
/// space, explicit midpoint for the advection term).
struct KdVSystem {
    double length = 50.0;
    int n_grid = 100;
    double dt_frame = 0.01;
    double dt_internal = 0.0;  // 0 -> min(1e-4, 0.1 dx^3)

    double dx() const { return length / n_grid; }
    double internal_step() const {
        const double h = dx();
        const double bound = 0.1 * h * h * h;
        const double chosen = dt_internal > 0.0 ? dt_internal : std::min(1e-4, bound);
        return chosen;
    }
};

/// Pointwise (c/2) sech^2(sqrt(c)/2 x - a); peak value c/2.
Vector soliton_profile(double c, double a, const Vector& x);

/// Uniform grid {0, dx, ..., L - dx}.
Vector kdv_grid(const KdVSystem& sys);

Vector two_soliton_initial(const KdVSystem& sys, const std::array<SolitonParam, 2>& params);

/// c ~ U[0.5, 2], peaks inside [5, 45] and at least 10 apart.
std::array<SolitonParam, 2> sample_soliton_params(RngStream& rng);

/// Advance one frame interval dt_frame via internal sub-steps.
Vector kdv_step(const KdVSystem& sys, const Vector& v, long frame_index = 0);

std::vector<Vector> kdv_trajectory(const KdVSystem& sys, const Vector& v0, long n_frames,
                                   RngStream* rng = nullptr, double noise_std = 0.0);

/// Trapezoid quadrature of v (exact form on a periodic uniform grid).
double grid_integral(const KdVSystem& sys, const Vector& v);

}  // namespace ensda
