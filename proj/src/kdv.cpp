#include "ensda/kdv.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

namespace ensda {

Vector soliton_profile(double c, double a, const Vector& x) {
    if (c <= 0.0) throw ArgumentError("soliton_profile: c must be positive");
    Vector out(x.size());
    const double root = std::sqrt(c);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double s = 1.0 / std::cosh(0.5 * root * x[i] - a);
        out[i] = 0.5 * c * s * s;
    }
    return out;
}

Vector kdv_grid(const KdVSystem& sys) {
    Vector x(sys.n_grid);
    for (int i = 0; i < sys.n_grid; ++i) x[i] = i * sys.dx();
    return x;
}

Vector two_soliton_initial(const KdVSystem& sys, const std::array<SolitonParam, 2>& params) {
    const Vector x = kdv_grid(sys);
    return soliton_profile(params[0].c, params[0].a, x) +
           soliton_profile(params[1].c, params[1].a, x);
}

std::array<SolitonParam, 2> sample_soliton_params(RngStream& rng) {
    for (;;) {
        const double c1 = 0.5 + 1.5 * rng.uniform();
        const double c2 = 0.5 + 1.5 * rng.uniform();
        const double p1 = 5.0 + 40.0 * rng.uniform();
        const double p2 = 5.0 + 40.0 * rng.uniform();
        if (std::abs(p1 - p2) < 10.0) continue;
        return {SolitonParam{c1, 0.5 * std::sqrt(c1) * p1},
                SolitonParam{c2, 0.5 * std::sqrt(c2) * p2}};
    }
}

namespace {

using Cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

struct SpectralWorkspace {
    Eigen::FFT<double> fft;
    CVector ik;         // spectral derivative multipliers
    CVector disp_half;  // exp(i k^3 h / 2)
    int n;

    SpectralWorkspace(const KdVSystem& sys, double h) : n(sys.n_grid) {
        ik.resize(n);
        disp_half.resize(n);
        const double base = 2.0 * std::numbers::pi / sys.length;
        for (int j = 0; j < n; ++j) {
            const int m = j <= n / 2 ? j : j - n;
            const double k = base * m;
            ik[j] = Cplx(0.0, k);
            // v_t = -v_xxx -> vhat_t = i k^3 vhat
            disp_half[j] = std::exp(Cplx(0.0, k * k * k * h / 2.0));
        }
    }

    Vector deriv(const Vector& u) {
        CVector uh;
        fft.fwd(uh, u);
        uh.array() *= ik.array();
        Vector out;
        fft.inv(out, uh);
        return out;
    }

    Vector dispersive_half(const Vector& u) {
        CVector uh;
        fft.fwd(uh, u);
        uh.array() *= disp_half.array();
        Vector out;
        fft.inv(out, uh);
        return out;
    }
};

}  // namespace

Vector kdv_step(const KdVSystem& sys, const Vector& v, long frame_index) {
    if (v.size() != sys.n_grid) throw ArgumentError("kdv_step: grid size mismatch");
    const double h_target = sys.internal_step();
    const long n_sub = std::max<long>(1, long(std::ceil(sys.dt_frame / h_target - 1e-12)));
    const double h = sys.dt_frame / double(n_sub);
    SpectralWorkspace ws(sys, h);

    Vector u = v;
    for (long s = 0; s < n_sub; ++s) {
        const Vector v1 = ws.dispersive_half(u);
        // advection v_t = -6 v v_x = -3 (v^2)_x, explicit midpoint
        const Vector vm = v1 - (0.5 * h * 3.0) * ws.deriv(v1.cwiseProduct(v1));
        const Vector v2 = v1 - (h * 3.0) * ws.deriv(vm.cwiseProduct(vm));
        u = ws.dispersive_half(v2);
        if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e3)
            throw BlowupError("kdv integration blew up", frame_index);
    }
    return u;
}

std::vector<Vector> kdv_trajectory(const KdVSystem& sys, const Vector& v0, long n_frames,
                                   RngStream* rng, double noise_std) {
    std::vector<Vector> out;
    out.reserve(std::size_t(n_frames) + 1);
    Vector v = v0;
    auto store = [&](const Vector& state) {
        if (rng != nullptr && noise_std > 0.0)
            out.push_back(state + rng->gaussian_vector(state.size(), 0.0, noise_std));
        else
            out.push_back(state);
    };
    store(v);
    for (long f = 0; f < n_frames; ++f) {
        v = kdv_step(sys, v, f);
        store(v);
    }
    return out;
}

double grid_integral(const KdVSystem& sys, const Vector& v) { return sys.dx() * v.sum(); }

}  // namespace ensda
