#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ensda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using BoolMask = std::vector<bool>;

// ---- error types ----------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
    using Error::Error;
};

/// Numerical integration produced a non-finite or out-of-bounds state.
struct BlowupError : Error {
    long step;
    BlowupError(const std::string& what, long step_index)
        : Error(what + " (step " + std::to_string(step_index) + ")"), step(step_index) {}
};

/// Training or reverse-SDE sampling left the finite domain.
struct DivergedError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ScheduleDomainError : Error {
    using Error::Error;
};

// ---- ensemble -------------------------------------------------------------

/// J state vectors of common dimension d, one per column.
struct Ensemble {
    Matrix members;       // d x J
    long time_index = 0;

    Ensemble() = default;
    Ensemble(Matrix m, long t = 0) : members(std::move(m)), time_index(t) {
        if (members.cols() < 2)
            throw ArgumentError("ensemble needs at least 2 members");
    }

    Eigen::Index dim() const { return members.rows(); }
    Eigen::Index size() const { return members.cols(); }
};

inline Vector ensemble_mean(const Ensemble& e) { return e.members.rowwise().mean(); }

/// RMS deviation of members about the ensemble mean (sample convention).
inline double ensemble_spread(const Ensemble& e) {
    const Vector mean = ensemble_mean(e);
    const double ss = (e.members.colwise() - mean).squaredNorm();
    return std::sqrt(ss / (double(e.size() - 1) * double(e.dim())));
}

// ---- metrics --------------------------------------------------------------

template <typename DerivedA, typename DerivedB>
double rmse(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ArgumentError("rmse: shape mismatch");
    return std::sqrt((a.derived() - b.derived()).squaredNorm() / double(a.size()));
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& x) {
    return x.allFinite();
}

}  // namespace ensda
