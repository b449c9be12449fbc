// Conversions between library types and the Eigen-based oracles.

#pragma once

#include <random>

#include "cavres/qmath.hpp"
#include "cavres/states.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Mat to_eigen(const cavres::ComplexMatrix& m) {
    oracle::Mat out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(r, c) = m(r, c);
        }
    }
    return out;
}

inline cavres::ComplexMatrix from_eigen(const oracle::Mat& m) {
    cavres::ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out(r, c) = m(r, c);
        }
    }
    return out;
}

inline oracle::Vec to_eigen(const cavres::FourQubitState& s) {
    oracle::Vec v(16);
    for (int i = 0; i < 16; ++i) {
        v(i) = s.amplitudes()[i];
    }
    return v;
}

inline double max_diff(const oracle::Mat& a, const oracle::Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline oracle::Mat random_complex(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> n;
    oracle::Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double re = n(rng);
            m(r, c) = {re, n(rng)};
        }
    }
    return m;
}

inline oracle::Mat random_density(std::mt19937_64& rng, int dim, int rank) {
    const oracle::Mat w = random_complex(rng, dim, rank);
    oracle::Mat rho = w * w.adjoint();
    return rho / rho.trace().real();
}

inline cavres::GeneralInitialState random_general(std::mt19937_64& rng) {
    const oracle::Mat v = random_complex(rng, 4, 1);
    const double n = v.norm();
    cavres::GeneralInitialState s;
    for (int i = 0; i < 4; ++i) {
        s.a[i] = v(i, 0) / n;
    }
    return s;
}

}  // namespace support
