#include "cavres/qmath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

namespace cavres {

namespace {

constexpr double kJacobiRelTol = 1e-14;
constexpr double kSkipRelTol = 1e-19;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kPsdClamp = 1e-10;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

void validate_keep(std::span<const std::size_t> keep, std::size_t n) {
    if (keep.empty()) {
        throw std::invalid_argument("partial trace: empty keep set");
    }
    std::vector<bool> seen(n, false);
    for (auto q : keep) {
        if (q >= n) {
            throw std::invalid_argument("partial trace: qubit " + std::to_string(q) + " out of range");
        }
        if (seen[q]) {
            throw std::invalid_argument("partial trace: qubit " + std::to_string(q) + " repeated");
        }
        seen[q] = true;
    }
}

// Index maps from (kept index, traced index) to the full basis index.
struct SplitIndex {
    std::vector<std::size_t> kept_offsets;
    std::vector<std::size_t> traced_offsets;
};

SplitIndex split_index(std::span<const std::size_t> keep, std::size_t n) {
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            traced.push_back(q);
        }
    }
    auto offsets = [n](std::span<const std::size_t> qubits) {
        std::size_t k = qubits.size();
        std::vector<std::size_t> out(std::size_t{1} << k, 0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::size_t full = 0;
            for (std::size_t b = 0; b < k; ++b) {
                if ((i >> (k - 1 - b)) & 1U) {
                    full |= std::size_t{1} << (n - 1 - qubits[b]);
                }
            }
            out[i] = full;
        }
        return out;
    };
    return {offsets(keep), offsets(traced)};
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), 1);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m = *this;
    for (auto& v : m.data_) {
        v = std::conj(v);
    }
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

double ComplexMatrix::hermiticity_error() const {
    if (!is_square()) {
        throw std::invalid_argument("hermiticity of a non-square matrix");
    }
    double err = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = r; c < cols_; ++c) {
            err = std::max(err, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return err;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : data_) {
        v *= s;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix product: inner dimensions differ");
    }
    ComplexMatrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                m(i, j) += aik * b(k, j);
            }
        }
    }
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    }
    return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t p = b.rows();
    const std::size_t q = b.cols();
    ComplexMatrix m(a.rows() * p, a.cols() * q);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t k = 0; k < p; ++k) {
                for (std::size_t l = 0; l < q; ++l) {
                    m(i * p + k, j * q + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return m;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double hermitian_tol) : m_(std::move(m)) {
    if (!m_.is_square()) {
        throw std::invalid_argument("density matrix must be square");
    }
    num_qubits_ = qubits_for_dim(m_.rows());
    if (m_.hermiticity_error() > hermitian_tol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
}

DensityMatrix DensityMatrix::from_pure(std::span<const Complex> psi) {
    qubits_for_dim(psi.size());
    ComplexMatrix m(psi.size(), psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r) {
        for (std::size_t c = 0; c < psi.size(); ++c) {
            m(r, c) = psi[r] * std::conj(psi[c]);
        }
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.num_qubits();
    validate_keep(keep, n);
    const auto idx = split_index(keep, n);
    const std::size_t dk = idx.kept_offsets.size();
    ComplexMatrix out(dk, dk);
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex s = 0.0;
            for (auto e : idx.traced_offsets) {
                s += rho(idx.kept_offsets[i] | e, idx.kept_offsets[j] | e);
            }
            out(i, j) = s;
        }
    }
    return DensityMatrix(std::move(out));
}

ComplexMatrix branch_factor(std::span<const Complex> psi, std::span<const std::size_t> keep) {
    const std::size_t n = qubits_for_dim(psi.size());
    validate_keep(keep, n);
    const auto idx = split_index(keep, n);
    ComplexMatrix w(idx.kept_offsets.size(), idx.traced_offsets.size());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t e = 0; e < w.cols(); ++e) {
            w(i, e) = psi[idx.kept_offsets[i] | idx.traced_offsets[e]];
        }
    }
    return w;
}

namespace {

double conj_of(double v) { return v; }
Complex conj_of(Complex v) { return std::conj(v); }
double phase_of(double v, double) { return v >= 0.0 ? 1.0 : -1.0; }
Complex phase_of(Complex v, double mag) { return v / mag; }

// Cyclic Jacobi on a row-major Hermitian matrix `a`. `w` holds the eigenvector
// estimates as rows (the transpose of V) so every update walks contiguous
// memory. Returns false if the sweep limit is hit before convergence.
template <class T>
bool jacobi(std::vector<T>& a, std::vector<T>& w, std::size_t n) {
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                s += std::norm(a[p * n + q]);
            }
        }
        return std::sqrt(2.0 * s);
    };
    double fro = 0.0;
    for (const auto& v : a) {
        fro += std::norm(v);
    }
    const double scale = std::max(std::sqrt(fro), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_norm() <= kJacobiRelTol * scale) {
            return true;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a[p * n + q];
                const double mag = std::abs(apq);
                // Entries this small cannot move the off-diagonal norm above
                // tolerance for any n we handle.
                if (mag <= kSkipRelTol * scale) {
                    continue;
                }
                const double app = std::real(a[p * n + p]);
                const double aqq = std::real(a[q * n + q]);
                const T phase = phase_of(apq, mag);  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] in the (p, q) plane.
                const T s_ph = s * phase;
                const T s_phc = s * conj_of(phase);

                // Rows p, q of G^dagger A G away from the (p, q) block only see
                // the left factor; columns follow by Hermiticity.
                T* rp = &a[p * n];
                T* rq = &a[q * n];
                for (std::size_t k = 0; k < n; ++k) {
                    const T apk = rp[k];
                    const T aqk = rq[k];
                    rp[k] = c * apk - s_ph * aqk;
                    rq[k] = s_phc * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    a[k * n + p] = conj_of(rp[k]);
                    a[k * n + q] = conj_of(rq[k]);
                }
                a[p * n + q] = a[q * n + p] = T{};
                a[p * n + p] = app - t * mag;
                a[q * n + q] = aqq + t * mag;

                T* wp = &w[p * n];
                T* wq = &w[q * n];
                for (std::size_t k = 0; k < n; ++k) {
                    const T vkp = wp[k];
                    const T vkq = wq[k];
                    wp[k] = c * vkp - s_phc * vkq;
                    wq[k] = s_ph * vkp + c * vkq;
                }
            }
        }
    }
    return off_norm() <= kJacobiRelTol * scale * 1e3;
}

template <class T>
EigenDecomposition run_jacobi(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<T> a(n * n);
    std::vector<T> w(n * n, T{});
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if constexpr (std::is_same_v<T, double>) {
                a[r * n + c] = h(r, c).real();
            } else {
                a[r * n + c] = r == c ? Complex(h(r, c).real(), 0.0) : h(r, c);
            }
        }
        w[r * n + r] = T{1.0};
    }
    if (!jacobi(a, w, n)) {
        throw InvariantViolation("hermitian_eigen: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return std::real(a[i * n + i]) > std::real(a[j * n + j]); });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t o = order[j];
        out.values[j] = std::real(a[o * n + o]);
        for (std::size_t k = 0; k < n; ++k) {
            out.vectors(k, j) = w[o * n + k];
        }
    }
    return out;
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& h, double hermitian_tol) {
    if (!h.is_square()) {
        throw std::invalid_argument("hermitian_eigen: matrix is not square");
    }
    if (h.hermiticity_error() > hermitian_tol) {
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
    }
    const bool real = std::all_of(h.data().begin(), h.data().end(), [](const Complex& v) { return v.imag() == 0.0; });
    return real ? run_jacobi<double>(h) : run_jacobi<Complex>(h);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
    const auto eig = hermitian_eigen(rho);
    const std::size_t n = rho.rows();
    ComplexMatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double lam = eig.values[j];
        if (lam < -kPsdClamp) {
            throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(lam) + " is negative");
        }
        const double root = std::sqrt(std::max(lam, 0.0));
        if (root == 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            const Complex vr = eig.vectors(r, j) * root;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(eig.vectors(c, j));
            }
        }
    }
    return out;
}

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

ComplexMatrix rotation_y(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {{c, -s}, {s, c}};
}

ComplexMatrix rotation_z(double theta) {
    return {{std::polar(1.0, -theta / 2.0), 0.0}, {0.0, std::polar(1.0, theta / 2.0)}};
}

}  // namespace cavres
