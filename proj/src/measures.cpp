#include "cavres/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cavres {

namespace {

constexpr double kClampTol = 1e-10;
constexpr double kQubitBlockErrorTol = 1e-8;
constexpr double kEmsIdentityTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;
// Eigenvalues of a unit-trace density matrix below this are treated as exact
// zeros when building a factor; their square roots would otherwise be noise.
constexpr double kFactorDropTol = 1e-14;
constexpr double kSupportTol = 1e-12;
constexpr double kReconstructionTol = 1e-10;

double clamp_nonnegative(double v, const char* what) {
    if (v >= 0.0) {
        return v;
    }
    if (v > -kClampTol) {
        return 0.0;
    }
    throw InvariantViolation(std::string(what) + " is negative: " + std::to_string(v));
}

// sigma_y (x) sigma_y in the computational basis.
Complex spin_flip(std::size_t r, std::size_t c) {
    if (r + c != 3) {
        return 0.0;
    }
    return (r == 0 || r == 3) ? -1.0 : 1.0;
}

double purity(const ComplexMatrix& rho) {
    double s = 0.0;
    for (const auto& v : rho.data()) {
        s += std::norm(v);
    }
    return s;
}

double tangle_of_factor(const ComplexMatrix& w) { return 2.0 * (1.0 - purity(w * w.adjoint())); }

double pair_c2(std::span<const Complex> psi, std::size_t i, std::size_t j) {
    const std::array<std::size_t, 2> keep{i, j};
    const double c = concurrence_from_factor(branch_factor(psi, keep));
    return c * c;
}

double single_tangle(std::span<const Complex> psi, std::size_t q) {
    const std::array<std::size_t, 1> keep{q};
    return clamp_nonnegative(tangle_of_factor(branch_factor(psi, keep)), "linear entropy");
}

}  // namespace

std::array<double, 11> EntanglementReport::values() const {
    return {c2_c1c2, c2_r1r2, c2_c1r1, c2_c2r2, c2_c1r2, c2_c2r1, c2_block, e_bb, e_qb_c1, e_qb_r1, e_ms};
}

const std::array<const char*, 11>& EntanglementReport::field_names() {
    static const std::array<const char*, 11> names{"c2_c1c2", "c2_r1r2", "c2_c1r1", "c2_c2r2", "c2_c1r2", "c2_c2r1",
                                                   "c2_block", "e_bb", "e_qb_c1", "e_qb_r1", "e_ms"};
    return names;
}

double max_field_diff(const EntanglementReport& a, const EntanglementReport& b) {
    const auto va = a.values();
    const auto vb = b.values();
    double d = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        d = std::max(d, std::abs(va[i] - vb[i]));
    }
    return d;
}

double concurrence_from_factor(const ComplexMatrix& w) { return std::max(0.0, wootters_margin_from_factor(w)); }

double wootters_margin_from_factor(const ComplexMatrix& w) {
    if (w.rows() != 4) {
        throw std::invalid_argument("concurrence: factor must have 4 rows");
    }
    const std::size_t k = w.cols();
    // tau = W^T (sy x sy) W is complex symmetric; its singular values are the
    // square roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy).
    ComplexMatrix flipped(4, k);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t e = 0; e < k; ++e) {
            flipped(r, e) = spin_flip(r, 3 - r) * w(3 - r, e);
        }
    }
    const ComplexMatrix tau = w.transpose() * flipped;

    // Hermitian dilation [[0, tau], [tau^dagger, 0]] has eigenvalues +-sigma_i.
    ComplexMatrix dilation(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            dilation(i, k + j) = tau(i, j);
            dilation(k + j, i) = std::conj(tau(i, j));
        }
    }
    const auto eig = hermitian_eigen(dilation);
    std::array<double, 4> sigma{};
    for (std::size_t i = 0; i < std::min<std::size_t>(k, 4); ++i) {
        sigma[i] = std::max(eig.values[i], 0.0);
    }
    return sigma[0] - sigma[1] - sigma[2] - sigma[3];
}

double concurrence(const DensityMatrix& rho) {
    if (rho.num_qubits() != 2) {
        throw std::invalid_argument("concurrence requires a two-qubit density matrix");
    }
    const Complex tr = rho.matrix().trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw std::invalid_argument("concurrence: density matrix trace is not 1");
    }
    const auto eig = hermitian_eigen(rho.matrix());
    std::size_t rank = 0;
    for (double lam : eig.values) {
        if (lam < -kPsdTol) {
            throw std::domain_error("concurrence: density matrix is not positive semidefinite");
        }
        if (lam > kFactorDropTol) {
            ++rank;
        }
    }
    ComplexMatrix w(4, std::max<std::size_t>(rank, 1));
    for (std::size_t j = 0; j < rank; ++j) {
        const double root = std::sqrt(eig.values[j]);
        for (std::size_t r = 0; r < 4; ++r) {
            w(r, j) = eig.vectors(r, j) * root;
        }
    }
    return concurrence_from_factor(w);
}

double pair_concurrence_squared(const FourQubitState& state, Qubit i, Qubit j) {
    return pair_c2(state.amplitudes(), index_of(i), index_of(j));
}

double linear_entropy_tangle(const DensityMatrix& rho) {
    if (rho.num_qubits() != 1) {
        throw std::invalid_argument("linear entropy requires a single-qubit density matrix");
    }
    const auto& m = rho.matrix();
    if (std::abs(m.trace() - 1.0) > kTraceTol) {
        throw std::invalid_argument("linear entropy: density matrix trace is not 1");
    }
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    if (m(0, 0).real() < -kPsdTol || m(1, 1).real() < -kPsdTol || det < -kPsdTol) {
        throw std::invalid_argument("linear entropy: density matrix is not positive semidefinite");
    }
    return clamp_nonnegative(2.0 * (1.0 - purity(m)), "linear entropy");
}

double block_concurrence_squared(const FourQubitState& state, std::span<const Qubit> side) {
    std::vector<std::size_t> keep;
    for (auto q : side) {
        keep.push_back(index_of(q));
    }
    return clamp_nonnegative(tangle_of_factor(branch_factor(state.amplitudes(), keep)), "block concurrence");
}

double block_concurrence_squared(const FourQubitState& state) {
    const std::array<Qubit, 2> side{Qubit::c1, Qubit::r1};
    return block_concurrence_squared(state, side);
}

double qubit_to_block_concurrence_squared(const FourQubitState& state, Qubit qubit, std::array<Qubit, 2> block) {
    const std::array<std::size_t, 2> block_idx{index_of(block[0]), index_of(block[1])};
    const ComplexMatrix wb = branch_factor(state.amplitudes(), block_idx);
    const auto support = hermitian_eigen(wb * wb.adjoint());
    if (support.values[2] > kSupportTol) {
        throw std::domain_error("qubit-block concurrence: block support has dimension > 2");
    }

    const std::array<std::size_t, 3> keep{index_of(qubit), block_idx[0], block_idx[1]};
    const ComplexMatrix wq = branch_factor(state.amplitudes(), keep);  // 8 x 2
    // Project the block onto its two support vectors: logical index 2*a + l.
    ComplexMatrix logical(4, wq.cols());
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t l = 0; l < 2; ++l) {
            for (std::size_t e = 0; e < wq.cols(); ++e) {
                Complex s = 0.0;
                for (std::size_t m = 0; m < 4; ++m) {
                    s += std::conj(support.vectors(m, l)) * wq(4 * a + m, e);
                }
                logical(2 * a + l, e) = s;
            }
        }
    }
    const double c = concurrence_from_factor(logical);
    return c * c;
}

double qubit_block_entanglement(const FourQubitState& state, Qubit qubit, std::array<Qubit, 2> block) {
    const double v = qubit_to_block_concurrence_squared(state, qubit, block) -
                     pair_concurrence_squared(state, qubit, block[0]) -
                     pair_concurrence_squared(state, qubit, block[1]);
    if (v < -kQubitBlockErrorTol) {
        throw InvariantViolation("qubit-block entanglement is negative: " + std::to_string(v));
    }
    return (v < 0.0 && v > -kClampTol) ? 0.0 : v;
}

double residual_entanglement(const FourQubitState& state) {
    const auto psi = state.amplitudes();
    const double cross = pair_c2(psi, 0, 2) + pair_c2(psi, 0, 3) + pair_c2(psi, 1, 2) + pair_c2(psi, 1, 3);
    return clamp_nonnegative(block_concurrence_squared(state) - cross, "residual entanglement");
}

double average_multipartite(const FourQubitState& state) {
    const auto psi = state.amplitudes();
    double taus = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
        taus += single_tangle(psi, q);
    }
    double pairs = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            pairs += pair_c2(psi, i, j);
        }
    }
    return clamp_nonnegative((taus - 2.0 * pairs) / 4.0, "average multipartite entanglement");
}

double block_block_entanglement(const FourQubitState& state) {
    const double m = residual_entanglement(state);
    if (state.origin() != StateOrigin::external) {
        const double ems = average_multipartite(state);
        if (std::abs(m - 2.0 * ems) > kEmsIdentityTol) {
            throw InvariantViolation("E_BB = 2 E_ms violated: M = " + std::to_string(m) +
                                     ", E_ms = " + std::to_string(ems));
        }
    }
    return m;
}

double pure_three_tangle(const ThreeQubitState& psi, std::size_t pivot) {
    if (pivot > 2) {
        throw std::invalid_argument("three-tangle pivot must be 0, 1 or 2");
    }
    double n = 0.0;
    for (const auto& v : psi) {
        n += std::norm(v);
    }
    if (std::abs(std::sqrt(n) - 1.0) > 1e-12) {
        throw std::invalid_argument("three-qubit state is not normalized");
    }
    const std::size_t j = (pivot + 1) % 3;
    const std::size_t k = (pivot + 2) % 3;
    const double v = single_tangle(psi, pivot) - pair_c2(psi, pivot, j) - pair_c2(psi, pivot, k);
    return clamp_nonnegative(v, "pure three-tangle");
}

ThreeTangleDecomposition three_tangle_decomposition_check(const FourQubitState& state, std::array<Qubit, 3> triple) {
    ThreeTangleDecomposition out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.triple[i] = index_of(triple[i]);
    }
    // Columns are the traced qubit's |0> and |1> branches.
    const ComplexMatrix w = branch_factor(state.amplitudes(), out.triple);
    ComplexMatrix mixture(8, 8);
    for (std::size_t e = 0; e < w.cols(); ++e) {
        double p = 0.0;
        for (std::size_t r = 0; r < 8; ++r) {
            p += std::norm(w(r, e));
        }
        if (p == 0.0) {
            continue;
        }
        ThreeTangleComponent comp;
        comp.weight = p;
        const double scale = 1.0 / std::sqrt(p);
        for (std::size_t r = 0; r < 8; ++r) {
            comp.state[r] = w(r, e) * scale;
        }
        comp.tangle = pure_three_tangle(comp.state);
        for (std::size_t r = 0; r < 8; ++r) {
            for (std::size_t c = 0; c < 8; ++c) {
                mixture(r, c) += p * comp.state[r] * std::conj(comp.state[c]);
            }
        }
        out.max_tangle = std::max(out.max_tangle, comp.tangle);
        out.components.push_back(comp);
    }

    const auto target = partial_trace(DensityMatrix::from_pure(state.amplitudes()), out.triple);
    out.reconstruction_error = max_abs_diff(mixture, target.matrix());
    if (out.reconstruction_error > kReconstructionTol) {
        throw InvariantViolation("three-tangle decomposition does not reconstruct the reduced state");
    }
    return out;
}

EntanglementReport full_report(const FourQubitState& state) {
    const auto psi = state.amplitudes();
    EntanglementReport r;
    r.c2_c1c2 = pair_c2(psi, 0, 2);
    r.c2_r1r2 = pair_c2(psi, 1, 3);
    r.c2_c1r1 = pair_c2(psi, 0, 1);
    r.c2_c2r2 = pair_c2(psi, 2, 3);
    r.c2_c1r2 = pair_c2(psi, 0, 3);
    r.c2_c2r1 = pair_c2(psi, 1, 2);
    r.c2_block = block_concurrence_squared(state);

    const double cross = r.c2_c1c2 + r.c2_c1r2 + r.c2_c2r1 + r.c2_r1r2;
    r.e_bb = clamp_nonnegative(r.c2_block - cross, "block-block entanglement");

    double taus = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
        taus += single_tangle(psi, q);
    }
    const double pairs = cross + r.c2_c1r1 + r.c2_c2r2;
    r.e_ms = clamp_nonnegative((taus - 2.0 * pairs) / 4.0, "average multipartite entanglement");

    const std::array<Qubit, 2> block{Qubit::c2, Qubit::r2};
    r.e_qb_c1 = clamp_nonnegative(
        qubit_to_block_concurrence_squared(state, Qubit::c1, block) - r.c2_c1c2 - r.c2_c1r2, "qubit-block entanglement");
    r.e_qb_r1 = clamp_nonnegative(
        qubit_to_block_concurrence_squared(state, Qubit::r1, block) - r.c2_r1r2 - r.c2_c2r1, "qubit-block entanglement");
    return r;
}

}  // namespace cavres
