// operators.cpp: Operator algebra and matrix exponential

#include "emsim/operators.hpp"

#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace emsim::ops {

std::string_view to_string(Subsystem s) noexcept {
    switch (s) {
        case Subsystem::NR1: return "nr1";
        case Subsystem::Transmon: return "transmon";
        case Subsystem::NR2: return "nr2";
        case Subsystem::NR: return "nr";
        case Subsystem::SC: return "sc";
    }
    return "?";
}

SubsystemLayout::SubsystemLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {
    if (slots_.empty()) {
        throw DimensionError("SubsystemLayout: at least one subsystem required");
    }
    for (const auto& s : slots_) {
        if (s.dim < 2) {
            throw DimensionError("SubsystemLayout: subsystem " + std::string(to_string(s.name)) +
                                 " has dimension " + std::to_string(s.dim) + " < 2");
        }
        total_ *= s.dim;
    }
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        for (std::size_t j = i + 1; j < slots_.size(); ++j) {
            if (slots_[i].name == slots_[j].name) {
                throw DimensionError("SubsystemLayout: duplicate subsystem name");
            }
        }
    }
}

SubsystemLayout SubsystemLayout::standard(int n_max) {
    return SubsystemLayout({{Subsystem::NR1, n_max + 1},
                            {Subsystem::Transmon, 2},
                            {Subsystem::NR2, n_max + 1}});
}

SubsystemLayout SubsystemLayout::rabi(int n_max) {
    return SubsystemLayout({{Subsystem::NR, n_max + 1}, {Subsystem::SC, 2}});
}

std::size_t SubsystemLayout::slot_of(Subsystem s) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].name == s) return i;
    }
    throw DimensionError("SubsystemLayout: no subsystem named " + std::string(to_string(s)));
}

bool SubsystemLayout::contains(Subsystem s) const noexcept {
    return std::any_of(slots_.begin(), slots_.end(), [s](const Slot& x) { return x.name == s; });
}

std::vector<int> SubsystemLayout::levels(int index) const {
    if (index < 0 || index >= total_) {
        throw DimensionError("SubsystemLayout::levels: index out of range");
    }
    std::vector<int> out(slots_.size());
    for (std::size_t k = slots_.size(); k-- > 0;) {
        out[k] = index % slots_[k].dim;
        index /= slots_[k].dim;
    }
    return out;
}

int SubsystemLayout::index(const std::vector<int>& lv) const {
    if (lv.size() != slots_.size()) {
        throw DimensionError("SubsystemLayout::index: level count mismatch");
    }
    int idx = 0;
    for (std::size_t k = 0; k < slots_.size(); ++k) {
        if (lv[k] < 0 || lv[k] >= slots_[k].dim) {
            throw DimensionError("SubsystemLayout::index: level out of range");
        }
        idx = idx * slots_[k].dim + lv[k];
    }
    return idx;
}

bool SubsystemLayout::operator==(const SubsystemLayout& other) const noexcept {
    if (slots_.size() != other.slots_.size()) return false;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].name != other.slots_[i].name || slots_[i].dim != other.slots_[i].dim) {
            return false;
        }
    }
    return true;
}

Matrix identity(int dim) {
    if (dim < 1) throw DimensionError("identity: dimension must be positive");
    return Matrix::Identity(dim, dim);
}

Matrix annihilation_operator(int dim) {
    if (dim < 2) {
        throw DimensionError("annihilation_operator: dimension " + std::to_string(dim) + " < 2");
    }
    Matrix b = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return b;
}

Matrix number_operator(int dim) {
    if (dim < 2) {
        throw DimensionError("number_operator: dimension " + std::to_string(dim) + " < 2");
    }
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix pauli(Axis axis) {
    Matrix m = Matrix::Zero(2, 2);
    switch (axis) {
        case Axis::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case Axis::Y: m(0, 1) = -kI; m(1, 0) = kI; break;
        case Axis::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        case Axis::Plus: m(0, 1) = 1.0; break;   // |up><down|
        case Axis::Minus: m(1, 0) = 1.0; break;  // |down><up|
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix embed(const Matrix& op, std::size_t slot, const SubsystemLayout& layout) {
    if (slot >= layout.size()) throw DimensionError("embed: slot out of range");
    if (op.rows() != op.cols() || op.rows() != layout.dim(slot)) {
        throw DimensionError("embed: operator dimension " + std::to_string(op.rows()) +
                             " does not match subsystem dimension " +
                             std::to_string(layout.dim(slot)));
    }
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < layout.size(); ++k) {
        out = kron(out, k == slot ? op : identity(layout.dim(k)));
    }
    return out;
}

Matrix embed(const Matrix& op, Subsystem s, const SubsystemLayout& layout) {
    return embed(op, layout.slot_of(s), layout);
}

double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix& a) { return max_abs(a - a.adjoint()); }

bool is_hermitian(const Matrix& a, double tol) {
    return a.rows() == a.cols() && hermiticity_error(a) <= tol;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

namespace {

Matrix exp_hermitian(const Matrix& h, cplx factor) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw NumericError("matrix_exponential: eigendecomposition failed");
    }
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        phases(k) = std::exp(factor * es.eigenvalues()(k));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix exp_taylor(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Matrix scaled = a / std::ldexp(1.0, squarings);

    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
        if (max_abs(term) <= 1e-17 * max_abs(sum)) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace

Matrix matrix_exponential(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("matrix_exponential: matrix must be square");
    if (!a.allFinite()) throw NumericInputError("matrix_exponential: non-finite entries");
    if (a.rows() == 0) return a;
    const double scale = std::max(1.0, max_abs(a));
    const double tol = 1e-13 * scale;
    if (max_abs(a - a.adjoint()) <= tol) {
        return exp_hermitian(0.5 * (a + a.adjoint()), cplx{1.0, 0.0});
    }
    if (max_abs(a + a.adjoint()) <= tol) {
        // a = -i h with h Hermitian
        const Matrix h = kI * a;
        return exp_hermitian(0.5 * (h + h.adjoint()), -kI);
    }
    return exp_taylor(a);
}

}  // namespace emsim::ops
