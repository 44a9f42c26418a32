// operators.hpp: Truncated Fock and two-level operator algebra, tensor embedding,
// and the matrix exponential used by every other module.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace emsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Frequencies are carried in MHz (f = omega / 2pi) and time in microseconds.
// Hamiltonian matrices are assembled in rad/us.
constexpr double angular(double mhz) noexcept { return kTwoPi * mhz; }

// Rates quoted as gamma / 2pi in Hz, converted to 1/us.
constexpr double angular_rate_hz(double hz) noexcept { return kTwoPi * hz * 1e-6; }

}  // namespace emsim

namespace emsim::ops {

enum class Axis { X, Y, Z, Plus, Minus };

// Two-level basis ordering. For the transmon index 0 is the excited state |up>
// and index 1 the ground state |down>, so sigma_z = diag(+1, -1) raises the
// excited state under (Omega/2) sigma_z. NR qubits reuse the same matrices
// with |0> (spin up) at index 0.
inline constexpr int kTransmonExcited = 0;
inline constexpr int kTransmonGround = 1;

// Symbolic subsystem names. The standard layout order is (NR1, Transmon, NR2).
enum class Subsystem { NR1, Transmon, NR2, NR, SC };

std::string_view to_string(Subsystem s) noexcept;

class SubsystemLayout {
public:
    struct Slot {
        Subsystem name;
        int dim;
    };

    explicit SubsystemLayout(std::vector<Slot> slots);

    // NR1 (n_max + 1 levels), transmon (2), NR2 (n_max + 1 levels).
    static SubsystemLayout standard(int n_max = 4);
    // Single NR (n_max + 1 levels) followed by a two-level SC element.
    static SubsystemLayout rabi(int n_max);

    std::size_t size() const noexcept { return slots_.size(); }
    const std::vector<Slot>& slots() const noexcept { return slots_; }
    int dim(std::size_t slot) const { return slots_.at(slot).dim; }
    int dim(Subsystem s) const { return dim(slot_of(s)); }
    std::size_t slot_of(Subsystem s) const;
    bool contains(Subsystem s) const noexcept;
    int total_dim() const noexcept { return total_; }

    // Mixed-radix conversion between a global basis index and per-slot levels.
    std::vector<int> levels(int index) const;
    int index(const std::vector<int>& levels) const;

    bool operator==(const SubsystemLayout& other) const noexcept;

private:
    std::vector<Slot> slots_;
    int total_ = 1;
};

Matrix identity(int dim);
Matrix annihilation_operator(int dim);
Matrix number_operator(int dim);
Matrix pauli(Axis axis);
Matrix kron(const Matrix& a, const Matrix& b);

Matrix embed(const Matrix& op, std::size_t slot, const SubsystemLayout& layout);
Matrix embed(const Matrix& op, Subsystem s, const SubsystemLayout& layout);

// exp(A). Hermitian and anti-Hermitian inputs go through an eigendecomposition;
// everything else uses scaling and squaring with a Taylor series truncated at
// 1e-16 relative term size (about 1e-12 relative overall).
Matrix matrix_exponential(const Matrix& a);

double max_abs(const Matrix& a);
double hermiticity_error(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol);
Matrix commutator(const Matrix& a, const Matrix& b);

}  // namespace emsim::ops
