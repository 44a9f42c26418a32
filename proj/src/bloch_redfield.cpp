// bloch_redfield.cpp: Secular Bloch-Redfield master equation for a static Hamiltonian

#include "emsim/dynamics.hpp"

#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace emsim {

double NoiseCoupling::spectrum(double w, double zero_tol) const noexcept {
    if (std::abs(w) <= zero_tol) return rate_zero;
    return w > 0.0 ? rate_positive : 0.0;
}

namespace {

// Union-find over Liouville-space indices.
struct Components {
    std::vector<int> parent;
    explicit Components(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

struct Block {
    std::vector<int> idx;
    Matrix gen;
    std::map<long long, Matrix> propagators;  // keyed by dt in units of 1e-9 us
};

}  // namespace

Trajectory bloch_redfield_evolve(const Matrix& h, const std::vector<NoiseCoupling>& couplings,
                                 const Matrix& rho0, const std::vector<double>& t_grid,
                                 const BlochRedfieldOptions& opts) {
    if (!ops::is_hermitian(h, 1e-9 * std::max(1.0, ops::max_abs(h)))) {
        throw InvalidInput("bloch_redfield_evolve: H must be Hermitian");
    }
    const int n = static_cast<int>(h.rows());
    if (rho0.rows() != n || rho0.cols() != n) throw DimensionError("bloch_redfield_evolve: rho0 dimension");
    if (t_grid.empty()) throw InvalidInput("bloch_redfield_evolve: empty time grid");
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (t_grid[k] < t_grid[k - 1]) throw InvalidInput("bloch_redfield_evolve: time grid must be sorted");
    }
    double max_rate = 0.0;
    for (const auto& c : couplings) {
        if (c.op.rows() != n || !ops::is_hermitian(c.op, 1e-12 * std::max(1.0, ops::max_abs(c.op)))) {
            throw InvalidInput("bloch_redfield_evolve: coupling '" + c.label + "' must be Hermitian of matching size");
        }
        if (c.rate_zero < 0.0 || c.rate_positive < 0.0) {
            throw InvalidInput("bloch_redfield_evolve: negative rate in '" + c.label + "'");
        }
        max_rate = std::max({max_rate, c.rate_zero, c.rate_positive});
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw NumericError("bloch_redfield_evolve: eigendecomposition failed");
    const Eigen::VectorXd e = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    const double zero_tol = 1e-9 * std::max(1.0, e.cwiseAbs().maxCoeff());
    const double cutoff = opts.secular_factor * max_rate;
    auto w = [&](int i, int j) { return e(i) - e(j); };

    // A_k in the eigenbasis and the two contracted sums entering the tensor.
    std::vector<Matrix> a;
    std::vector<Matrix> g_left, g_right;
    for (const auto& c : couplings) {
        const Matrix ak = v.adjoint() * c.op * v;
        Matrix gl = Matrix::Zero(n, n);  // sum_m A_am A_mc S(w_cm)
        Matrix gr = Matrix::Zero(n, n);  // sum_m A_dm A_mb S(w_dm)
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                cplx sl = 0.0, sr = 0.0;
                for (int m = 0; m < n; ++m) {
                    sl += ak(x, m) * ak(m, y) * c.spectrum(w(y, m), zero_tol);
                    sr += ak(x, m) * ak(m, y) * c.spectrum(w(x, m), zero_tol);
                }
                gl(x, y) = sl;
                gr(x, y) = sr;
            }
        }
        a.push_back(ak);
        g_left.push_back(gl);
        g_right.push_back(gr);
    }

    const int nn = n * n;
    auto vec = [n](int i, int j) { return i * n + j; };
    std::vector<std::vector<std::pair<int, cplx>>> rows(nn);
    Components comp(nn);
    for (int aa = 0; aa < n; ++aa) {
        for (int bb = 0; bb < n; ++bb) {
            const int I = vec(aa, bb);
            rows[I].push_back({I, -kI * w(aa, bb)});
            for (int cc = 0; cc < n; ++cc) {
                for (int dd = 0; dd < n; ++dd) {
                    if (std::abs(w(aa, bb) - w(cc, dd)) > cutoff) continue;
                    cplx elem = 0.0;
                    for (std::size_t k = 0; k < couplings.size(); ++k) {
                        const auto& c = couplings[k];
                        elem += a[k](aa, cc) * a[k](dd, bb) *
                                0.5 * (c.spectrum(w(cc, aa), zero_tol) + c.spectrum(w(dd, bb), zero_tol));
                        if (bb == dd) elem -= 0.5 * g_left[k](aa, cc);
                        if (aa == cc) elem -= 0.5 * g_right[k](dd, bb);
                    }
                    if (std::abs(elem) == 0.0) continue;
                    const int J = vec(cc, dd);
                    rows[I].push_back({J, elem});
                    comp.join(I, J);
                }
            }
        }
    }

    std::map<int, int> block_of_root;
    std::vector<Block> blocks;
    std::vector<int> block_of(nn), pos_in_block(nn);
    for (int I = 0; I < nn; ++I) {
        const int r = comp.find(I);
        auto it = block_of_root.find(r);
        if (it == block_of_root.end()) {
            it = block_of_root.emplace(r, static_cast<int>(blocks.size())).first;
            blocks.emplace_back();
        }
        block_of[I] = it->second;
        pos_in_block[I] = static_cast<int>(blocks[it->second].idx.size());
        blocks[it->second].idx.push_back(I);
    }
    for (auto& b : blocks) b.gen = Matrix::Zero(b.idx.size(), b.idx.size());
    for (int I = 0; I < nn; ++I) {
        auto& b = blocks[block_of[I]];
        for (const auto& [J, val] : rows[I]) b.gen(pos_in_block[I], pos_in_block[J]) += val;
    }

    Matrix rho = v.adjoint() * rho0 * v;
    Trajectory traj;
    double t = t_grid.front();
    for (double target : t_grid) {
        const double dt = target - t;
        if (dt > 0.0) {
            const long long key = std::llround(dt * 1e9);
            Matrix next = Matrix::Zero(n, n);
            for (auto& b : blocks) {
                auto it = b.propagators.find(key);
                if (it == b.propagators.end()) {
                    it = b.propagators.emplace(key, ops::matrix_exponential(b.gen * dt)).first;
                }
                Vector xin(b.idx.size());
                for (std::size_t q = 0; q < b.idx.size(); ++q) xin(q) = rho(b.idx[q] / n, b.idx[q] % n);
                const Vector xout = it->second * xin;
                for (std::size_t q = 0; q < b.idx.size(); ++q) next(b.idx[q] / n, b.idx[q] % n) = xout(q);
            }
            rho = next;
            t = target;
        }
        Matrix lab = v * rho * v.adjoint();
        lab = 0.5 * (lab + lab.adjoint());
        traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(lab.trace().real() - 1.0));
        traj.times.push_back(target);
        traj.states.push_back(std::move(lab));
        ++traj.steps;
    }
    return traj;
}

}  // namespace emsim
