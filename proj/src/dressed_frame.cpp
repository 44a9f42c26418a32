// dressed_frame.cpp: Lindblad integration in the eigenframe of each static segment.
//
// Within a segment the static part H_s = V E V† is removed exactly: the state is
// rho_I(tau) = e^{iE tau} V† rho V e^{-iE tau}, tau measured from the segment start.
// Every remaining operator element then carries an explicit phase e^{i nu tau}.
// Drive elements with |nu| above the secular cutoff are dropped (counter-rotating and
// transmon-frequency terms). Jump-operator elements are grouped into bands of Bohr
// frequency separated by more than the cutoff; cross terms between bands are dropped and
// each band acts as its own jump operator, which keeps the generator in Lindblad form.

#include "dressed_frame.hpp"

#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace emsim::detail {

namespace {

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Sparse operator sum_e v_e e^{i nu_e tau} |r_e><c_e| with cached phasors.
struct PhasedList {
    std::vector<int> r, c;
    std::vector<cplx> v;
    std::vector<double> nu;
    // Phasors at the current step's start, midpoint and end.
    std::vector<cplx> p0, p1, p2, w;

    std::size_t size() const noexcept { return v.size(); }

    void push(int row, int col, cplx value, double freq) {
        r.push_back(row);
        c.push_back(col);
        v.push_back(value);
        nu.push_back(freq);
    }

    double max_abs_nu() const noexcept {
        double m = 0.0;
        for (double x : nu) m = std::max(m, std::abs(x));
        return m;
    }

    void reset(double tau, double step) {
        const std::size_t n = size();
        p0.resize(n);
        p1.resize(n);
        p2.resize(n);
        w.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            p0[k] = std::exp(kI * (nu[k] * tau));
            w[k] = std::exp(kI * (nu[k] * 0.5 * step));
        }
        precompute();
    }

    void precompute() {
        for (std::size_t k = 0; k < size(); ++k) {
            p1[k] = p0[k] * w[k];
            p2[k] = p1[k] * w[k];
        }
    }

    void advance() {
        p0.swap(p2);
        precompute();
    }

    const std::vector<cplx>& phasors(int stage) const {
        return stage == 0 ? p0 : (stage == 3 ? p2 : p1);
    }
};

struct DriveBlock {
    std::size_t drive;
    PhasedList list;
};

struct SegmentFrame {
    double t_ref = 0.0;
    Eigen::VectorXd e;  // eigenvalues, rad/us
    Matrix v;           // eigenvectors (columns)
    std::vector<DriveBlock> drives;
    PhasedList k;  // -(1/2) sum L† L, already multiplied into the effective Hamiltonian
    std::vector<PhasedList> jumps;
    double diss_nu = 0.0;    // fastest relevant phase in the dissipative part
    double rate_norm = 0.0;  // row-sum bound of sum L† L
};

constexpr double kRelThreshold = 1e-10;
// Jump-operator elements below this relative amplitude change rates by < 1e-6 but, being
// dressing admixtures at large Bohr frequencies, would chain bands and force tiny steps.
constexpr double kJumpDrop = 1e-3;

SegmentFrame build_frame(const ControlledHamiltonian& h, std::size_t seg,
                         const LindbladSpec& diss, double cutoff) {
    SegmentFrame f;
    const auto& s = h.segments()[seg];
    f.t_ref = s.t0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.h);
    if (es.info() != Eigen::Success) throw NumericError("dressed frame: eigendecomposition failed");
    f.e = es.eigenvalues();
    f.v = es.eigenvectors();
    const int dim = static_cast<int>(f.e.size());

    for (std::size_t j = 0; j < h.drives().size(); ++j) {
        const auto& d = h.drives()[j];
        // The last segment's static part extends to infinity.
        const double seg_end = seg + 1 == h.segments().size()
                                   ? std::numeric_limits<double>::infinity()
                                   : s.t1;
        if (d.envelope.end() <= s.t0 || d.envelope.begin() >= seg_end) continue;
        const Matrix x = f.v.adjoint() * d.op * f.v;
        const double thr = kRelThreshold * std::max(ops::max_abs(x), 1e-300);
        DriveBlock blk{j, {}};
        const cplx plus = 0.5 * d.amplitude * std::exp(kI * (d.carrier * f.t_ref + d.phase));
        const cplx minus = 0.5 * d.amplitude * std::exp(-kI * (d.carrier * f.t_ref + d.phase));
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (std::abs(x(a, b)) <= thr) continue;
                const double wab = f.e(a) - f.e(b);
                if (std::abs(wab + d.carrier) <= cutoff) blk.list.push(a, b, plus * x(a, b), wab + d.carrier);
                if (std::abs(wab - d.carrier) <= cutoff) blk.list.push(a, b, minus * x(a, b), wab - d.carrier);
            }
        }
        f.drives.push_back(std::move(blk));
    }

    Matrix kdense = Matrix::Zero(dim, dim);
    for (const auto& term : diss.terms) {
        if (term.rate == 0.0) continue;
        const Matrix l = std::sqrt(term.rate) * (f.v.adjoint() * term.op * f.v);
        const double thr = kJumpDrop * std::max(ops::max_abs(l), 1e-300);
        struct Elem {
            int r, c;
            cplx v;
            double nu;
        };
        std::vector<Elem> elems;
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (std::abs(l(a, b)) > thr) elems.push_back({a, b, l(a, b), f.e(a) - f.e(b)});
            }
        }
        std::sort(elems.begin(), elems.end(), [](const Elem& x, const Elem& y) { return x.nu < y.nu; });
        std::size_t start = 0;
        for (std::size_t k = 0; k <= elems.size(); ++k) {
            if (k == elems.size() || (k > start && elems[k].nu - elems[k - 1].nu > cutoff)) {
                if (k > start) {
                    PhasedList band;
                    Matrix ld = Matrix::Zero(dim, dim);
                    for (std::size_t q = start; q < k; ++q) {
                        band.push(elems[q].r, elems[q].c, elems[q].v, elems[q].nu);
                        ld(elems[q].r, elems[q].c) = elems[q].v;
                    }
                    f.diss_nu = std::max(f.diss_nu, elems[k - 1].nu - elems[start].nu);
                    kdense += ld.adjoint() * ld;
                    f.jumps.push_back(std::move(band));
                }
                start = k;
            }
        }
    }
    if (!f.jumps.empty()) {
        f.rate_norm = kdense.cwiseAbs().rowwise().sum().maxCoeff();
        const double thr = kRelThreshold * std::max(ops::max_abs(kdense), 1e-300);
        const double kmax = ops::max_abs(kdense);
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (std::abs(kdense(a, b)) <= thr) continue;
                const double nu = f.e(a) - f.e(b);
                f.k.push(a, b, -0.5 * kdense(a, b), nu);
                if (std::abs(kdense(a, b)) > 1e-6 * kmax) f.diss_nu = std::max(f.diss_nu, std::abs(nu));
            }
        }
    }
    return f;
}

// Dense rho_I <-> lab conversions.
Matrix frame_to_lab(const SegmentFrame& f, const RowMatrix& x, double t) {
    const int dim = static_cast<int>(f.e.size());
    Vector u(dim);
    for (int a = 0; a < dim; ++a) u(a) = std::exp(-kI * (f.e(a) * (t - f.t_ref)));
    const Matrix m = u.asDiagonal() * Matrix(x) * u.conjugate().asDiagonal();
    return f.v * m * f.v.adjoint();
}

RowMatrix lab_to_frame(const SegmentFrame& f, const Matrix& rho, double t) {
    const int dim = static_cast<int>(f.e.size());
    Vector u(dim);
    for (int a = 0; a < dim; ++a) u(a) = std::exp(kI * (f.e(a) * (t - f.t_ref)));
    const Matrix m = f.v.adjoint() * rho * f.v;
    return RowMatrix(u.asDiagonal() * m * u.conjugate().asDiagonal());
}

class Rhs {
public:
    Rhs(const ControlledHamiltonian& h, const SegmentFrame& f, int dim)
        : h_(h), f_(f), q_(dim, dim), y_(dim, dim), yd_(dim, dim) {}

    // active[j] marks drive blocks that act in the current interval.
    void operator()(const std::vector<char>& active, double t, int stage, const RowMatrix& x,
                    RowMatrix& out) {
        q_.setZero();
        for (std::size_t j = 0; j < f_.drives.size(); ++j) {
            if (!active[j]) continue;
            const auto& blk = f_.drives[j];
            const double amp = h_.drives()[blk.drive].envelope.raw(t);
            const auto& ph = blk.list.phasors(stage);
            for (std::size_t e = 0; e < blk.list.size(); ++e) {
                const cplx coef = -kI * amp * blk.list.v[e] * ph[e];
                q_.row(blk.list.r[e]) += coef * x.row(blk.list.c[e]);
            }
        }
        {
            const auto& ph = f_.k.phasors(stage);
            for (std::size_t e = 0; e < f_.k.size(); ++e) {
                q_.row(f_.k.r[e]) += (f_.k.v[e] * ph[e]) * x.row(f_.k.c[e]);
            }
        }
        out = q_ + q_.adjoint();
        for (const auto& band : f_.jumps) {
            // L rho L† = L (L rho)† for Hermitian rho.
            const auto& ph = band.phasors(stage);
            y_.setZero();
            for (std::size_t e = 0; e < band.size(); ++e) {
                y_.row(band.r[e]) += (band.v[e] * ph[e]) * x.row(band.c[e]);
            }
            yd_ = y_.adjoint();
            for (std::size_t e = 0; e < band.size(); ++e) {
                out.row(band.r[e]) += (band.v[e] * ph[e]) * yd_.row(band.c[e]);
            }
        }
    }

private:
    const ControlledHamiltonian& h_;
    const SegmentFrame& f_;
    RowMatrix q_, y_, yd_;
};

}  // namespace

Trajectory evolve_dressed(const ControlledHamiltonian& h, const LindbladSpec& diss,
                          const Matrix& rho0, const std::vector<double>& t_grid,
                          const IntegratorConfig& cfg, const Observer& observer) {
    const int dim = h.dim();
    const double cutoff = angular(cfg.secular_cutoff_mhz);
    const auto edges = integration_edges(h, t_grid);

    Trajectory traj;
    std::size_t seg = h.segment_index(0.5 * (edges.front() + (edges.size() > 1 ? edges[1] : edges.front())));
    SegmentFrame frame = build_frame(h, seg, diss, cutoff);
    RowMatrix x = lab_to_frame(frame, rho0, edges.front());
    std::size_t next_out = 0;
    auto emit = [&](double t) {
        while (next_out < t_grid.size() && std::abs(t_grid[next_out] - t) <= 1e-13) {
            Matrix r = frame_to_lab(frame, x, t);
            r = 0.5 * (r + r.adjoint());
            check_trace(r, t, traj);
            traj.times.push_back(t_grid[next_out]);
            traj.states.push_back(std::move(r));
            ++next_out;
        }
    };
    if (observer) observer(edges.front(), rho0);
    emit(edges.front());

    RowMatrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e];
        const double b = edges[e + 1];
        const double mid = 0.5 * (a + b);
        const std::size_t s = h.segment_index(mid);
        if (s != seg) {
            const Matrix lab = frame_to_lab(frame, x, a);
            seg = s;
            frame = build_frame(h, seg, diss, cutoff);
            x = lab_to_frame(frame, lab, a);
        }

        std::vector<char> active(frame.drives.size(), 0);
        double nu_drive = 0.0;
        double hmax = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < frame.drives.size(); ++j) {
            const auto& env = h.drives()[frame.drives[j].drive].envelope;
            if (mid >= env.begin() && mid < env.end()) {
                active[j] = 1;
                nu_drive = std::max(nu_drive, frame.drives[j].list.max_abs_nu());
                if (env.kind == Envelope::Kind::Gaussian) hmax = std::min(hmax, env.width / 10.0);
                // Amplitude scale matters for the RK4 error of the coherent drive itself.
                double amax = 0.0;
                for (const auto& v : frame.drives[j].list.v) amax = std::max(amax, std::abs(v));
                nu_drive = std::max(nu_drive, 2.0 * amax * env.scale);
            }
        }
        if (nu_drive > 0.0) hmax = std::min(hmax, kTwoPi / (cfg.drive_samples_per_period * nu_drive));
        if (frame.diss_nu > 0.0) hmax = std::min(hmax, kTwoPi / (8.0 * frame.diss_nu));
        if (frame.rate_norm > 0.0) hmax = std::min(hmax, 0.05 / frame.rate_norm);
        hmax *= cfg.step_relax;
        if (cfg.step > 0.0) hmax = std::min(hmax, cfg.step);
        if (!std::isfinite(hmax)) hmax = b - a;

        const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / hmax - 1e-9)));
        const double step = (b - a) / n;
        Rhs rhs(h, frame, dim);
        auto reset_all = [&](double tau) {
            for (auto& d : frame.drives) d.list.reset(tau, step);
            frame.k.reset(tau, step);
            for (auto& j : frame.jumps) j.reset(tau, step);
        };
        reset_all(a - frame.t_ref);
        for (long st = 0; st < n; ++st) {
            const double t = a + st * step;
            if (st > 0 && st % 512 == 0) reset_all(t - frame.t_ref);
            rhs(active, t, 0, x, k1);
            tmp = x + (0.5 * step) * k1;
            rhs(active, t + 0.5 * step, 1, tmp, k2);
            tmp = x + (0.5 * step) * k2;
            rhs(active, t + 0.5 * step, 2, tmp, k3);
            tmp = x + step * k3;
            rhs(active, t + step, 3, tmp, k4);
            x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            // The right-hand side assumes Hermitian x; an anti-Hermitian residue is undamped.
            x = 0.5 * (x + x.adjoint()).eval();
            for (auto& d : frame.drives) d.list.advance();
            frame.k.advance();
            for (auto& j : frame.jumps) j.advance();
            ++traj.steps;
            if (observer && traj.steps % cfg.stride == 0) {
                const double tn = st + 1 == n ? b : t + step;
                observer(tn, frame_to_lab(frame, x, tn));
            }
        }
        emit(b);
    }
    return traj;
}

}  // namespace emsim::detail
