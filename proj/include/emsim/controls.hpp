// controls.hpp: Pulse envelopes and the piecewise time-dependent Hamiltonian
// handed from the pulse renderer to the integrators.

#pragma once

#include "emsim/operators.hpp"

#include <vector>

namespace emsim {

struct Envelope {
    enum class Kind { Square, Gaussian };

    Kind kind = Kind::Square;
    double t0 = 0.0;          // square: start time; gaussian: centre (us)
    double width = 0.0;       // square: duration; gaussian: sigma (us)
    double truncation = 3.0;  // gaussian support is t0 +- truncation * sigma
    double scale = 1.0;       // multiplies the raw shape (area renormalization)

    static Envelope square(double start, double duration);
    // Gaussian truncated at +-truncation*sigma, rescaled so the clipped area equals
    // the untruncated sqrt(2 pi) sigma.
    static Envelope gaussian(double centre, double sigma, double truncation = 3.0);

    double begin() const noexcept;
    double end() const noexcept;
    // Shape without clipping to [begin, end). Integrators clip by interval.
    double raw(double t) const noexcept;
    double operator()(double t) const noexcept;
    double area() const noexcept;
    void validate() const;
};

// Transverse drive term amplitude * A(t) * cos(carrier * t + phase) * op.
struct DriveTerm {
    Matrix op;         // Hermitian, e.g. b + b†
    double amplitude;  // rad/us
    double carrier;    // rad/us
    double phase;      // rad
    Envelope envelope;

    double coefficient(double t) const noexcept;
};

// H(t) = H_k + sum_j drive_j(t) for t in segment k. Segments tile [0, end of last
// segment]; the last segment's static part extends beyond it.
class ControlledHamiltonian {
public:
    struct Segment {
        double t0;
        double t1;
        Matrix h;
    };

    ControlledHamiltonian(std::vector<Segment> segments, std::vector<DriveTerm> drives);
    static ControlledHamiltonian constant(const Matrix& h, double duration);

    int dim() const noexcept { return dim_; }
    double duration() const noexcept { return segments_.back().t1; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::vector<DriveTerm>& drives() const noexcept { return drives_; }

    // Index of the segment that governs the open interval around t_mid.
    std::size_t segment_index(double t_mid) const noexcept;
    const Matrix& static_part(double t_mid) const { return segments_[segment_index(t_mid)].h; }

    // Full lab-frame H(t), with static part and active drives chosen from the interval
    // containing `interval_mid` (defaults to t itself).
    Matrix at(double t) const;
    Matrix at(double t, double interval_mid) const;

    // Sorted unique segment edges and drive support edges in [0, duration()].
    std::vector<double> breakpoints() const;

private:
    std::vector<Segment> segments_;
    std::vector<DriveTerm> drives_;
    int dim_ = 0;
};

}  // namespace emsim
