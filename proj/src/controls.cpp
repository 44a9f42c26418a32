// controls.cpp: Envelopes and piecewise controlled Hamiltonians

#include "emsim/controls.hpp"

#include "emsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace emsim {

Envelope Envelope::square(double start, double duration) {
    Envelope e;
    e.kind = Kind::Square;
    e.t0 = start;
    e.width = duration;
    e.validate();
    return e;
}

Envelope Envelope::gaussian(double centre, double sigma, double truncation) {
    Envelope e;
    e.kind = Kind::Gaussian;
    e.t0 = centre;
    e.width = sigma;
    e.truncation = truncation;
    e.validate();
    e.scale = 1.0 / std::erf(truncation / std::sqrt(2.0));
    return e;
}

double Envelope::begin() const noexcept {
    return kind == Kind::Square ? t0 : t0 - truncation * width;
}

double Envelope::end() const noexcept {
    return kind == Kind::Square ? t0 + width : t0 + truncation * width;
}

double Envelope::raw(double t) const noexcept {
    if (kind == Kind::Square) return scale;
    const double u = (t - t0) / width;
    return scale * std::exp(-0.5 * u * u);
}

double Envelope::operator()(double t) const noexcept {
    return (t >= begin() && t < end()) ? raw(t) : 0.0;
}

double Envelope::area() const noexcept {
    if (kind == Kind::Square) return scale * width;
    return scale * width * std::sqrt(2.0 * std::numbers::pi) *
           std::erf(truncation / std::sqrt(2.0));
}

void Envelope::validate() const {
    if (!std::isfinite(t0) || !std::isfinite(width) || width <= 0.0) {
        throw ScheduleError("Envelope: width must be finite and > 0");
    }
    if (kind == Kind::Gaussian && (truncation < 2.5 || truncation > 5.0)) {
        throw ScheduleError("Envelope: gaussian truncation multiple must lie in [2.5, 5]");
    }
}

double DriveTerm::coefficient(double t) const noexcept {
    return amplitude * envelope.raw(t) * std::cos(carrier * t + phase);
}

ControlledHamiltonian::ControlledHamiltonian(std::vector<Segment> segments,
                                             std::vector<DriveTerm> drives)
    : segments_(std::move(segments)), drives_(std::move(drives)) {
    if (segments_.empty()) throw ScheduleError("ControlledHamiltonian: no segments");
    dim_ = static_cast<int>(segments_.front().h.rows());
    double t = 0.0;
    for (const auto& s : segments_) {
        if (s.h.rows() != dim_ || s.h.cols() != dim_) {
            throw DimensionError("ControlledHamiltonian: segment dimension mismatch");
        }
        if (std::abs(s.t0 - t) > 1e-12 || !(s.t1 >= s.t0)) {
            throw ScheduleError("ControlledHamiltonian: segments must tile [0, T]");
        }
        t = s.t1;
    }
    for (const auto& d : drives_) {
        if (d.op.rows() != dim_ || d.op.cols() != dim_) {
            throw DimensionError("ControlledHamiltonian: drive dimension mismatch");
        }
        d.envelope.validate();
    }
}

ControlledHamiltonian ControlledHamiltonian::constant(const Matrix& h, double duration) {
    return ControlledHamiltonian({{0.0, duration, h}}, {});
}

std::size_t ControlledHamiltonian::segment_index(double t_mid) const noexcept {
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (t_mid < segments_[k].t1) return k;
    }
    return segments_.size() - 1;
}

Matrix ControlledHamiltonian::at(double t) const { return at(t, t); }

Matrix ControlledHamiltonian::at(double t, double mid) const {
    Matrix h = static_part(mid);
    for (const auto& d : drives_) {
        if (mid >= d.envelope.begin() && mid < d.envelope.end()) h += d.coefficient(t) * d.op;
    }
    return h;
}

std::vector<double> ControlledHamiltonian::breakpoints() const {
    std::vector<double> pts{0.0};
    for (const auto& s : segments_) pts.push_back(s.t1);
    for (const auto& d : drives_) {
        pts.push_back(d.envelope.begin());
        pts.push_back(d.envelope.end());
    }
    const double tend = duration();
    std::vector<double> out;
    std::sort(pts.begin(), pts.end());
    for (double p : pts) {
        if (p < 0.0 || p > tend) continue;
        if (out.empty() || p - out.back() > 1e-12) out.push_back(p);
    }
    return out;
}

}  // namespace emsim
