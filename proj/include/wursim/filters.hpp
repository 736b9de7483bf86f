#pragma once

#include <cmath>
#include <numbers>

namespace wursim {

/// Direct-form-II-transposed biquad. Coefficients normalised so a0 = 1.
class Biquad {
public:
    Biquad() = default;
    Biquad(double b0, double b1, double b2, double a1, double a2)
        : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

    /// Constant 0 dB peak-gain band-pass (bilinear transform, centre prewarped).
    static Biquad bandpass(double center_hz, double q, double sample_rate) {
        const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
        const double alpha = std::sin(w0) / (2.0 * q);
        const double a0 = 1.0 + alpha;
        return {alpha / a0, 0.0, -alpha / a0, -2.0 * std::cos(w0) / a0, (1.0 - alpha) / a0};
    }

    double process(double x) {
        const double y = b0_ * x + z1_;
        z1_ = b1_ * x - a1_ * y + z2_;
        z2_ = b2_ * x - a2_ * y;
        return y;
    }

    void reset() { z1_ = z2_ = 0.0; }

private:
    double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
    double z1_ = 0.0, z2_ = 0.0;
};

/// First-order RC low-pass, unity DC gain. The coefficient is the exact
/// discretisation of a continuous RC with time constant tau.
class OnePole {
public:
    OnePole() = default;
    OnePole(double tau, double sample_rate) : alpha_(1.0 - std::exp(-1.0 / (tau * sample_rate))) {}

    double process(double x) {
        y_ += alpha_ * (x - y_);
        return y_;
    }

    [[nodiscard]] double value() const { return y_; }
    void reset(double y = 0.0) { y_ = y; }

private:
    double alpha_ = 1.0;
    double y_ = 0.0;
};

}  // namespace wursim
