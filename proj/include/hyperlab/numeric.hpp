#pragma once

namespace hyperlab {

// Compensated (Kahan) summation.  Norm accumulations run through this so
// that identities checked at 1e-12 are not eaten by cancellation.
class KahanAccumulator {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace hyperlab
