#pragma once

#include <cmath>

namespace phonon_chain::detail {

// Neumaier's variant of Kahan summation.
class compensated_sum {
public:
    void add(double value) noexcept {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }

    compensated_sum& operator+=(double value) noexcept {
        add(value);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace phonon_chain::detail
