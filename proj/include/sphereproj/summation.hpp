#pragma once

#include <cmath>
#include <span>

namespace sphereproj {

/// Neumaier's variant of Kahan summation. Order of `add` calls is the
/// summation order; results are deterministic for a fixed order.
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;

    constexpr void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    constexpr CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    constexpr double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double compensated_abs_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(std::abs(x));
    return s.value();
}

} // namespace sphereproj
