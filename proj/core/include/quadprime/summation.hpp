#pragma once

#include <cmath>
#include <complex>

namespace quadprime {

// Neumaier's variant of Kahan summation. The result depends only on the
// order in which values are added.
class CompensatedSum {
public:
    void add(double value) noexcept {
        const double t = sum_ + value;
        if (std::fabs(sum_) >= std::fabs(value))
            carry_ += (sum_ - t) + value;
        else
            carry_ += (value - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double value) noexcept {
        add(value);
        return *this;
    }

    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(std::complex<double> value) noexcept {
        re_.add(value.real());
        im_.add(value.imag());
    }

    CompensatedComplexSum& operator+=(std::complex<double> value) noexcept {
        add(value);
        return *this;
    }

    std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

}  // namespace quadprime
