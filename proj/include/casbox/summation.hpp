#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace casbox {

// Neumaier's variant of Kahan summation; also handles terms larger than the
// running sum. Works for double and std::complex<double> (componentwise).
template <class T>
class CompensatedSum {
public:
    void add(const T& x) {
        if constexpr (std::is_same_v<T, std::complex<double>>) {
            re_.add(x.real());
            im_.add(x.imag());
        } else {
            T t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }
    }

    CompensatedSum& operator+=(const T& x) {
        add(x);
        return *this;
    }

    T value() const {
        if constexpr (std::is_same_v<T, std::complex<double>>)
            return {re_.value(), im_.value()};
        else
            return sum_ + comp_;
    }

private:
    struct Empty {};
    using Part = std::conditional_t<std::is_same_v<T, std::complex<double>>, CompensatedSum<double>, Empty>;
    T sum_{};
    T comp_{};
    [[no_unique_address]] Part re_{};
    [[no_unique_address]] Part im_{};
};

} // namespace casbox
