#pragma once

// Scalar that counts its floating-point operations. Instantiating the physics
// templates with it gives exact per-call operation counts for the kernels.

#include <cmath>
#include <cstdint>

namespace hodg {

struct OpCounter {
    std::int64_t add = 0, mul = 0, div = 0, sqrt = 0, other = 0;
    std::int64_t total() const { return add + mul + div + sqrt + other; }
};

class CountingReal {
public:
    CountingReal() = default;
    explicit CountingReal(double v) : v_(v) {}
    explicit operator double() const { return v_; }
    double value() const { return v_; }

    static OpCounter& counter() {
        thread_local OpCounter c;
        return c;
    }
    static void reset() { counter() = {}; }

    friend CountingReal operator+(CountingReal a, CountingReal b) { ++counter().add; return CountingReal(a.v_ + b.v_); }
    friend CountingReal operator-(CountingReal a, CountingReal b) { ++counter().add; return CountingReal(a.v_ - b.v_); }
    friend CountingReal operator*(CountingReal a, CountingReal b) { ++counter().mul; return CountingReal(a.v_ * b.v_); }
    friend CountingReal operator/(CountingReal a, CountingReal b) { ++counter().div; return CountingReal(a.v_ / b.v_); }
    friend CountingReal operator-(CountingReal a) { return CountingReal(-a.v_); }
    CountingReal& operator+=(CountingReal b) { return *this = *this + b; }
    CountingReal& operator-=(CountingReal b) { return *this = *this - b; }
    CountingReal& operator*=(CountingReal b) { return *this = *this * b; }
    CountingReal& operator/=(CountingReal b) { return *this = *this / b; }

    friend bool operator<(CountingReal a, CountingReal b) { return a.v_ < b.v_; }
    friend bool operator>(CountingReal a, CountingReal b) { return a.v_ > b.v_; }
    friend bool operator<=(CountingReal a, CountingReal b) { return a.v_ <= b.v_; }
    friend bool operator>=(CountingReal a, CountingReal b) { return a.v_ >= b.v_; }
    friend bool operator==(CountingReal a, CountingReal b) { return a.v_ == b.v_; }

    friend CountingReal sqrt(CountingReal a) { ++counter().sqrt; return CountingReal(std::sqrt(a.v_)); }
    friend CountingReal abs(CountingReal a) { return CountingReal(std::abs(a.v_)); }
    friend CountingReal pow(CountingReal a, CountingReal b) { ++counter().other; return CountingReal(std::pow(a.v_, b.v_)); }

private:
    double v_ = 0.0;
};

}  // namespace hodg
