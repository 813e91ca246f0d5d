#pragma once

// Compile-time dimensional analysis over the SI base dimensions used by the
// mechanism sizing code (mass, length, time). Values are stored in SI units.

#include <cmath>
#include <compare>

namespace raddeploy::units {

template <int Mass, int Length, int Time>
class Quantity {
public:
    constexpr Quantity() = default;
    constexpr explicit Quantity(double v) : value_(v) {}

    [[nodiscard]] constexpr double value() const { return value_; }

    constexpr Quantity& operator+=(Quantity rhs) {
        value_ += rhs.value_;
        return *this;
    }
    constexpr Quantity& operator-=(Quantity rhs) {
        value_ -= rhs.value_;
        return *this;
    }

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity{a.value_ + b.value_}; }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity{a.value_ - b.value_}; }
    friend constexpr Quantity operator-(Quantity a) { return Quantity{-a.value_}; }
    friend constexpr Quantity operator*(double s, Quantity q) { return Quantity{s * q.value_}; }
    friend constexpr Quantity operator*(Quantity q, double s) { return Quantity{q.value_ * s}; }
    friend constexpr Quantity operator/(Quantity q, double s) { return Quantity{q.value_ / s}; }
    friend constexpr auto operator<=>(Quantity, Quantity) = default;

private:
    double value_ = 0.0;
};

template <int M1, int L1, int T1, int M2, int L2, int T2>
constexpr Quantity<M1 + M2, L1 + L2, T1 + T2> operator*(Quantity<M1, L1, T1> a, Quantity<M2, L2, T2> b) {
    return Quantity<M1 + M2, L1 + L2, T1 + T2>{a.value() * b.value()};
}

template <int M1, int L1, int T1, int M2, int L2, int T2>
constexpr Quantity<M1 - M2, L1 - L2, T1 - T2> operator/(Quantity<M1, L1, T1> a, Quantity<M2, L2, T2> b) {
    return Quantity<M1 - M2, L1 - L2, T1 - T2>{a.value() / b.value()};
}

// A ratio of like quantities collapses to a plain number.
template <int M, int L, int T>
constexpr double ratio(Quantity<M, L, T> a, Quantity<M, L, T> b) {
    return a.value() / b.value();
}

template <int M, int L, int T>
bool isfinite(Quantity<M, L, T> q) {
    return std::isfinite(q.value());
}

using Dimensionless = Quantity<0, 0, 0>;
using Mass = Quantity<1, 0, 0>;
using Length = Quantity<0, 1, 0>;
using Duration = Quantity<0, 0, 1>;
using Velocity = Quantity<0, 1, -1>;
using Acceleration = Quantity<0, 1, -2>;
using Force = Quantity<1, 1, -2>;
using Torque = Quantity<1, 2, -2>;
using SpecificForce = Quantity<0, 1, -2>;  // N/kg, dimensionally an acceleration

constexpr Mass kilograms(double v) { return Mass{v}; }
constexpr Length meters(double v) { return Length{v}; }
constexpr Length millimeters(double v) { return Length{v * 1e-3}; }
constexpr Duration seconds(double v) { return Duration{v}; }
constexpr Velocity meters_per_second(double v) { return Velocity{v}; }
constexpr Acceleration meters_per_second2(double v) { return Acceleration{v}; }
constexpr Force newtons(double v) { return Force{v}; }
constexpr Torque newton_meters(double v) { return Torque{v}; }

// 1 kgf·cm expressed in N·m (standard gravity 9.80665).
constexpr Torque kilogram_force_centimeters(double v) { return Torque{v * 9.80665e-2}; }

}  // namespace raddeploy::units
