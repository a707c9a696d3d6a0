#pragma once

#include <cstddef>
#include <vector>

#include "recmeth/errors.hpp"

namespace recmeth {

// Taylor coefficients c_0..c_K at z = 0.
template <class T>
class Jet {
public:
    Jet() = default;
    explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, T{}) {}
    Jet(int order, T constant) : Jet(order) { c_[0] = constant; }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    T& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    const T& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    const std::vector<T>& coeffs() const { return c_; }

    static Jet identity(int order) {
        Jet j(order);
        if (order >= 1) j[1] = T{1};
        return j;
    }

    // z * this, truncated.
    Jet times_z() const {
        Jet r(order());
        for (int k = order(); k >= 1; --k) r[k] = c_[k - 1];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= order(); ++k) c_[k] += o[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= order(); ++k) c_[k] -= o[k];
        return *this;
    }
    template <class S>
    Jet& operator*=(const S& s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    template <class S>
    Jet& operator/=(const S& s) {
        for (auto& v : c_) v /= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.order());
        for (int k = 0; k <= a.order(); ++k)
            for (int j = 0; j <= k; ++j) r[k] += a[j] * b[k - j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b[0] == T{}) throw ValidationError("jet division by a series with zero constant term");
        Jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) {
            T acc = a[k];
            for (int j = 1; j <= k; ++j) acc -= b[j] * r[k - j];
            r[k] = acc / b[0];
        }
        return r;
    }

private:
    std::vector<T> c_;
};

}  // namespace recmeth
