/*
Nonnegative floating value with an unbounded binary exponent: a plain
double mantissa in [0.5, 1) plus a 64-bit exponent. Density evolution at
deep recursion levels produces probabilities far below the smallest
subnormal double; this keeps the same 53-bit arithmetic without underflow
so log2 comparisons stay exact.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace mixedpolar {

class XDouble {
  public:
    XDouble() = default;

    static XDouble from(double v) {
        if (v < 0.0) throw std::invalid_argument("XDouble: negative value");
        XDouble x;
        if (v == 0.0) return x;
        int e;
        x.m_ = std::frexp(v, &e);
        x.e_ = e;
        return x;
    }

    bool zero() const { return m_ == 0.0; }

    XDouble operator*(const XDouble& o) const {
        if (zero() || o.zero()) return {};
        XDouble r;
        int adj;
        r.m_ = std::frexp(m_ * o.m_, &adj);
        r.e_ = e_ + o.e_ + adj;
        return r;
    }

    XDouble operator+(const XDouble& o) const {
        if (zero()) return o;
        if (o.zero()) return *this;
        const XDouble& big = e_ >= o.e_ ? *this : o;
        const XDouble& small = e_ >= o.e_ ? o : *this;
        const std::int64_t d = big.e_ - small.e_;
        if (d > 60) return big;  // below the 53-bit mantissa resolution
        XDouble r;
        int adj;
        r.m_ = std::frexp(big.m_ + std::ldexp(small.m_, static_cast<int>(-d)), &adj);
        r.e_ = big.e_ + adj;
        return r;
    }

    XDouble& operator+=(const XDouble& o) { return *this = *this + o; }

    XDouble div_by(double v) const {
        if (zero()) return {};
        XDouble r;
        int adj;
        r.m_ = std::frexp(m_ / v, &adj);
        r.e_ = e_ + adj;
        return r;
    }

    double log2() const {
        if (zero()) return -std::numeric_limits<double>::infinity();
        return std::log2(m_) + static_cast<double>(e_);
    }

    bool operator<(const XDouble& o) const {
        if (zero() || o.zero()) return !zero() ? false : !o.zero();
        if (e_ != o.e_) return e_ < o.e_;
        return m_ < o.m_;
    }

  private:
    double m_ = 0.0;       // 0 or in [0.5, 1)
    std::int64_t e_ = 0;
};

}  // namespace mixedpolar
