#pragma once

// Truncated bivariate Taylor series of total degree <= K with complex
// coefficients. c(a, b) multiplies t1^a t2^b, so the partial derivative
// d1^a d2^b equals a! b! c(a, b) at the expansion point.

#include <array>
#include <complex>

namespace solsurf::taylor {

using cd = std::complex<double>;

template <int K>
struct Series {
    static constexpr int kSide = K + 1;
    std::array<cd, kSide * kSide> c{};

    cd& at(int a, int b) { return c[a * kSide + b]; }
    const cd& at(int a, int b) const { return c[a * kSide + b]; }

    static Series constant(cd v)
    {
        Series s;
        s.at(0, 0) = v;
        return s;
    }
    // Independent variable number `which` (1 or 2) with value v.
    static Series variable(int which, cd v)
    {
        Series s;
        s.at(0, 0) = v;
        if constexpr (K >= 1) {
            if (which == 1)
                s.at(1, 0) = 1.0;
            else
                s.at(0, 1) = 1.0;
        }
        return s;
    }

    cd value() const { return at(0, 0); }
    // Partial derivative d1^a d2^b at the expansion point.
    cd deriv(int a, int b) const
    {
        double f = 1.0;
        for (int i = 2; i <= a; ++i) f *= i;
        for (int i = 2; i <= b; ++i) f *= i;
        return f * at(a, b);
    }

    Series& operator+=(const Series& o)
    {
        for (int i = 0; i < kSide * kSide; ++i) c[i] += o.c[i];
        return *this;
    }
    Series& operator-=(const Series& o)
    {
        for (int i = 0; i < kSide * kSide; ++i) c[i] -= o.c[i];
        return *this;
    }
    Series& operator*=(cd s)
    {
        for (auto& x : c) x *= s;
        return *this;
    }
};

template <int K>
Series<K> operator+(Series<K> a, const Series<K>& b) { return a += b; }
template <int K>
Series<K> operator-(Series<K> a, const Series<K>& b) { return a -= b; }
template <int K>
Series<K> operator-(Series<K> a)
{
    for (auto& x : a.c) x = -x;
    return a;
}
template <int K>
Series<K> operator*(Series<K> a, cd s) { return a *= s; }
template <int K>
Series<K> operator*(cd s, Series<K> a) { return a *= s; }

template <int K>
Series<K> operator*(const Series<K>& a, const Series<K>& b)
{
    Series<K> r;
    for (int a1 = 0; a1 <= K; ++a1)
        for (int a2 = 0; a1 + a2 <= K; ++a2) {
            const cd x = a.at(a1, a2);
            if (x == cd(0.0)) continue;
            for (int b1 = 0; a1 + a2 + b1 <= K; ++b1)
                for (int b2 = 0; a1 + a2 + b1 + b2 <= K; ++b2) r.at(a1 + b1, a2 + b2) += x * b.at(b1, b2);
        }
    return r;
}

template <int K>
Series<K> reciprocal(const Series<K>& f)
{
    Series<K> r;
    const cd inv0 = 1.0 / f.at(0, 0);
    r.at(0, 0) = inv0;
    for (int d = 1; d <= K; ++d)
        for (int a = 0; a <= d; ++a) {
            const int b = d - a;
            cd acc = 0.0;
            for (int i = 0; i <= a; ++i)
                for (int j = 0; j <= b; ++j) {
                    if (i == 0 && j == 0) continue;
                    acc += f.at(i, j) * r.at(a - i, b - j);
                }
            r.at(a, b) = -inv0 * acc;
        }
    return r;
}

template <int K>
Series<K> operator/(const Series<K>& a, const Series<K>& b) { return a * reciprocal(b); }

// Complex conjugate when both variables are real coordinates.
template <int K>
Series<K> conj_real(Series<K> a)
{
    for (auto& x : a.c) x = std::conj(x);
    return a;
}

// Complex conjugate when the variables are a conjugate pair (xi, conj xi):
// conj swaps the roles of the two variables.
template <int K>
Series<K> conj_pair(const Series<K>& a)
{
    Series<K> r;
    for (int i = 0; i <= K; ++i)
        for (int j = 0; i + j <= K; ++j) r.at(i, j) = std::conj(a.at(j, i));
    return r;
}

// Derivative with respect to variable 1 or 2; the top degree becomes zero.
template <int K>
Series<K> diff(const Series<K>& a, int which)
{
    Series<K> r;
    for (int i = 0; i <= K; ++i)
        for (int j = 0; i + j < K; ++j) {
            if (which == 1)
                r.at(i, j) = double(i + 1) * a.at(i + 1, j);
            else
                r.at(i, j) = double(j + 1) * a.at(i, j + 1);
        }
    return r;
}

} // namespace solsurf::taylor
