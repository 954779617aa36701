#pragma once

// Exact and floating scalar kernel shared by every module: arbitrary-precision
// rationals, a complex wrapper usable over both flavors, and the seeded
// counter-based RNG that makes every sampled quantity reproducible.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace coholab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Parses "p", "-p", "p/q" with arbitrary-precision integer parts.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational literal: '" + s + "'");
    }
}

inline std::string rational_to_string(const Rational& q) {
    Int num = numerator(q), den = denominator(q);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

// ---------------------------------------------------------------------------
// Complex numbers over an arbitrary scalar (Rational, Int, double).
// std::complex is specified for floating types only, so we carry our own.

template <typename T>
struct Complex {
    T re{};
    T im{};

    Complex() = default;
    Complex(T r) : re(std::move(r)) {}
    Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }

    Complex operator-() const { return {T(-re), T(-im)}; }
    Complex conj() const { return {re, T(-im)}; }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }

    friend Complex operator+(const Complex& a, const Complex& b) { return {T(a.re + b.re), T(a.im + b.im)}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {T(a.re - b.re), T(a.im - b.im)}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {T(a.re * b.re - a.im * b.im), T(a.re * b.im + a.im * b.re)};
    }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

using CQ = Complex<Rational>;   // exact flavor
using CZ = Complex<Int>;        // Gaussian integers, used by the fraction-free pass
using CD = Complex<double>;     // floating flavor

inline CD to_double(const CQ& z) { return {to_double(z.re), to_double(z.im)}; }

inline double modulus(const CD& z) { return std::hypot(z.re, z.im); }
inline double modulus(const CQ& z) { return std::hypot(to_double(z.re), to_double(z.im)); }

// |z|^2, exact.
inline Rational modulus_sq(const CQ& z) { return z.re * z.re + z.im * z.im; }

// Field division in Q(i).
inline CQ div(const CQ& a, const CQ& b) {
    Rational n = modulus_sq(b);
    if (n == 0) throw std::domain_error("division by zero in Q(i)");
    CQ c = a * b.conj();
    return {Rational(c.re / n), Rational(c.im / n)};
}

// Exact division in Z[i]; throws if b does not divide a (never happens on
// the Bareiss path, where divisions are exact by the minor identity).
inline CZ div_exact(const CZ& a, const CZ& b) {
    Int n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("division by zero in Z[i]");
    CZ c = a * b.conj();
    Int qr = c.re / n, qi = c.im / n;
    if (qr * n != c.re || qi * n != c.im) throw std::logic_error("inexact division in Z[i]");
    return {qr, qi};
}

inline CD scale(const CD& z, double s) { return {z.re * s, z.im * s}; }

// ---------------------------------------------------------------------------
// Counter-based RNG: the stream for (seed, index) is independent of evaluation
// order, so sampled maxima are identical under any scheduling or subsetting.

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    SplitMix64(std::uint64_t seed, std::uint64_t stream) {
        state = mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }
    // uniform in [-1, 1]
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }
    // uniform integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }
};

} // namespace coholab
