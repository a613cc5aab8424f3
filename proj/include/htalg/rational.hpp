#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace htalg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored reduced with positive denominator
/// (cpp_rational maintains that canonical form).
class Rational {
public:
    using rep = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(long n) : v_(n) {}
    Rational(const BigInt& n) : v_(n) {}
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = (den < 0) ? rep(-BigInt(num), -BigInt(den)) : rep(num, den);
    }
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = (den < 0) ? rep(BigInt(-num), BigInt(-den)) : rep(num, den);
    }
    explicit Rational(rep v) : v_(std::move(v)) {}

    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(rep(BigInt(s)));
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        return Rational(rep(num, den));
    }

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }
    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator(v_) == 1; }
    long to_long() const {
        if (!is_integer()) throw std::domain_error("Rational: not an integer");
        return static_cast<long>(numerator(v_));
    }
    double to_double() const { return v_.convert_to<double>(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(rep(-v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) s += "/" + den().str();
        return s;
    }

private:
    rep v_{};
};

inline BigInt factorial(long n) {
    BigInt r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Binomial coefficient C(n, k) for integer n (n may be negative), k >= 0.
inline BigInt binomial(long n, long k) {
    if (k < 0) return 0;
    BigInt r = 1;
    for (long i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

/// Falling factorial (n)_k = n(n-1)...(n-k+1), k >= 0.
inline BigInt falling_factorial(const BigInt& n, long k) {
    BigInt r = 1;
    for (long i = 0; i < k; ++i) r *= (n - i);
    return r;
}

inline Rational falling_factorial(const Rational& x, long k) {
    Rational r(1);
    for (long i = 0; i < k; ++i) r *= (x - Rational(i));
    return r;
}

}  // namespace htalg
