#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fflab {

using u128 = unsigned __int128;

/// Saturating multiply; comparisons stay valid as long as one side is honest.
inline u128 mul_sat(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    const u128 maxv = ~u128{0};
    if (a > maxv / b) return maxv;
    return a * b;
}

inline u128 pow_sat(u128 base, unsigned exp) {
    u128 r = 1;
    while (exp--) r = mul_sat(r, base);
    return r;
}

/// Exact nonnegative rational. beta and K thresholds are computed with
/// integer cross-multiplication, never floating point.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    bool operator==(const Rational&) const = default;
};

/// Parses "num/den" or a bare integer. Anything else (in particular a
/// decimal like "0.5") is rejected.
inline Rational parse_rational(const std::string& s) {
    auto parse_int = [](const std::string& t) -> long long {
        if (t.empty()) throw std::invalid_argument("empty rational component");
        std::size_t pos = 0;
        long long v = std::stoll(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("rational must be an integer or num/den");
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s), 1);
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

inline std::string format_rational(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

/// Recovers a small-denominator rational (den <= 1000) from a double that was
/// written with at most three decimal places. Used to keep K-thresholds exact
/// while the wire format stays a float.
inline Rational rational_from_double(double v) {
    if (v < 0) throw std::invalid_argument("negative value");
    for (long long den = 1; den <= 1000; ++den) {
        double scaled = v * static_cast<double>(den);
        long long num = static_cast<long long>(scaled + 0.5);
        if (scaled - static_cast<double>(num) < 1e-9 && static_cast<double>(num) - scaled < 1e-9)
            return Rational(num, den);
    }
    throw std::invalid_argument("value is not a small-denominator rational");
}

/// Smallest integer T >= K * q^beta, by exact root-and-compare:
/// minimal T with (T * K.den)^beta.den >= (K.num)^beta.den * q^beta.num.
inline long long ceil_k_q_beta(const Rational& K, std::uint64_t q, const Rational& beta) {
    if (beta.num < 0 || beta.num > beta.den)
        throw std::invalid_argument("beta must lie in [0, 1]");
    if (K.num <= 0) throw std::invalid_argument("K must be positive");
    if (beta.den > 16) throw std::invalid_argument("unsupported beta denominator");
    const unsigned d = static_cast<unsigned>(beta.den);
    const u128 rhs = mul_sat(pow_sat(static_cast<u128>(K.num), d),
                             pow_sat(static_cast<u128>(q), static_cast<unsigned>(beta.num)));
    if (rhs == ~u128{0}) throw std::invalid_argument("unsupported scale in threshold computation");
    long long lo = 1, hi = 1;
    while (pow_sat(mul_sat(static_cast<u128>(hi), static_cast<u128>(K.den)), d) < rhs) hi *= 2;
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        if (pow_sat(mul_sat(static_cast<u128>(mid), static_cast<u128>(K.den)), d) >= rhs)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// ceil(sqrt(v)) for v >= 0, exact.
inline long long ceil_sqrt(long long v) {
    long long s = 0;
    while (s * s < v) ++s;
    return s;
}

/// FNV-1a over a word sequence; used for bucketing keys.
struct U32VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint32_t x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace fflab
