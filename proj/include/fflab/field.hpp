#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "fflab/util.hpp"

namespace fflab {

/// An element of F_{p^m}, stored as its index: value = sum coeffs[i] * p^i
/// with coeffs[i] the coefficient of x^i. For prime fields the index is the
/// residue itself.
struct FieldElem {
    std::uint32_t v = 0;
    auto operator<=>(const FieldElem&) const = default;
};

bool is_prime(long long p);

/// Lexicographically smallest (coefficient sequence, constant term first)
/// monic irreducible polynomial of degree m over F_p, as m+1 coefficients
/// constant-first. Returns nullopt for m == 1: a prime field needs no modulus.
/// Irreducibility is decided by an exhaustive scan over monic divisors of
/// degree <= m/2, which is complete at the supported scale.
std::optional<std::vector<int>> find_irreducible(long long p, int m);

/// Exact arithmetic in F_p or F_{p^m}. Immutable after construction; all
/// operations are pure and safe to share across threads.
class Field {
public:
    explicit Field(long long p);
    Field(long long p, int m);
    Field(long long p, int m, std::vector<int> modulus);

    long long p() const { return p_; }
    int m() const { return m_; }
    std::uint64_t q() const { return q_; }
    /// Monic modulus, constant term first, length m+1. Empty for m == 1.
    const std::vector<int>& modulus() const { return modulus_; }

    FieldElem zero() const { return {0}; }
    FieldElem one() const { return {1}; }
    bool is_zero(FieldElem a) const { return a.v == 0; }

    FieldElem from_index(std::uint64_t i) const;
    FieldElem from_coeffs(const std::vector<int>& c) const;
    std::vector<int> coeffs(FieldElem a) const;

    FieldElem add(FieldElem a, FieldElem b) const;
    FieldElem sub(FieldElem a, FieldElem b) const;
    FieldElem neg(FieldElem a) const;
    FieldElem mul(FieldElem a, FieldElem b) const;
    FieldElem pow(FieldElem a, std::uint64_t e) const;
    /// Multiplicative inverse via a^(q-2). Throws on a == 0.
    FieldElem inv(FieldElem a) const;

    /// All q elements in index order (lexicographic on coefficient sequences,
    /// leading coefficient most significant).
    std::vector<FieldElem> enumerate() const;

    bool operator==(const Field& o) const {
        return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
    }

private:
    void check_element(FieldElem a) const;

    long long p_ = 0;
    int m_ = 1;
    std::uint64_t q_ = 0;
    std::vector<int> modulus_;
};

}  // namespace fflab
