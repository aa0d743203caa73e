#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/geometry.hpp"
#include "fflab/util.hpp"

namespace fflab {

/// A pair (Delta, mu) with |Delta| ~ sqrt(q) and mu*Delta - Delta = F_q.
struct DeltaSystem {
    Field field;
    std::vector<FieldElem> delta;  // sorted
    FieldElem mu;
    bool mu_fallback = false;  // prime case: s+1 failed coverage, scanned instead
    bool operator==(const DeltaSystem&) const = default;
};

struct DeltaReport {
    std::size_t delta_size = 0;
    bool coverage = false;
    double sqrt_q = 0;
    /// |x*Delta + Delta| -> number of x attaining it, over all x in F_q.
    std::map<std::size_t, std::size_t> sumset_histogram;
    bool operator==(const DeltaReport&) const = default;
};

/// Prime case: Delta = {1..ceil(sqrt p)}, mu = s+1 when that covers, else the
/// first covering mu in enumeration order. Even degree 2h: Delta = all
/// polynomials of degree < h, mu = x^h. Odd degree 2h+1: Delta lifts the
/// prime-case system of F_p into the constant term, mu = x^h + mu(p).
DeltaSystem build_delta(const Field& f, double K = 1.0);

DeltaReport verify_delta(const DeltaSystem& d);

std::size_t sumset_size(const DeltaSystem& d, FieldElem x);

struct LCountResult {
    long long count = 0;
    std::vector<FieldElem> xs;
};

/// L(r) = |{x in F_p : x != -mu, |x*Delta + Delta| <= r}|, prime fields only.
LCountResult compute_L(const DeltaSystem& d, long long r);

struct MultiplierSet {
    std::vector<FieldElem> xs;  // sorted
    Rational beta;
    double K = 1;
    std::size_t max_sumset = 0;
    long long requested = 0;   // ceil(K * q^beta)
    FieldElem excluded_neg_mu;
    FieldElem excluded_neg_mu_inv;
};

/// The ceil(K*q^beta) multipliers with the smallest |x*Delta + Delta|, ties
/// broken by the smaller representative; both -mu and -mu^{-1} are excluded
/// (the former is the lemma's condition, the latter kills the construction's
/// denominator) and the result is capped at the eligible count.
MultiplierSet build_X(const DeltaSystem& d, const Rational& beta, double K);

struct Witness {
    Line line;
    long long count = 0;  // measured |line ∩ S|
    bool operator==(const Witness&) const = default;
};

struct FurstenbergInstance {
    Field field;
    int n = 2;
    Rational beta;
    double K = 1;
    std::vector<Point> points;  // sorted
    std::map<Direction, Witness> witnesses;
    long long witness_threshold = 0;  // builder-declared minimum count
    bool operator==(const FurstenbergInstance&) const = default;
};

/// S = union over i of the coordinate-1<->i transpositions of
///   E_1 = {(1/(a mu + 1), (a u_j + v_j) mu / (a mu + 1))_j : a in X, u, v in Delta^(n-1)},
/// with one witness line per direction obtained by solving v_j mu - u_j = y_j
/// through the coverage table. Every witness meets S in >= |X| points.
FurstenbergInstance build_prime_furstenberg(long long p, int n, const Rational& beta, double K);

/// S over F_{p^2}^n from E_1 = {(b/(a mu + b), c_j mu/(a mu + b))_j}, mu = x̄;
/// every direction is witnessed by a line meeting S in >= p points.
FurstenbergInstance build_psquare(long long p, int n);

}  // namespace fflab
