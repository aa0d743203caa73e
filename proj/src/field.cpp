#include "fflab/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fflab {

namespace {

constexpr std::uint64_t kMaxQ = 1ull << 20;  // every verifier is exhaustive

// Remainder of num (const-first, any degree) modulo monic den.
std::vector<int> poly_rem(std::vector<int> num, const std::vector<int>& den, long long p) {
    const int dd = static_cast<int>(den.size()) - 1;
    for (int d = static_cast<int>(num.size()) - 1; d >= dd; --d) {
        long long c = num[d];
        if (c == 0) continue;
        num[d] = 0;
        for (int i = 0; i < dd; ++i) {
            long long t = (num[d - dd + i] - c * den[i]) % p;
            num[d - dd + i] = static_cast<int>(t < 0 ? t + p : t);
        }
    }
    num.resize(dd);
    return num;
}

bool is_irreducible(const std::vector<int>& poly, long long p) {
    const int m = static_cast<int>(poly.size()) - 1;
    for (int d = 1; d <= m / 2; ++d) {
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<int> den(d + 1);
            std::uint64_t t = idx;
            for (int i = 0; i < d; ++i) {
                den[i] = static_cast<int>(t % p);
                t /= static_cast<std::uint64_t>(p);
            }
            den[d] = 1;
            auto rem = poly_rem(poly, den, p);
            if (std::all_of(rem.begin(), rem.end(), [](int c) { return c == 0; })) return false;
        }
    }
    return true;
}

}  // namespace

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::optional<std::vector<int>> find_irreducible(long long p, int m) {
    if (!is_prime(p)) throw std::invalid_argument("find_irreducible: p is not prime");
    if (m < 1) throw std::invalid_argument("find_irreducible: degree must be >= 1");
    if (m == 1) return std::nullopt;

    std::uint64_t q = 1;
    for (int i = 0; i < m; ++i) {
        q *= static_cast<std::uint64_t>(p);
        if (q > kMaxQ) throw std::invalid_argument("find_irreducible: unsupported scale, q > 2^20");
    }
    // Scan candidates in lexicographic order of (c_0, ..., c_{m-1}), c_0 major.
    for (std::uint64_t idx = 0; idx < q; ++idx) {
        std::vector<int> poly(m + 1);
        poly[m] = 1;
        std::uint64_t t = idx;
        for (int j = m - 1; j >= 0; --j) {
            poly[j] = static_cast<int>(t % p);
            t /= static_cast<std::uint64_t>(p);
        }
        if (is_irreducible(poly, p)) return poly;
    }
    throw std::logic_error("find_irreducible: no irreducible polynomial found");
}

Field::Field(long long p) : Field(p, 1) {}

Field::Field(long long p, int m) : p_(p), m_(m) {
    if (!is_prime(p)) throw std::invalid_argument("Field: p is not prime");
    if (m < 1) throw std::invalid_argument("Field: extension degree must be >= 1");
    q_ = 1;
    for (int i = 0; i < m; ++i) {
        q_ *= static_cast<std::uint64_t>(p);
        if (q_ > kMaxQ) throw std::invalid_argument("Field: unsupported scale, q > 2^20");
    }
    if (m > 1) modulus_ = *find_irreducible(p, m);
}

Field::Field(long long p, int m, std::vector<int> modulus) : p_(p), m_(m) {
    if (!is_prime(p)) throw std::invalid_argument("Field: p is not prime");
    if (m < 1) throw std::invalid_argument("Field: extension degree must be >= 1");
    q_ = 1;
    for (int i = 0; i < m; ++i) {
        q_ *= static_cast<std::uint64_t>(p);
        if (q_ > kMaxQ) throw std::invalid_argument("Field: unsupported scale, q > 2^20");
    }
    if (m == 1) {
        if (!modulus.empty()) throw std::invalid_argument("Field: prime field takes no modulus");
        return;
    }
    if (static_cast<int>(modulus.size()) != m + 1 || modulus[m] != 1)
        throw std::invalid_argument("Field: modulus must be monic of degree m");
    for (int c : modulus)
        if (c < 0 || c >= p) throw std::invalid_argument("Field: modulus coefficient out of range");
    if (!is_irreducible(modulus, p)) throw std::invalid_argument("Field: modulus is reducible");
    modulus_ = std::move(modulus);
}

void Field::check_element(FieldElem a) const {
    if (a.v >= q_) throw std::invalid_argument("FieldElem does not belong to this field");
}

FieldElem Field::from_index(std::uint64_t i) const {
    if (i >= q_) throw std::invalid_argument("Field::from_index: index out of range");
    return {static_cast<std::uint32_t>(i)};
}

FieldElem Field::from_coeffs(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != m_)
        throw std::invalid_argument("Field::from_coeffs: wrong coefficient count");
    std::uint64_t v = 0;
    for (int i = m_ - 1; i >= 0; --i) {
        long long r = c[i] % p_;
        if (r < 0) r += p_;
        v = v * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(r);
    }
    return {static_cast<std::uint32_t>(v)};
}

std::vector<int> Field::coeffs(FieldElem a) const {
    check_element(a);
    std::vector<int> c(m_);
    std::uint64_t v = a.v;
    for (int i = 0; i < m_; ++i) {
        c[i] = static_cast<int>(v % static_cast<std::uint64_t>(p_));
        v /= static_cast<std::uint64_t>(p_);
    }
    return c;
}

FieldElem Field::add(FieldElem a, FieldElem b) const {
    check_element(a);
    check_element(b);
    if (m_ == 1) return {static_cast<std::uint32_t>((a.v + static_cast<std::uint64_t>(b.v)) % q_)};
    std::uint64_t va = a.v, vb = b.v, out = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        std::uint64_t s = (va % p_ + vb % p_) % p_;
        out += s * mult;
        mult *= static_cast<std::uint64_t>(p_);
        va /= static_cast<std::uint64_t>(p_);
        vb /= static_cast<std::uint64_t>(p_);
    }
    return {static_cast<std::uint32_t>(out)};
}

FieldElem Field::neg(FieldElem a) const {
    check_element(a);
    if (m_ == 1) return {static_cast<std::uint32_t>(a.v == 0 ? 0 : q_ - a.v)};
    std::uint64_t va = a.v, out = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        std::uint64_t d = va % p_;
        out += (d == 0 ? 0 : static_cast<std::uint64_t>(p_) - d) * mult;
        mult *= static_cast<std::uint64_t>(p_);
        va /= static_cast<std::uint64_t>(p_);
    }
    return {static_cast<std::uint32_t>(out)};
}

FieldElem Field::sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

FieldElem Field::mul(FieldElem a, FieldElem b) const {
    check_element(a);
    check_element(b);
    if (m_ == 1)
        return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.v) * b.v) % q_)};
    // Schoolbook product of the coefficient vectors, reduced by the modulus.
    std::vector<long long> prod(2 * m_ - 1, 0);
    std::vector<int> ca = coeffs(a), cb = coeffs(b);
    for (int i = 0; i < m_; ++i) {
        if (ca[i] == 0) continue;
        for (int j = 0; j < m_; ++j) prod[i + j] += static_cast<long long>(ca[i]) * cb[j];
    }
    for (int d = 2 * m_ - 2; d >= m_; --d) {
        long long c = prod[d] % p_;
        if (c < 0) c += p_;
        prod[d] = 0;
        if (c == 0) continue;
        for (int i = 0; i < m_; ++i) prod[d - m_ + i] -= c * modulus_[i];
    }
    std::vector<int> out(m_);
    for (int i = 0; i < m_; ++i) {
        long long r = prod[i] % p_;
        out[i] = static_cast<int>(r < 0 ? r + p_ : r);
    }
    return from_coeffs(out);
}

FieldElem Field::pow(FieldElem a, std::uint64_t e) const {
    check_element(a);
    FieldElem r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

FieldElem Field::inv(FieldElem a) const {
    check_element(a);
    if (a.v == 0) throw std::domain_error("Field::inv: division by zero");
    return pow(a, q_ - 2);
}

std::vector<FieldElem> Field::enumerate() const {
    std::vector<FieldElem> out;
    out.reserve(q_);
    for (std::uint64_t i = 0; i < q_; ++i) out.push_back({static_cast<std::uint32_t>(i)});
    return out;
}

}  // namespace fflab
