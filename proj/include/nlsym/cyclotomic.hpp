#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsym/rational.hpp"

namespace nlsym {

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

/// An exact element of Q(zeta_N), stored in the canonical reduced power
/// basis 1, z, ..., z^(phi(N)-1) obtained by rewriting modulo the N-th
/// cyclotomic polynomial. Two values are equal as complex numbers iff their
/// (order-aligned) canonical coefficient vectors are identical.
class Cyclotomic {
public:
    Cyclotomic() : order_(1), coeffs_() {}

    static Cyclotomic rational(const Rat& q);
    static Cyclotomic integer(long v) { return rational(Rat(v)); }
    /// zeta_N ^ k
    static Cyclotomic root_of_unity(int n, long k);
    /// Canonicalize a raw coefficient vector over powers zeta_n^i (indices
    /// taken mod n; the vector may be shorter or longer than n).
    static Cyclotomic from_coeffs(int n, const std::vector<Rat>& raw);

    int order() const { return order_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational()

    Cyclotomic conj() const;
    Cyclotomic inverse() const;  // requires nonzero
    bool is_real() const;

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator*(const Rat& s) const;
    Cyclotomic operator/(const Rat& s) const;
    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    /// Rewrite into Q(zeta_m); m must be a multiple of order().
    Cyclotomic lifted(int m) const;

    std::complex<double> approx() const;
    /// Rigorous enclosure of the real part at the given MPFR precision.
    std::pair<double, double> real_enclosure(int bits) const;

    /// "N|c0|c1|..." ; identical iff values at the same order are equal.
    std::string canonical_key() const;
    std::string to_string() const;  // human-readable polynomial in z_N

    nlohmann::json to_json() const;
    static Cyclotomic from_json(const nlohmann::json& j);

private:
    int order_;
    std::vector<Rat> coeffs_;  // size <= phi(order_), no trailing zeros

    void trim();
};

inline Cyclotomic operator*(const Rat& s, const Cyclotomic& c) { return c * s; }

/// Sign of an exactly-real cyclotomic value. Zero is decided from the
/// canonical form; otherwise the real embedding is refined at doubling MPFR
/// precision (64..max_bits) until the enclosure excludes zero. max_bits <= 0
/// reads NLSYM_PRECISION_BITS (default cap 1024).
Sign real_sign(const Cyclotomic& x, int max_bits = 0);

/// A cyclotomic value proven fixed by conjugation, carrying a float shadow.
class RealCyclo {
public:
    RealCyclo() : v_(), approx_(0.0) {}
    explicit RealCyclo(const Rat& q) : v_(Cyclotomic::rational(q)), approx_(rat_to_double(q)) {}
    /// Checks conj(c) = c exactly.
    static RealCyclo checked(const Cyclotomic& c);

    const Cyclotomic& exact() const { return v_; }
    double approx() const { return approx_; }

    bool is_zero() const { return v_.is_zero(); }
    bool is_rational() const { return v_.is_rational(); }
    Rat rational_value() const { return v_.rational_value(); }

    Sign sign() const { return real_sign(v_); }
    /// sign(*this - o)
    int compare(const RealCyclo& o) const;

    RealCyclo operator+(const RealCyclo& o) const;
    RealCyclo operator-(const RealCyclo& o) const;
    RealCyclo operator*(const RealCyclo& o) const;
    RealCyclo operator*(const Rat& s) const;
    RealCyclo operator/(const Rat& s) const;
    bool operator==(const RealCyclo& o) const { return v_ == o.v_; }
    bool operator!=(const RealCyclo& o) const { return !(v_ == o.v_); }

    nlohmann::json to_json() const;
    static RealCyclo from_json(const nlohmann::json& j);

private:
    Cyclotomic v_;
    double approx_;
};

/// conj(x) * x with the real flag proven.
RealCyclo abs_squared(const Cyclotomic& x);

/// The N-th cyclotomic polynomial (monic, integer coefficients, low first).
const std::vector<Rat>& cyclotomic_polynomial(int n);

}  // namespace nlsym
