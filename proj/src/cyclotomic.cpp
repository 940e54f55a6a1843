#include "nlsym/cyclotomic.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "nlsym/errors.hpp"

namespace nlsym {

namespace {

// Polynomials are coefficient vectors over Q, lowest power first, trimmed.

void poly_trim(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

// Remainder of a modulo the monic polynomial m.
std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Rat>& m) {
    const size_t deg = m.size() - 1;
    while (a.size() > deg) {
        Rat c = a.back();
        size_t shift = a.size() - 1 - deg;
        if (c != 0) {
            for (size_t i = 0; i < deg; ++i) a[shift + i] -= c * m[i];
        }
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

// Exact division, used only when the remainder is known to vanish.
std::vector<Rat> poly_divexact(std::vector<Rat> a, const std::vector<Rat>& d) {
    std::vector<Rat> q(a.size() >= d.size() ? a.size() - d.size() + 1 : 0, Rat(0));
    while (a.size() >= d.size() && !a.empty()) {
        Rat c = a.back() / d.back();
        size_t shift = a.size() - d.size();
        q[shift] = c;
        for (size_t i = 0; i < d.size(); ++i) a[shift + i] -= c * d[i];
        poly_trim(a);
    }
    return q;
}

int euler_phi(int n) {
    int result = n, m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

std::mutex g_poly_mutex;
std::map<int, std::vector<Rat>> g_poly_cache;

const std::vector<Rat>& cyclotomic_polynomial_locked(int n) {
    auto it = g_poly_cache.find(n);
    if (it != g_poly_cache.end()) return it->second;
    std::vector<Rat> phi;
    if (n == 1) {
        phi = {Rat(-1), Rat(1)};  // x - 1
    } else {
        std::vector<Rat> num(n + 1, Rat(0));  // x^n - 1
        num[0] = -1;
        num[n] = 1;
        for (int d = 1; d < n; ++d)
            if (n % d == 0) num = poly_divexact(std::move(num), cyclotomic_polynomial_locked(d));
        phi = std::move(num);
    }
    return g_poly_cache.emplace(n, std::move(phi)).first->second;
}

// MPFR interval helpers for real_sign / real_enclosure.

struct Interval {
    mpfr_t lo, hi;
    explicit Interval(int bits) {
        mpfr_init2(lo, bits);
        mpfr_init2(hi, bits);
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
    }
    ~Interval() {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
    Interval(const Interval&) = delete;
};

}  // namespace

const std::vector<Rat>& cyclotomic_polynomial(int n) {
    std::lock_guard<std::mutex> lock(g_poly_mutex);
    return cyclotomic_polynomial_locked(n);
}

void Cyclotomic::trim() { poly_trim(coeffs_); }

Cyclotomic Cyclotomic::rational(const Rat& q) {
    Cyclotomic c;
    c.order_ = 1;
    if (q != 0) c.coeffs_ = {q};
    return c;
}

Cyclotomic Cyclotomic::from_coeffs(int n, const std::vector<Rat>& raw) {
    if (n < 1) throw ParseError("cyclotomic order must be >= 1");
    Cyclotomic c;
    c.order_ = n;
    std::vector<Rat> folded(n, Rat(0));
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != 0) folded[i % n] += raw[i];
    }
    c.coeffs_ = poly_mod(std::move(folded), cyclotomic_polynomial(n));
    return c;
}

Cyclotomic Cyclotomic::root_of_unity(int n, long k) {
    if (n < 1) throw ParseError("cyclotomic order must be >= 1");
    long r = k % n;
    if (r < 0) r += n;
    std::vector<Rat> raw(static_cast<size_t>(r) + 1, Rat(0));
    raw[static_cast<size_t>(r)] = 1;
    return from_coeffs(n, raw);
}

bool Cyclotomic::is_rational() const { return coeffs_.size() <= 1; }

Rat Cyclotomic::rational_value() const {
    if (coeffs_.empty()) return Rat(0);
    if (coeffs_.size() != 1) throw std::logic_error("rational_value on irrational cyclotomic");
    return coeffs_[0];
}

Cyclotomic Cyclotomic::lifted(int m) const {
    if (m == order_) return *this;
    if (m % order_ != 0) throw std::logic_error("lift target must be a multiple of the order");
    int step = m / order_;
    std::vector<Rat> raw(static_cast<size_t>(m), Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) raw[(i * step) % m] += coeffs_[i];
    return from_coeffs(m, raw);
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<Rat> raw(static_cast<size_t>(order_), Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) raw[(order_ - i) % order_] += coeffs_[i];
    return from_coeffs(order_, raw);
}

bool Cyclotomic::is_real() const { return conj() == *this; }

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    int m = std::lcm(order_, o.order_);
    Cyclotomic a = lifted(m), b = o.lifted(m);
    if (a.coeffs_.size() < b.coeffs_.size()) a.coeffs_.resize(b.coeffs_.size(), Rat(0));
    for (size_t i = 0; i < b.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    a.trim();
    return a;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic c = *this;
    for (auto& q : c.coeffs_) q = -q;
    return c;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    int m = std::lcm(order_, o.order_);
    Cyclotomic a = lifted(m), b = o.lifted(m);
    Cyclotomic r;
    r.order_ = m;
    r.coeffs_ = poly_mod(poly_mul(a.coeffs_, b.coeffs_), cyclotomic_polynomial(m));
    return r;
}

Cyclotomic Cyclotomic::operator*(const Rat& s) const {
    if (s == 0) return Cyclotomic::rational(Rat(0));
    Cyclotomic c = *this;
    for (auto& q : c.coeffs_) q *= s;
    return c;
}

Cyclotomic Cyclotomic::operator/(const Rat& s) const {
    if (s == 0) throw std::logic_error("division by zero");
    return *this * Rat(1 / s);
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    if (order_ == o.order_) return coeffs_ == o.coeffs_;
    int m = std::lcm(order_, o.order_);
    return lifted(m).coeffs_ == o.lifted(m).coeffs_;
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::logic_error("inverse of zero");
    if (is_rational()) return rational(1 / coeffs_[0]);
    // Extended Euclid on (this, Phi_N) over Q[x]; Phi_N is irreducible so the
    // gcd is a nonzero constant.
    std::vector<Rat> r0 = cyclotomic_polynomial(order_), r1 = coeffs_;
    std::vector<Rat> t0, t1 = {Rat(1)};
    while (r1.size() > 1) {
        // r0 = q*r1 + r2
        std::vector<Rat> r2 = r0, q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, Rat(0));
        while (r2.size() >= r1.size() && !r2.empty()) {
            Rat c = r2.back() / r1.back();
            size_t shift = r2.size() - r1.size();
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); ++i) r2[shift + i] -= c * r1[i];
            poly_trim(r2);
        }
        std::vector<Rat> t2 = t0;
        std::vector<Rat> qt = poly_mul(q, t1);
        if (t2.size() < qt.size()) t2.resize(qt.size(), Rat(0));
        for (size_t i = 0; i < qt.size(); ++i) t2[i] -= qt[i];
        poly_trim(t2);
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r1.empty()) throw std::logic_error("gcd degenerated in cyclotomic inverse");
    Rat g = r1[0];
    Cyclotomic inv;
    inv.order_ = order_;
    inv.coeffs_ = poly_mod(std::move(t1), cyclotomic_polynomial(order_));
    for (auto& c : inv.coeffs_) c /= g;
    inv.trim();
    return inv;
}

std::complex<double> Cyclotomic::approx() const {
    std::complex<double> z(0.0, 0.0);
    const double w = 2.0 * M_PI / order_;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        double c = rat_to_double(coeffs_[i]);
        z += std::complex<double>(c * std::cos(w * i), c * std::sin(w * i));
    }
    return z;
}

std::pair<double, double> Cyclotomic::real_enclosure(int bits) const {
    Interval sum(bits), pi(bits);
    mpfr_const_pi(pi.lo, MPFR_RNDD);
    mpfr_const_pi(pi.hi, MPFR_RNDU);
    mpfr_t tlo, thi, w, a, b, c, d, qlo, qhi, m1, m2;
    mpfr_inits2(bits, tlo, thi, w, a, b, c, d, qlo, qhi, m1, m2, (mpfr_ptr) nullptr);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        // theta = 2*pi*i/order
        mpfr_mul_si(tlo, pi.lo, 2 * static_cast<long>(i), MPFR_RNDD);
        mpfr_div_si(tlo, tlo, order_, MPFR_RNDD);
        mpfr_mul_si(thi, pi.hi, 2 * static_cast<long>(i), MPFR_RNDU);
        mpfr_div_si(thi, thi, order_, MPFR_RNDU);
        mpfr_sub(w, thi, tlo, MPFR_RNDU);
        // cos over [tlo,thi]: endpoint values widened by the interval width
        // (|cos'| <= 1).
        mpfr_cos(a, tlo, MPFR_RNDD);
        mpfr_cos(b, tlo, MPFR_RNDU);
        mpfr_cos(c, thi, MPFR_RNDD);
        mpfr_cos(d, thi, MPFR_RNDU);
        mpfr_min(a, a, c, MPFR_RNDD);
        mpfr_sub(a, a, w, MPFR_RNDD);
        mpfr_max(b, b, d, MPFR_RNDU);
        mpfr_add(b, b, w, MPFR_RNDU);
        // multiply [a,b] by the rational coefficient
        mpfr_set_q(qlo, coeffs_[i].get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(qhi, coeffs_[i].get_mpq_t(), MPFR_RNDU);
        mpfr_mul(m1, qlo, a, MPFR_RNDD);
        mpfr_mul(m2, qlo, b, MPFR_RNDD);
        mpfr_min(m1, m1, m2, MPFR_RNDD);
        mpfr_mul(m2, qhi, a, MPFR_RNDD);
        mpfr_min(m1, m1, m2, MPFR_RNDD);
        mpfr_mul(m2, qhi, b, MPFR_RNDD);
        mpfr_min(m1, m1, m2, MPFR_RNDD);
        mpfr_add(sum.lo, sum.lo, m1, MPFR_RNDD);
        mpfr_mul(m1, qlo, a, MPFR_RNDU);
        mpfr_mul(m2, qlo, b, MPFR_RNDU);
        mpfr_max(m1, m1, m2, MPFR_RNDU);
        mpfr_mul(m2, qhi, a, MPFR_RNDU);
        mpfr_max(m1, m1, m2, MPFR_RNDU);
        mpfr_mul(m2, qhi, b, MPFR_RNDU);
        mpfr_max(m1, m1, m2, MPFR_RNDU);
        mpfr_add(sum.hi, sum.hi, m1, MPFR_RNDU);
    }
    double lo = mpfr_get_d(sum.lo, MPFR_RNDD);
    double hi = mpfr_get_d(sum.hi, MPFR_RNDU);
    mpfr_clears(tlo, thi, w, a, b, c, d, qlo, qhi, m1, m2, (mpfr_ptr) nullptr);
    return {lo, hi};
}

Sign real_sign(const Cyclotomic& x, int max_bits) {
    if (x.is_zero()) return Sign::Zero;
    if (x.is_rational()) return x.rational_value() > 0 ? Sign::Positive : Sign::Negative;
    if (max_bits <= 0) {
        max_bits = 1024;
        if (const char* env = std::getenv("NLSYM_PRECISION_BITS")) {
            int v = std::atoi(env);
            if (v > 0) max_bits = std::max(v, 64);
        }
    }
    for (int bits = 64; bits <= max_bits; bits *= 2) {
        auto [lo, hi] = x.real_enclosure(bits);
        if (lo > 0) return Sign::Positive;
        if (hi < 0) return Sign::Negative;
    }
    // The value is exactly nonzero (canonical form), so one more zero test
    // cannot help; refusing to guess is the only sound option left.
    throw InternalInconsistency("real_sign: interval schedule exhausted on a nonzero value");
}

std::string Cyclotomic::canonical_key() const {
    std::ostringstream os;
    os << order_;
    for (const auto& c : coeffs_) os << '|' << c.get_str();
    return os.str();
}

std::string Cyclotomic::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        Rat c = coeffs_[i];
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        Rat ac = abs(c);
        if (i == 0) {
            os << ac.get_str();
        } else {
            if (ac != 1) os << ac.get_str() << "*";
            os << "z" << order_;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

nlohmann::json Cyclotomic::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : coeffs_) coeffs.push_back(c.get_str());
    return {{"order", order_}, {"coeffs", coeffs}, {"approx", approx().real()}};
}

Cyclotomic Cyclotomic::from_json(const nlohmann::json& j) {
    int n = j.at("order").get<int>();
    std::vector<Rat> raw;
    for (const auto& s : j.at("coeffs")) raw.push_back(rat_from_string(s.get<std::string>()));
    return from_coeffs(n, raw);
}

RealCyclo RealCyclo::checked(const Cyclotomic& c) {
    if (!c.is_real()) throw std::logic_error("value is not fixed by conjugation");
    RealCyclo r;
    r.v_ = c;
    r.approx_ = c.approx().real();
    return r;
}

int RealCyclo::compare(const RealCyclo& o) const {
    if (v_ == o.v_) return 0;
    return real_sign(v_ - o.v_) == Sign::Positive ? 1 : -1;
}

RealCyclo RealCyclo::operator+(const RealCyclo& o) const {
    RealCyclo r;
    r.v_ = v_ + o.v_;
    r.approx_ = approx_ + o.approx_;
    return r;
}

RealCyclo RealCyclo::operator-(const RealCyclo& o) const {
    RealCyclo r;
    r.v_ = v_ - o.v_;
    r.approx_ = approx_ - o.approx_;
    return r;
}

RealCyclo RealCyclo::operator*(const RealCyclo& o) const {
    RealCyclo r;
    r.v_ = v_ * o.v_;
    r.approx_ = approx_ * o.approx_;
    return r;
}

RealCyclo RealCyclo::operator*(const Rat& s) const {
    RealCyclo r;
    r.v_ = v_ * s;
    r.approx_ = approx_ * rat_to_double(s);
    return r;
}

RealCyclo RealCyclo::operator/(const Rat& s) const {
    RealCyclo r;
    r.v_ = v_ / s;
    r.approx_ = approx_ / rat_to_double(s);
    return r;
}

nlohmann::json RealCyclo::to_json() const { return v_.to_json(); }

RealCyclo RealCyclo::from_json(const nlohmann::json& j) {
    return checked(Cyclotomic::from_json(j));
}

RealCyclo abs_squared(const Cyclotomic& x) {
    return RealCyclo::checked(x.conj() * x);
}

Rat rat_round(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw ParseError("cannot round a non-finite value");
    bool neg = x < 0;
    double v = neg ? -x : x;
    // Continued fraction convergents p/q of v with q <= max_den.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 9e17) break;
        std::int64_t a = static_cast<std::int64_t>(fl);
        if (q1 != 0 && (a > (max_den - q0) / q1)) break;
        std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-15 * std::max(1.0, v)) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) return Rat(0);
    Rat r(p1, q1);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

}  // namespace nlsym
