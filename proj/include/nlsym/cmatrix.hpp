#pragma once

#include <complex>
#include <vector>

namespace nlsym {

/// Minimal dense complex matrix for the finite-dimensional magic-unitary
/// checks; everything here is numeric (double precision).
struct ComplexMatrix {
    int d = 0;
    std::vector<std::complex<double>> a;  // row-major d x d

    static ComplexMatrix zero(int d) {
        ComplexMatrix m;
        m.d = d;
        m.a.assign(static_cast<size_t>(d) * d, {0.0, 0.0});
        return m;
    }
    static ComplexMatrix identity(int d) {
        ComplexMatrix m = zero(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }
    std::complex<double>& at(int r, int c) { return a[static_cast<size_t>(r) * d + c]; }
    const std::complex<double>& at(int r, int c) const { return a[static_cast<size_t>(r) * d + c]; }

    ComplexMatrix mul(const ComplexMatrix& o) const {
        ComplexMatrix r = zero(d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                auto v = at(i, k);
                if (v == std::complex<double>(0.0, 0.0)) continue;
                for (int j = 0; j < d; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }
    ComplexMatrix dagger() const {
        ComplexMatrix r = zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) r.at(j, i) = std::conj(at(i, j));
        return r;
    }
    ComplexMatrix add(const ComplexMatrix& o) const {
        ComplexMatrix r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
        return r;
    }
    std::complex<double> trace() const {
        std::complex<double> t = 0.0;
        for (int i = 0; i < d; ++i) t += at(i, i);
        return t;
    }
    double max_abs_diff(const ComplexMatrix& o) const {
        double m = 0;
        for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }
};

/// n x n array of d x d projections.
using MagicUnitary = std::vector<std::vector<ComplexMatrix>>;

}  // namespace nlsym
