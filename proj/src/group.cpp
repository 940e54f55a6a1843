#include "nlsym/group.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "nlsym/errors.hpp"

namespace nlsym {

AbelianGroup AbelianGroup::make(std::vector<int> factors) {
    AbelianGroup g;
    g.factors = std::move(factors);
    for (int n : g.factors) {
        if (n < 2) throw ParseError("group factors must be >= 2");
        g.order *= n;
        g.exponent = std::lcm(g.exponent, n);
    }
    return g;
}

AbelianGroup AbelianGroup::parse(const std::string& literal) {
    std::string s;
    for (char c : literal)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s.empty()) throw ParseError("empty group literal");
    std::vector<int> factors;
    size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != 'z') throw ParseError("bad group literal: " + literal);
        ++pos;
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw ParseError("bad group literal: " + literal);
        factors.push_back(std::stoi(s.substr(start, pos - start)));
        if (pos < s.size()) {
            if (s[pos] != 'x') throw ParseError("bad group literal: " + literal);
            ++pos;
        }
    }
    return make(std::move(factors));
}

std::string AbelianGroup::name() const {
    if (factors.empty()) return "Z1";
    std::ostringstream os;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "x";
        os << "Z" << factors[i];
    }
    return os.str();
}

std::vector<int> AbelianGroup::residues(int idx) const {
    std::vector<int> r(factors.size());
    for (size_t t = factors.size(); t-- > 0;) {
        r[t] = idx % factors[t];
        idx /= factors[t];
    }
    return r;
}

int AbelianGroup::index_of(const std::vector<int>& r) const {
    int idx = 0;
    for (size_t t = 0; t < factors.size(); ++t) idx = idx * factors[t] + (r[t] % factors[t]);
    return idx;
}

int AbelianGroup::mul(int a, int b) const {
    int idx = 0, weight = 1;
    for (size_t t = factors.size(); t-- > 0;) {
        int ra = a % factors[t], rb = b % factors[t];
        a /= factors[t];
        b /= factors[t];
        idx += ((ra + rb) % factors[t]) * weight;
        weight *= factors[t];
    }
    return idx;
}

int AbelianGroup::inv(int a) const {
    std::vector<int> r = residues(a);
    for (size_t t = 0; t < r.size(); ++t) r[t] = (factors[t] - r[t]) % factors[t];
    return index_of(r);
}

int AbelianGroup::element_order(int a) const {
    int ord = 1, x = a;
    while (x != 0) {
        x = mul(x, a);
        ++ord;
    }
    return ord;
}

int character_exponent(const AbelianGroup& g, int chi, int a) {
    const int n = g.exponent;
    long e = 0;
    std::vector<int> m = g.residues(chi), r = g.residues(a);
    for (size_t t = 0; t < g.factors.size(); ++t)
        e += static_cast<long>(n / g.factors[t]) * m[t] % n * r[t] % n;
    return static_cast<int>(((e % n) + n) % n);
}

std::vector<std::vector<Cyclotomic>> character_table(const AbelianGroup& g) {
    std::vector<std::vector<Cyclotomic>> c(g.order, std::vector<Cyclotomic>(g.order));
    for (int chi = 0; chi < g.order; ++chi)
        for (int a = 0; a < g.order; ++a)
            c[chi][a] = Cyclotomic::root_of_unity(g.exponent, character_exponent(g, chi, a));
    return c;
}

std::vector<GroupAutomorphism> automorphism_group(const AbelianGroup& g, int bound) {
    if (g.order > bound)
        throw BoundExceeded("automorphism_group: |G| = " + std::to_string(g.order) +
                            " exceeds bound " + std::to_string(bound));
    const size_t d = g.factors.size();
    std::vector<GroupAutomorphism> autos;
    if (d == 0) {
        autos.push_back({std::vector<int>{0}});
        return autos;
    }
    // generator e_t = (0,..,1,..,0)
    std::vector<int> gens(d);
    for (size_t t = 0; t < d; ++t) {
        std::vector<int> r(d, 0);
        r[t] = 1;
        gens[t] = g.index_of(r);
    }
    // candidate images per generator: elements of order dividing n_t
    std::vector<std::vector<int>> candidates(d);
    for (size_t t = 0; t < d; ++t)
        for (int a = 0; a < g.order; ++a)
            if (g.factors[t] % g.element_order(a) == 0) candidates[t].push_back(a);

    std::vector<int> chosen(d, 0);
    std::vector<int> image(g.order);
    auto extend = [&](auto&& self, size_t t) -> void {
        if (t == d) {
            // build the full map a = sum a_t e_t -> sum a_t chosen_t
            std::vector<bool> hit(g.order, false);
            for (int a = 0; a < g.order; ++a) {
                std::vector<int> r = g.residues(a);
                int im = 0;
                for (size_t s = 0; s < d; ++s) {
                    int part = 0;
                    for (int rep = 0; rep < r[s]; ++rep) part = g.mul(part, chosen[s]);
                    im = g.mul(im, part);
                }
                image[a] = im;
                hit[im] = true;
            }
            if (std::find(hit.begin(), hit.end(), false) == hit.end())
                autos.push_back({image});
            return;
        }
        for (int cand : candidates[t]) {
            chosen[t] = cand;
            // prune: the partial map on Z_{n_0} x .. x Z_{n_t} must be injective
            size_t span = 1;
            for (size_t s = 0; s <= t; ++s) span *= static_cast<size_t>(g.factors[s]);
            std::vector<bool> seen(g.order, false);
            bool ok = true;
            std::vector<int> digits(t + 1, 0);
            for (size_t cnt = 0; cnt < span && ok; ++cnt) {
                int im = 0;
                for (size_t s = 0; s <= t; ++s) {
                    int part = 0;
                    for (int rep = 0; rep < digits[s]; ++rep) part = g.mul(part, chosen[s]);
                    im = g.mul(im, part);
                }
                if (seen[im]) ok = false;
                seen[im] = true;
                for (size_t s = t + 1; s-- > 0;) {
                    if (++digits[s] < g.factors[s]) break;
                    digits[s] = 0;
                }
            }
            if (ok) self(self, t + 1);
        }
    };
    extend(extend, 0);
    return autos;
}

DualPermutation DualPermutation::identity(int n) {
    DualPermutation p;
    p.img.resize(n);
    for (int i = 0; i < n; ++i) p.img[i] = i;
    return p;
}

DualPermutation DualPermutation::compose(const DualPermutation& other) const {
    DualPermutation r;
    r.img.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) r.img[i] = img[other.img[i]];
    return r;
}

DualPermutation DualPermutation::inverse() const {
    DualPermutation r;
    r.img.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) r.img[img[i]] = static_cast<int>(i);
    return r;
}

DualPermutation dual_map(const AbelianGroup& g, const GroupAutomorphism& sigma) {
    // (chi o sigma) has exponent tuple m' with m'_t recovered from the value
    // of chi on sigma(e_t).
    const size_t d = g.factors.size();
    const int n = g.exponent;
    DualPermutation p;
    p.img.resize(g.order);
    std::vector<int> sigma_gen(d);
    for (size_t t = 0; t < d; ++t) {
        std::vector<int> r(d, 0);
        r[t] = 1;
        sigma_gen[t] = sigma.perm[g.index_of(r)];
    }
    for (int chi = 0; chi < g.order; ++chi) {
        std::vector<int> mprime(d);
        for (size_t t = 0; t < d; ++t) {
            int e = character_exponent(g, chi, sigma_gen[t]);
            // e = (n / n_t) * m'_t mod n
            mprime[t] = (e * g.factors[t] / n) % g.factors[t];
        }
        p.img[chi] = g.index_of(mprime);
    }
    return p;
}

DualPermutation dual_translation(const AbelianGroup& g, int z) {
    DualPermutation p;
    p.img.resize(g.order);
    for (int x = 0; x < g.order; ++x) p.img[x] = g.mul(z, x);
    return p;
}

DualPermutation dual_inversion(const AbelianGroup& g) {
    DualPermutation p;
    p.img.resize(g.order);
    for (int x = 0; x < g.order; ++x) p.img[x] = g.inv(x);
    return p;
}

}  // namespace nlsym
