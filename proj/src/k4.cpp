#include "nlsym/k4.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "nlsym/errors.hpp"

namespace nlsym {

namespace {

int perm_parity(const std::array<int, 4>& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2;  // 0 even, 1 odd
}

TranspositionGraphG4 build_g4() {
    TranspositionGraphG4 g;
    std::array<int, 4> base = {0, 1, 2, 3};
    do {
        g.perms.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    const int nv = static_cast<int>(g.perms.size());
    for (int u = 0; u < nv; ++u)
        for (int v = u + 1; v < nv; ++v) {
            // pi_u^-1 pi_v moves exactly two points iff it is a transposition
            int moved = 0;
            for (int x = 0; x < 4; ++x)
                if (g.perms[u][x] != g.perms[v][x]) ++moved;
            if (moved == 2) g.edges.push_back({u, v});
        }
    for (const auto& [u, v] : g.edges) {
        const auto& pu = g.perms[u];
        const auto& pv = g.perms[v];
        int i = -1, j = -1;
        for (int x = 0; x < 4; ++x)
            if (pu[x] == pv[x]) (i < 0 ? i : j) = x;
        g.edge_coord.push_back({pu[i], pu[j], i, j});
    }
    g.incidence.assign(g.edges.size(), std::vector<int>(nv, 0));
    for (size_t e = 0; e < g.edges.size(); ++e) {
        g.incidence[e][g.edges[e].first] = 1;
        g.incidence[e][g.edges[e].second] = 1;
    }
    return g;
}

}  // namespace

const TranspositionGraphG4& TranspositionGraphG4::instance() {
    static const TranspositionGraphG4 g = build_g4();
    return g;
}

int TranspositionGraphG4::perm_index(const std::array<int, 4>& p) const {
    auto it = std::lower_bound(perms.begin(), perms.end(), p);
    return static_cast<int>(it - perms.begin());
}

bool TranspositionGraphG4::is_regular(int degree) const {
    std::vector<int> deg(perms.size(), 0);
    for (const auto& [u, v] : edges) {
        deg[u]++;
        deg[v]++;
    }
    return std::all_of(deg.begin(), deg.end(), [&](int d) { return d == degree; });
}

bool TranspositionGraphG4::is_bipartite_by_parity() const {
    for (const auto& [u, v] : edges)
        if (perm_parity(perms[u]) == perm_parity(perms[v])) return false;
    return true;
}

bool TranspositionGraphG4::is_connected() const {
    std::vector<char> seen(perms.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& [a, b] : edges) {
            int other = (a == u) ? b : (b == u ? a : -1);
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

int TranspositionGraphG4::incidence_rank() const {
    std::vector<std::vector<Rat>> a(incidence.size(), std::vector<Rat>(perms.size()));
    for (size_t i = 0; i < incidence.size(); ++i)
        for (size_t j = 0; j < perms.size(); ++j) a[i][j] = incidence[i][j];
    size_t row = 0;
    for (size_t col = 0; col < perms.size() && row < a.size(); ++col) {
        size_t sel = row;
        while (sel < a.size() && a[sel][col] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[sel], a[row]);
        for (size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rat f = a[i][col] / a[row][col];
            for (size_t j = col; j < perms.size(); ++j) a[i][j] -= f * a[row][j];
        }
        ++row;
    }
    return static_cast<int>(row);
}

std::vector<int> TranspositionGraphG4::parity_vector() const {
    std::vector<int> g(perms.size());
    for (size_t i = 0; i < perms.size(); ++i) g[i] = perm_parity(perms[i]) == 0 ? 1 : -1;
    return g;
}

std::vector<RealCyclo> hat_map(const Correlation& p) {
    if (p.size() != 4) throw NotB4("hat_map: index set must have four points");
    const auto& g = TranspositionGraphG4::instance();
    std::vector<RealCyclo> hat(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const auto& c = g.edge_coord[e];
        hat[e] = p.at(c[0], c[1], c[2], c[3]);
    }
    return hat;
}

const std::vector<K4Inequality>& k4_inequalities() {
    static const std::vector<K4Inequality> fam = [] {
        std::vector<K4Inequality> out;
        const auto& g4 = TranspositionGraphG4::instance();
        std::array<int, 3> rest = {1, 2, 3};
        for (const auto& pi : g4.perms) {
            std::array<int, 3> r = rest;
            std::sort(r.begin(), r.end());
            do {
                int a = 0, b = r[0], c = r[1], d = r[2];
                K4Inequality q;
                q.pi = pi;
                q.cycle = {a, b, c, d};
                q.coeffs = {{pi[c], pi[d], c, d, Rat(1)},
                            {pi[b], pi[d], a, d, Rat(-1)},
                            {pi[b], pi[c], a, b, Rat(1)}};
                std::ostringstream os;
                os << "pi=" << pi[0] << pi[1] << pi[2] << pi[3] << " cycle=(" << a << b << c << d
                   << ")";
                q.label = os.str();
                out.push_back(std::move(q));
            } while (std::next_permutation(r.begin(), r.end()));
        }
        return out;
    }();
    return fam;
}

int k4_inequalities_distinct() {
    std::set<std::string> keys;
    for (const auto& q : k4_inequalities()) {
        std::vector<std::string> parts;
        for (const auto& c : q.coeffs) {
            std::ostringstream os;
            os << c.l << ',' << c.k << ',' << c.i << ',' << c.j << ':' << rat_to_string(c.coef);
            parts.push_back(os.str());
        }
        std::sort(parts.begin(), parts.end());
        std::string key;
        for (const auto& s : parts) key += s + ";";
        keys.insert(key);
    }
    return static_cast<int>(keys.size());
}

std::pair<RealCyclo, std::string> k4_min_slack(const Correlation& p) {
    if (p.size() != 4) throw NotB4("k4_min_slack: index set must have four points");
    bool first = true;
    RealCyclo best;
    std::string label;
    for (const auto& q : k4_inequalities()) {
        RealCyclo v{Rat(0)};
        for (const auto& c : q.coeffs) v = v + p.at(c.l, c.k, c.i, c.j) * c.coef;
        if (first || v.compare(best) < 0) {
            best = v;
            label = q.label;
            first = false;
        }
    }
    return {best, label};
}

LocalityVerdict k4_decide(const Correlation& p) {
    if (p.size() != 4) throw NotB4("k4_decide: index set must have four points");
    if (!p.validate().empty()) throw NotB4("k4_decide: input is not in B(4)");
    const auto& g4 = TranspositionGraphG4::instance();

    for (const auto& q : k4_inequalities()) {
        RealCyclo v{Rat(0)};
        for (const auto& c : q.coeffs) v = v + p.at(c.l, c.k, c.i, c.j) * c.coef;
        if (v.sign() == Sign::Negative) {
            Certificate cert;
            cert.kind = Certificate::Kind::SymN;
            cert.n = 4;
            cert.coeffs = q.coeffs;
            bool first = true;
            for (const auto& pi : g4.perms) {
                std::vector<int> perm(pi.begin(), pi.end());
                Rat val = cert.value_on_perm(perm);
                if (first || val < cert.min_over_deterministic) cert.min_over_deterministic = val;
                first = false;
            }
            cert.value_on_p = v.exact();
            cert.approx_value = v.approx();
            verify_certificate(cert, p);
            LocalityVerdict out;
            out.status = LocalityStatus::Nonlocal;
            out.gap = v.approx();
            out.certificate = std::move(cert);
            out.note = "violated " + q.label;
            return out;
        }
    }

    // All inequalities hold: recover a decomposition from M alpha = phat and
    // the parity shift.
    auto hat = hat_map(p);
    std::vector<std::vector<Rat>> m(g4.edges.size(), std::vector<Rat>(g4.perms.size()));
    std::vector<Cyclotomic> b(g4.edges.size());
    for (size_t e = 0; e < g4.edges.size(); ++e) {
        b[e] = hat[e].exact();
        for (size_t v = 0; v < g4.perms.size(); ++v) m[e][v] = g4.incidence[e][v];
    }
    auto sol = solve_linear_cyclo(m, b);
    if (!sol) throw InternalInconsistency("k4_decide: incidence system inconsistent on a B(4) point");
    std::vector<RealCyclo> alpha(sol->size());
    for (size_t i = 0; i < sol->size(); ++i) alpha[i] = RealCyclo::checked((*sol)[i]);

    auto gamma = g4.parity_vector();
    bool first = true;
    RealCyclo min_even;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (gamma[i] != 1) continue;
        if (first || alpha[i].compare(min_even) < 0) {
            min_even = alpha[i];
            first = false;
        }
    }
    std::vector<DecompositionTerm> terms;
    RealCyclo total{Rat(0)};
    for (size_t i = 0; i < alpha.size(); ++i) {
        RealCyclo beta = gamma[i] == 1 ? alpha[i] - min_even : alpha[i] + min_even;
        if (beta.sign() == Sign::Negative)
            throw InternalInconsistency("k4_decide: parity shift produced a negative weight");
        total = total + beta;
        if (!beta.is_zero())
            terms.push_back({std::vector<int>(g4.perms[i].begin(), g4.perms[i].end()), beta, 1});
    }
    if (total != RealCyclo(Rat(1)))
        throw InternalInconsistency("k4_decide: recovered weights do not sum to 1");
    // full reproduction check
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Cyclotomic acc;
                    for (const auto& t : terms)
                        if (t.perm[i] == l && t.perm[j] == k) acc = acc + t.weight.exact();
                    if (acc != p.at(l, k, i, j).exact())
                        throw InternalInconsistency("k4_decide: decomposition does not reproduce p");
                }
    LocalityVerdict out;
    out.status = LocalityStatus::Local;
    out.decomposition = std::move(terms);
    return out;
}

K4Recovery recover_decomposition_k4(const MagicUnitary& u, double tol) {
    if (u.size() != 4) throw NotMagicUnitary("expected a 4x4 array");
    const int d = u[0][0].d;
    for (const auto& row : u) {
        if (row.size() != 4) throw NotMagicUnitary("expected a 4x4 array");
        for (const auto& m : row) {
            if (m.d != d) throw NotMagicUnitary("mixed block dimensions");
            if (m.max_abs_diff(m.dagger()) > tol) throw NotMagicUnitary("entry not hermitian");
            if (m.mul(m).max_abs_diff(m) > tol) throw NotMagicUnitary("entry not a projection");
        }
    }
    const auto id = ComplexMatrix::identity(d);
    for (int i = 0; i < 4; ++i) {
        ComplexMatrix rs = ComplexMatrix::zero(d), cs = ComplexMatrix::zero(d);
        for (int j = 0; j < 4; ++j) {
            rs = rs.add(u[i][j]);
            cs = cs.add(u[j][i]);
        }
        if (rs.max_abs_diff(id) > tol || cs.max_abs_diff(id) > tol)
            throw NotMagicUnitary("rows/columns do not sum to the identity");
    }

    const auto& g4 = TranspositionGraphG4::instance();
    K4Recovery rec;
    rec.alpha.resize(g4.perms.size());
    for (size_t v = 0; v < g4.perms.size(); ++v) {
        const auto& pi = g4.perms[v];
        double ref = 0;
        bool first = true;
        std::array<int, 4> pool = {0, 1, 2, 3};
        do {
            int a = pool[0], bb = pool[1], c = pool[2];
            auto prod = u[a][pi[a]].mul(u[bb][pi[bb]]).mul(u[c][pi[c]]);
            auto t = prod.trace();
            double val = t.real() / d;
            if (std::abs(t.imag() / d) > tol)
                throw NotMagicUnitary("triple trace has a nonreal value");
            if (first) {
                ref = val;
                first = false;
            } else if (std::abs(val - ref) > tol) {
                throw NotMagicUnitary("triple trace depends on the chosen triple");
            }
        } while (std::next_permutation(pool.begin(), pool.end()));
        rec.alpha[v] = ref;
    }

    rec.phat.resize(g4.edges.size());
    for (size_t e = 0; e < g4.edges.size(); ++e) {
        const auto& c = g4.edge_coord[e];
        rec.phat[e] = u[c[2]][c[0]].mul(u[c[3]][c[1]]).trace().real() / d;
        double lhs = rec.alpha[g4.edges[e].first] + rec.alpha[g4.edges[e].second];
        if (std::abs(lhs - rec.phat[e]) > 10 * tol)
            throw NotMagicUnitary("M alpha does not match phat");
    }

    auto gamma = g4.parity_vector();
    double min_even = 0;
    bool first = true;
    for (size_t i = 0; i < rec.alpha.size(); ++i) {
        if (gamma[i] != 1) continue;
        if (first || rec.alpha[i] < min_even) {
            min_even = rec.alpha[i];
            first = false;
        }
    }
    rec.beta.resize(rec.alpha.size());
    for (size_t i = 0; i < rec.alpha.size(); ++i)
        rec.beta[i] = gamma[i] == 1 ? rec.alpha[i] - min_even : rec.alpha[i] + min_even;
    return rec;
}

}  // namespace nlsym
