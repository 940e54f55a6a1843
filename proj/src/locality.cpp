#include "nlsym/locality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>

#include "nlsym/errors.hpp"

namespace nlsym {

std::string locality_status_name(LocalityStatus s) {
    switch (s) {
        case LocalityStatus::Local: return "LOCAL";
        case LocalityStatus::Nonlocal: return "NONLOCAL";
        case LocalityStatus::NumericInconclusive: return "NUMERIC_INCONCLUSIVE";
    }
    return "?";
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

Rat Certificate::value_on_perm(const std::vector<int>& perm) const {
    if (kind == Kind::SymInvariant) {
        const AbelianGroup& g = *group;
        Rat s(0);
        for (int y = 0; y < g.order; ++y)
            for (int b = 0; b < g.order; ++b) {
                int a = g.diff(perm[y], perm[g.mul(y, b)]);
                s += invariant_c[static_cast<size_t>(a) * g.order + b];
            }
        return s;
    }
    Rat s(0);
    for (const auto& c : coeffs)
        if (perm[c.i] == c.l && perm[c.j] == c.k) s += c.coef;
    return s;
}

std::vector<CertificateCoeff> Certificate::expanded_coeffs() const {
    if (kind != Kind::SymInvariant) return coeffs;
    const AbelianGroup& g = *group;
    std::vector<CertificateCoeff> out;
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) {
            const Rat& c = invariant_c[static_cast<size_t>(a) * g.order + b];
            if (c == 0) continue;
            for (int w = 0; w < g.order; ++w)
                for (int y = 0; y < g.order; ++y)
                    out.push_back({w, g.mul(w, a), y, g.mul(y, b), c});
        }
    return out;
}

nlohmann::json Certificate::to_json() const {
    nlohmann::json hyper = nlohmann::json::array();
    for (const auto& c : expanded_coeffs())
        hyper.push_back({{"l", c.l}, {"k", c.k}, {"i", c.i}, {"j", c.j},
                         {"coef", rat_to_string(c.coef)}});
    nlohmann::json adm;
    switch (kind) {
        case Kind::SymN: adm = {{"kind", "sym"}, {"n", n}}; break;
        case Kind::Explicit: {
            adm = {{"kind", "explicit"}, {"n", n}};
            nlohmann::json perms = nlohmann::json::array();
            for (const auto& p : admissible) perms.push_back(p);
            adm["perms"] = perms;
            break;
        }
        case Kind::SymInvariant: {
            adm = {{"kind", "sym-invariant"}, {"n", n}, {"group", group->name()}};
            break;
        }
    }
    nlohmann::json j = {{"hyperplane", hyper},
                        {"min_over_deterministic", rat_to_string(min_over_deterministic)},
                        {"value_on_p", value_on_p.to_json()},
                        {"admissible", adm}};
    if (kind == Kind::SymInvariant) {
        nlohmann::json c = nlohmann::json::array();
        for (const auto& v : invariant_c) c.push_back(rat_to_string(v));
        j["invariant_c"] = c;
    }
    return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
    Certificate c;
    const auto& adm = j.at("admissible");
    std::string kind = adm.at("kind").get<std::string>();
    c.n = adm.at("n").get<int>();
    if (kind == "sym") {
        c.kind = Kind::SymN;
    } else if (kind == "explicit") {
        c.kind = Kind::Explicit;
        for (const auto& p : adm.at("perms")) c.admissible.push_back(p.get<std::vector<int>>());
    } else if (kind == "sym-invariant") {
        c.kind = Kind::SymInvariant;
        c.group = AbelianGroup::parse(adm.at("group").get<std::string>());
        for (const auto& v : j.at("invariant_c")) c.invariant_c.push_back(rat_from_string(v.get<std::string>()));
    } else {
        throw ParseError("unknown admissible kind: " + kind);
    }
    if (c.kind != Kind::SymInvariant) {
        for (const auto& e : j.at("hyperplane"))
            c.coeffs.push_back({e.at("l").get<int>(), e.at("k").get<int>(), e.at("i").get<int>(),
                                e.at("j").get<int>(), rat_from_string(e.at("coef").get<std::string>())});
    }
    c.min_over_deterministic = rat_from_string(j.at("min_over_deterministic").get<std::string>());
    c.value_on_p = Cyclotomic::from_json(j.at("value_on_p"));
    c.approx_value = j.at("value_on_p").at("approx").get<double>();
    return c;
}

nlohmann::json LocalityVerdict::to_json() const {
    nlohmann::json j = {{"status", locality_status_name(status)},
                        {"exact", exact},
                        {"gap", gap},
                        {"note", note}};
    if (status == LocalityStatus::Local) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : decomposition)
            terms.push_back({{"perm", t.perm},
                             {"weight", t.weight.to_json()},
                             {"class_size", t.class_size}});
        j["decomposition"] = terms;
    }
    if (certificate) j["certificate"] = certificate->to_json();
    return j;
}

const SymClasses& sym_translation_classes(const AbelianGroup& g) {
    static std::mutex mx;
    static std::map<std::string, std::unique_ptr<SymClasses>> cache;
    std::lock_guard<std::mutex> lock(mx);
    auto it = cache.find(g.name());
    if (it != cache.end()) return *it->second;

    auto sc = std::make_unique<SymClasses>();
    sc->group = g;
    const int n = g.order;
    // The lexicographic minimum of each class fixes 0 (left translations act
    // transitively on pi(0)), so only tails need enumerating.
    std::vector<int> pi(n);
    pi[0] = 0;
    std::vector<int> tail(n > 1 ? n - 1 : 0);
    std::iota(tail.begin(), tail.end(), 1);
    std::vector<int> q(n);
    do {
        for (int i = 1; i < n; ++i) pi[i] = tail[i - 1];
        bool minimal = true;
        long stab = 0;
        for (int a = 0; a < n && minimal; ++a)
            for (int b = 0; b < n && minimal; ++b) {
                for (int x = 0; x < n; ++x) q[x] = g.mul(b, pi[g.mul(a, x)]);
                int cmp = 0;
                for (int x = 0; x < n; ++x) {
                    if (q[x] != pi[x]) {
                        cmp = q[x] < pi[x] ? -1 : 1;
                        break;
                    }
                }
                if (cmp < 0) minimal = false;
                else if (cmp == 0) ++stab;
            }
        if (minimal) {
            sc->reps.push_back(pi);
            sc->sizes.push_back(static_cast<long>(n) * n / stab);
            std::vector<int> cnt(static_cast<size_t>(n) * n, 0);
            for (int b = 0; b < n; ++b)
                for (int y = 0; y < n; ++y) {
                    int a = g.diff(pi[y], pi[g.mul(y, b)]);
                    cnt[static_cast<size_t>(a) * n + b]++;
                }
            sc->counts.push_back(std::move(cnt));
        }
    } while (std::next_permutation(tail.begin(), tail.end()));
    if (n == 1) {
        sc->reps.push_back({0});
        sc->sizes.push_back(1);
        sc->counts.push_back({1});
    }
    return *cache.emplace(g.name(), std::move(sc)).first->second;
}

namespace {

constexpr double kTol = 1e-9;

std::vector<std::array<int, 4>> lp_coords(const Correlation& p) {
    const int n = p.size();
    std::vector<std::array<int, 4>> coords;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k)
                    if (l != k && !p.is_zero_at(l, k, i, j)) coords.push_back({l, k, i, j});
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            if (!p.is_zero_at(l, l, i, i)) coords.push_back({l, l, i, i});
    return coords;
}

bool perm_survives(const Correlation& p, const std::vector<int>& perm) {
    const int n = p.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p.is_zero_at(perm[i], perm[j], i, j)) return false;
    return true;
}

// Zero coordinates of p that some eliminated admissible permutation hits;
// a uniform positive weight on them keeps the certificate valid for the
// whole admissible set, not just the surviving columns.
std::vector<std::array<int, 4>> lift_coords(const Correlation& p,
                                            const std::vector<std::vector<int>>& admissible,
                                            const std::vector<char>& survives) {
    const int n = p.size();
    std::set<std::array<int, 4>> zs;
    for (size_t t = 0; t < admissible.size(); ++t) {
        if (survives[t]) continue;
        const auto& perm = admissible[t];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (p.is_zero_at(perm[i], perm[j], i, j)) zs.insert({perm[i], perm[j], i, j});
    }
    return {zs.begin(), zs.end()};
}

Certificate build_explicit_certificate(const Correlation& p,
                                       const std::vector<std::vector<int>>& admissible,
                                       bool admissible_is_sym,
                                       const std::vector<std::array<int, 4>>& coords,
                                       const std::vector<Rat>& h,
                                       const std::vector<std::array<int, 4>>& lift) {
    Certificate cert;
    cert.kind = admissible_is_sym ? Certificate::Kind::SymN : Certificate::Kind::Explicit;
    cert.n = p.size();
    if (!admissible_is_sym) cert.admissible = admissible;
    Rat lambda(1);
    for (const auto& v : h) lambda += abs(v);
    for (size_t r = 0; r < coords.size(); ++r)
        if (h[r] != 0) cert.coeffs.push_back({coords[r][0], coords[r][1], coords[r][2], coords[r][3], h[r]});
    for (const auto& z : lift) cert.coeffs.push_back({z[0], z[1], z[2], z[3], lambda});

    bool first = true;
    for (const auto& perm : admissible) {
        Rat v = cert.value_on_perm(perm);
        if (first || v < cert.min_over_deterministic) cert.min_over_deterministic = v;
        first = false;
    }
    if (p.has_exact()) {
        Cyclotomic val;
        for (const auto& c : cert.coeffs) val = val + p.at(c.l, c.k, c.i, c.j).exact() * c.coef;
        cert.value_on_p = val;
        cert.approx_value = val.approx().real();
    } else {
        double val = 0;
        for (const auto& c : cert.coeffs) val += rat_to_double(c.coef) * p.approx_at(c.l, c.k, c.i, c.j);
        cert.approx_value = val;
        cert.value_on_p = Cyclotomic::rational(rat_round(val, 1000000));
    }
    return cert;
}

// Exact reproduction check: sum of weighted deterministic tables equals p.
bool decomposition_reproduces(const std::vector<DecompositionTerm>& terms, const Correlation& p) {
    const int n = p.size();
    std::vector<Cyclotomic> table(static_cast<size_t>(n) * n * n * n);
    Cyclotomic total;
    for (const auto& t : terms) {
        if (t.class_size != 1) return false;  // expanded terms only on this path
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                size_t ix = ((static_cast<size_t>(t.perm[i]) * n + t.perm[j]) * n + i) * n + j;
                table[ix] = table[ix] + t.weight.exact();
            }
        total = total + t.weight.exact();
    }
    if (total != Cyclotomic::rational(Rat(1))) return false;
    for (const auto& t : terms)
        if (real_sign(t.weight.exact()) == Sign::Negative) return false;
    size_t ix = 0;
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j, ++ix)
                    if (table[ix] != p.at(l, k, i, j).exact()) return false;
    return true;
}

bool decomposition_reproduces_numeric(const std::vector<DecompositionTerm>& terms,
                                      const Correlation& p, double tol) {
    const int n = p.size();
    std::vector<double> table(static_cast<size_t>(n) * n * n * n, 0.0);
    double total = 0;
    for (const auto& t : terms) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                size_t ix = ((static_cast<size_t>(t.perm[i]) * n + t.perm[j]) * n + i) * n + j;
                table[ix] += t.weight.approx();
            }
        total += t.weight.approx();
        if (t.weight.approx() < -tol) return false;
    }
    if (std::abs(total - 1.0) > 1e-12 * std::max(1.0, std::abs(total)) + tol) return false;
    size_t ix = 0;
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j, ++ix)
                    if (std::abs(table[ix] - p.approx_at(l, k, i, j)) > tol) return false;
    return true;
}

bool is_full_symmetric_group(const std::vector<std::vector<int>>& admissible, int n) {
    size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= static_cast<size_t>(i);
    return admissible.size() == fact;
}

}  // namespace

void verify_certificate(const Certificate& cert, const Correlation& p) {
    Rat minv;
    bool first = true;
    auto consider = [&](const std::vector<int>& perm) {
        Rat v = cert.value_on_perm(perm);
        if (first || v < minv) minv = v;
        first = false;
    };
    switch (cert.kind) {
        case Certificate::Kind::SymN:
            for (const auto& perm : all_permutations(cert.n)) consider(perm);
            break;
        case Certificate::Kind::Explicit:
            for (const auto& perm : cert.admissible) consider(perm);
            break;
        case Certificate::Kind::SymInvariant:
            // value_on_perm is translation-class invariant by construction,
            // so class representatives cover all of Sym(n).
            for (const auto& rep : sym_translation_classes(*cert.group).reps) consider(rep);
            break;
    }
    if (first) throw InternalInconsistency("certificate verification: empty admissible set");
    if (sgn(minv) < 0)
        throw InternalInconsistency("certificate fails on a deterministic correlation");
    if (minv != cert.min_over_deterministic)
        throw InternalInconsistency("certificate min_over_deterministic mismatch");
    if (p.has_exact()) {
        Cyclotomic val;
        for (const auto& c : cert.expanded_coeffs()) val = val + p.at(c.l, c.k, c.i, c.j).exact() * c.coef;
        if (val != cert.value_on_p) throw InternalInconsistency("certificate value_on_p mismatch");
        if (!val.is_real() || real_sign(val) != Sign::Negative)
            throw InternalInconsistency("certificate value on p is not exactly negative");
    } else {
        double val = 0;
        for (const auto& c : cert.expanded_coeffs())
            val += rat_to_double(c.coef) * p.approx_at(c.l, c.k, c.i, c.j);
        if (val >= -kTol) throw InternalInconsistency("certificate value on numeric p not negative");
    }
}

void verify_certificate_invariant(const Certificate& cert, const CharacteristicMatrix& d) {
    if (cert.kind != Certificate::Kind::SymInvariant)
        throw InternalInconsistency("invariant verification requires an invariant certificate");
    const AbelianGroup& g = d.group;
    const int n = g.order;
    const SymClasses& classes = sym_translation_classes(g);
    Rat minv;
    bool first = true;
    for (const auto& cnt : classes.counts) {
        Rat v(0);
        for (size_t i = 0; i < cnt.size(); ++i)
            if (cnt[i] != 0) v += cert.invariant_c[i] * cnt[i];
        if (first || v < minv) minv = v;
        first = false;
    }
    if (sgn(minv) < 0)
        throw InternalInconsistency("invariant certificate fails on a deterministic class");
    if (minv != cert.min_over_deterministic)
        throw InternalInconsistency("invariant certificate min mismatch");
    Cyclotomic val;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Rat& c = cert.invariant_c[static_cast<size_t>(a) * n + b];
            if (c != 0) val = val + d.at(a, b).exact() * (c * n);
        }
    if (val != cert.value_on_p) throw InternalInconsistency("invariant certificate value mismatch");
    if (!val.is_real() || real_sign(val) != Sign::Negative)
        throw InternalInconsistency("invariant certificate value not exactly negative");
}

LocalityVerdict decide_local(const Correlation& p,
                             const std::vector<std::vector<int>>& admissible) {
    if (admissible.empty()) throw std::logic_error("decide_local: empty admissible set");
    const int n = p.size();
    const bool sym = is_full_symmetric_group(admissible, n);

    auto coords = lp_coords(p);
    std::vector<char> survives(admissible.size(), 0);
    std::vector<const std::vector<int>*> cols;
    std::vector<size_t> col_index;
    for (size_t t = 0; t < admissible.size(); ++t) {
        if (perm_survives(p, admissible[t])) {
            survives[t] = 1;
            cols.push_back(&admissible[t]);
            col_index.push_back(t);
        }
    }
    auto lift = lift_coords(p, admissible, survives);

    const size_t m = coords.size(), ncols = cols.size();
    auto cell = [&](size_t r, size_t c) -> int {
        const auto& perm = *cols[c];
        return (perm[coords[r][2]] == coords[r][0] && perm[coords[r][3]] == coords[r][1]) ? 1 : 0;
    };

    LocalityVerdict out;

    // Numeric-only input: float decision, tolerance-flagged result.
    if (!p.has_exact()) {
        std::vector<std::vector<double>> rows(m, std::vector<double>(ncols, 0.0));
        std::vector<double> b(m);
        for (size_t r = 0; r < m; ++r) {
            b[r] = p.approx_at(coords[r][0], coords[r][1], coords[r][2], coords[r][3]);
            for (size_t c = 0; c < ncols; ++c) rows[r][c] = cell(r, c);
        }
        auto fl = lp_feasible_float(rows, b);
        if (fl.feasible) {
            for (size_t c = 0; c < ncols; ++c)
                if (fl.x[c] > kTol)
                    out.decomposition.push_back({*cols[c], RealCyclo(rat_round(fl.x[c], 1000000000000LL)), 1});
            if (decomposition_reproduces_numeric(out.decomposition, p, 1e-7)) {
                out.status = LocalityStatus::Local;
                out.exact = false;
                out.note = "numeric-only input; verified to tolerance";
                return out;
            }
            out.status = LocalityStatus::NumericInconclusive;
            out.note = "float solution failed tolerance re-check";
            return out;
        }
        std::vector<Rat> h(m);
        for (size_t r = 0; r < m; ++r) h[r] = rat_round(-fl.farkas[r], 1000000);
        Certificate cert = build_explicit_certificate(p, admissible, sym, coords, h, lift);
        if (sgn(cert.min_over_deterministic) >= 0 && cert.approx_value < -kTol) {
            out.status = LocalityStatus::Nonlocal;
            out.exact = false;
            out.gap = cert.approx_value;
            out.certificate = cert;
            out.note = "numeric-only input; hyperplane exact over deterministics, value numeric";
            return out;
        }
        out.status = LocalityStatus::NumericInconclusive;
        out.note = "rounded certificate did not verify on numeric input";
        return out;
    }

    bool rational = true;
    for (size_t r = 0; r < m && rational; ++r)
        rational = p.at(coords[r][0], coords[r][1], coords[r][2], coords[r][3]).is_rational();

    auto finish_local_exact = [&](std::vector<DecompositionTerm> terms) -> LocalityVerdict {
        if (!decomposition_reproduces(terms, p))
            throw InternalInconsistency("local decomposition failed exact re-verification");
        LocalityVerdict v;
        v.status = LocalityStatus::Local;
        v.decomposition = std::move(terms);
        return v;
    };
    auto finish_nonlocal = [&](Certificate cert) -> LocalityVerdict {
        verify_certificate(cert, p);
        LocalityVerdict v;
        v.status = LocalityStatus::Nonlocal;
        v.gap = cert.approx_value;
        v.certificate = std::move(cert);
        return v;
    };

    // Float warm start: cheap support / certificate guesses, exactly checked.
    std::vector<std::vector<double>> frows(m, std::vector<double>(ncols, 0.0));
    std::vector<double> fb(m);
    for (size_t r = 0; r < m; ++r) {
        fb[r] = p.approx_at(coords[r][0], coords[r][1], coords[r][2], coords[r][3]);
        for (size_t c = 0; c < ncols; ++c) frows[r][c] = cell(r, c);
    }
    auto fl = lp_feasible_float(frows, fb);

    if (rational) {
        std::vector<Rat> b(m);
        for (size_t r = 0; r < m; ++r)
            b[r] = p.at(coords[r][0], coords[r][1], coords[r][2], coords[r][3]).rational_value();
        if (fl.reliable && fl.feasible) {
            std::vector<size_t> support;
            for (size_t c = 0; c < ncols; ++c)
                if (fl.x[c] > 1e-7) support.push_back(c);
            std::vector<std::vector<Rat>> sys(m, std::vector<Rat>(support.size(), Rat(0)));
            for (size_t r = 0; r < m; ++r)
                for (size_t s = 0; s < support.size(); ++s) sys[r][s] = cell(r, support[s]);
            if (auto sol = solve_linear_rat(sys, b)) {
                bool nonneg = true;
                for (const auto& w : *sol)
                    if (w < 0) nonneg = false;
                if (nonneg) {
                    std::vector<DecompositionTerm> terms;
                    for (size_t s = 0; s < support.size(); ++s)
                        if ((*sol)[s] > 0) terms.push_back({*cols[support[s]], RealCyclo((*sol)[s]), 1});
                    if (decomposition_reproduces(terms, p)) return finish_local_exact(terms);
                }
            }
        } else if (fl.reliable && !fl.feasible) {
            std::vector<Rat> h(m);
            for (size_t r = 0; r < m; ++r) h[r] = rat_round(-fl.farkas[r], 1000000);
            Certificate cert = build_explicit_certificate(p, admissible, sym, coords, h, lift);
            if (sgn(cert.min_over_deterministic) >= 0 && cert.value_on_p.is_real() &&
                !cert.value_on_p.is_zero() && real_sign(cert.value_on_p) == Sign::Negative)
                return finish_nonlocal(cert);
        }
        // Exact fallback settles it.
        std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(ncols, Rat(0)));
        for (size_t r = 0; r < m; ++r)
            for (size_t c = 0; c < ncols; ++c) rows[r][c] = cell(r, c);
        auto ex = lp_feasible_exact(rows, b);
        if (ex.feasible) {
            std::vector<DecompositionTerm> terms;
            for (size_t c = 0; c < ncols; ++c)
                if (ex.x[c] > 0) terms.push_back({*cols[c], RealCyclo(ex.x[c]), 1});
            return finish_local_exact(terms);
        }
        std::vector<Rat> h(m);
        for (size_t r = 0; r < m; ++r) h[r] = -ex.farkas[r];
        return finish_nonlocal(build_explicit_certificate(p, admissible, sym, coords, h, lift));
    }

    // Exact but irrational data: float phase plus exact confirmation in the
    // cyclotomic field.
    if (fl.reliable && fl.feasible) {
        std::vector<size_t> support;
        for (size_t c = 0; c < ncols; ++c)
            if (fl.x[c] > 1e-7) support.push_back(c);
        std::vector<std::vector<Rat>> sys(m, std::vector<Rat>(support.size(), Rat(0)));
        std::vector<Cyclotomic> b(m);
        for (size_t r = 0; r < m; ++r) {
            b[r] = p.at(coords[r][0], coords[r][1], coords[r][2], coords[r][3]).exact();
            for (size_t s = 0; s < support.size(); ++s) sys[r][s] = cell(r, support[s]);
        }
        if (auto sol = solve_linear_cyclo(sys, b)) {
            bool ok = true;
            std::vector<DecompositionTerm> terms;
            for (size_t s = 0; s < support.size() && ok; ++s) {
                const Cyclotomic& w = (*sol)[s];
                if (w.is_zero()) continue;
                if (!w.is_real() || real_sign(w) == Sign::Negative) ok = false;
                else terms.push_back({*cols[support[s]], RealCyclo::checked(w), 1});
            }
            if (ok && decomposition_reproduces(terms, p)) {
                LocalityVerdict v;
                v.status = LocalityStatus::Local;
                v.decomposition = std::move(terms);
                return v;
            }
        }
        LocalityVerdict v;  // spec fallback: closed feasible region, float-feasible
        v.status = LocalityStatus::Local;
        v.exact = false;
        v.note = "numeric confidence: support system not exactly solvable";
        for (size_t c = 0; c < ncols; ++c)
            if (fl.x[c] > kTol)
                v.decomposition.push_back({*cols[c], RealCyclo(rat_round(fl.x[c], 1000000000000LL)), 1});
        return v;
    }
    if (fl.reliable && !fl.feasible) {
        for (std::int64_t den : {1000L, 1000000L}) {
            std::vector<Rat> h(m);
            for (size_t r = 0; r < m; ++r) h[r] = rat_round(-fl.farkas[r], den);
            Certificate cert = build_explicit_certificate(p, admissible, sym, coords, h, lift);
            if (sgn(cert.min_over_deterministic) >= 0 && cert.value_on_p.is_real() &&
                !cert.value_on_p.is_zero() && real_sign(cert.value_on_p) == Sign::Negative)
                return finish_nonlocal(cert);
        }
    }
    out.status = LocalityStatus::NumericInconclusive;
    out.note = "no exact decomposition and no verifiable certificate within the precision schedule";
    return out;
}

LocalityVerdict decide_local_invariant(const CharacteristicMatrix& d) {
    const AbelianGroup& g = d.group;
    const int n = g.order;
    if (n > 10) throw BoundExceeded("decide_local_invariant: |G| > 10");
    if (!d.is_doubly_stochastic())
        throw NotDoublyStochastic("decide_local_invariant: matrix is not doubly stochastic");
    const SymClasses& classes = sym_translation_classes(g);
    const size_t ncls = classes.reps.size();
    const size_t m = static_cast<size_t>(n) * n;

    auto make_invariant_cert = [&](const std::vector<Rat>& c) {
        Certificate cert;
        cert.kind = Certificate::Kind::SymInvariant;
        cert.n = n;
        cert.group = g;
        cert.invariant_c = c;
        bool first = true;
        for (const auto& cnt : classes.counts) {
            Rat v(0);
            for (size_t i = 0; i < m; ++i)
                if (cnt[i] != 0) v += c[i] * cnt[i];
            if (first || v < cert.min_over_deterministic) cert.min_over_deterministic = v;
            first = false;
        }
        Cyclotomic val;
        for (size_t i = 0; i < m; ++i)
            if (c[i] != 0) val = val + d.d[i].exact() * (c[i] * n);
        cert.value_on_p = val;
        cert.approx_value = val.approx().real();
        return cert;
    };
    auto finish_nonlocal = [&](Certificate cert) {
        verify_certificate_invariant(cert, d);
        LocalityVerdict v;
        v.status = LocalityStatus::Nonlocal;
        v.gap = cert.approx_value;
        v.certificate = std::move(cert);
        return v;
    };
    auto class_terms = [&](const std::vector<std::pair<size_t, RealCyclo>>& weights) {
        std::vector<DecompositionTerm> terms;
        for (const auto& [k, w] : weights)
            terms.push_back({classes.reps[k], w, static_cast<int>(classes.sizes[k])});
        return terms;
    };
    // Exact reproduction at class level: sum_K beta_K counts_K == n * D.
    auto reproduces = [&](const std::vector<std::pair<size_t, RealCyclo>>& weights) {
        std::vector<Cyclotomic> acc(m);
        Cyclotomic total;
        for (const auto& [k, w] : weights) {
            if (real_sign(w.exact()) == Sign::Negative) return false;
            total = total + w.exact();
            for (size_t i = 0; i < m; ++i)
                if (classes.counts[k][i] != 0)
                    acc[i] = acc[i] + w.exact() * Rat(classes.counts[k][i]);
        }
        if (total != Cyclotomic::rational(Rat(1))) return false;
        for (size_t i = 0; i < m; ++i)
            if (acc[i] != d.d[i].exact() * Rat(n)) return false;
        return true;
    };

    if (d.all_rational()) {
        std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(ncls, Rat(0)));
        std::vector<Rat> b(m);
        for (size_t i = 0; i < m; ++i) {
            b[i] = d.d[i].rational_value() * n;
            for (size_t k = 0; k < ncls; ++k) rows[i][k] = classes.counts[k][i];
        }
        auto ex = lp_feasible_exact(rows, b);
        if (ex.feasible) {
            std::vector<std::pair<size_t, RealCyclo>> ws;
            for (size_t k = 0; k < ncls; ++k)
                if (ex.x[k] > 0) ws.push_back({k, RealCyclo(ex.x[k])});
            if (!reproduces(ws))
                throw InternalInconsistency("invariant decomposition failed re-verification");
            LocalityVerdict v;
            v.status = LocalityStatus::Local;
            v.decomposition = class_terms(ws);
            return v;
        }
        // scale the Farkas vector to integers for a readable certificate
        std::vector<Rat> c(m);
        mpz_class den(1);
        for (size_t i = 0; i < m; ++i) {
            c[i] = -ex.farkas[i];
            den = lcm(den, c[i].get_den());
        }
        for (auto& v : c) v *= Rat(den);
        return finish_nonlocal(make_invariant_cert(c));
    }

    // Irrational characteristic matrix: float LP, exact confirmation.
    std::vector<std::vector<double>> frows(m, std::vector<double>(ncls, 0.0));
    std::vector<double> fb(m);
    for (size_t i = 0; i < m; ++i) {
        fb[i] = d.d[i].approx() * n;
        for (size_t k = 0; k < ncls; ++k) frows[i][k] = classes.counts[k][i];
    }
    auto fl = lp_feasible_float(frows, fb);
    if (fl.feasible) {
        std::vector<size_t> support;
        for (size_t k = 0; k < ncls; ++k)
            if (fl.x[k] > 1e-7) support.push_back(k);
        std::vector<std::vector<Rat>> sys(m, std::vector<Rat>(support.size(), Rat(0)));
        std::vector<Cyclotomic> b(m);
        for (size_t i = 0; i < m; ++i) {
            b[i] = d.d[i].exact() * Rat(n);
            for (size_t s = 0; s < support.size(); ++s) sys[i][s] = classes.counts[support[s]][i];
        }
        if (auto sol = solve_linear_cyclo(sys, b)) {
            std::vector<std::pair<size_t, RealCyclo>> ws;
            bool ok = true;
            for (size_t s = 0; s < support.size() && ok; ++s) {
                const Cyclotomic& w = (*sol)[s];
                if (w.is_zero()) continue;
                if (!w.is_real() || real_sign(w) == Sign::Negative) ok = false;
                else ws.push_back({support[s], RealCyclo::checked(w)});
            }
            if (ok && reproduces(ws)) {
                LocalityVerdict v;
                v.status = LocalityStatus::Local;
                v.decomposition = class_terms(ws);
                return v;
            }
        }
        LocalityVerdict v;
        v.status = LocalityStatus::Local;
        v.exact = false;
        v.note = "numeric confidence: support system not exactly solvable";
        std::vector<std::pair<size_t, RealCyclo>> ws;
        for (size_t k = 0; k < ncls; ++k)
            if (fl.x[k] > kTol) ws.push_back({k, RealCyclo(rat_round(fl.x[k], 1000000000000LL))});
        v.decomposition = class_terms(ws);
        return v;
    }
    if (fl.reliable) {
        // normalize before rounding so small duals survive
        double scale = 0;
        for (double y : fl.farkas) scale = std::max(scale, std::abs(y));
        if (scale <= 0) scale = 1;
        for (std::int64_t den : {1000L, 1000000L}) {
            std::vector<Rat> c(m);
            for (size_t i = 0; i < m; ++i) c[i] = rat_round(-fl.farkas[i] / scale, den);
            mpz_class dd(1);
            for (const auto& v : c) dd = lcm(dd, v.get_den());
            for (auto& v : c) v *= Rat(dd);
            Certificate cert = make_invariant_cert(c);
            if (sgn(cert.min_over_deterministic) >= 0 && cert.value_on_p.is_real() &&
                !cert.value_on_p.is_zero() && real_sign(cert.value_on_p) == Sign::Negative)
                return finish_nonlocal(cert);
        }
    }
    LocalityVerdict v;
    v.status = LocalityStatus::NumericInconclusive;
    v.note = "invariant LP: no exact decomposition and no verifiable certificate";
    return v;
}

}  // namespace nlsym
