#include "trekcalc/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "trekcalc/errors.hpp"
#include "trekcalc/treks.hpp"

namespace trekcalc {

namespace {

std::string query_to_text(const PcQuery& q) {
    std::string out = "i0=" + std::to_string(q.i0) + " j0=" + std::to_string(q.j0) + " S={";
    for (std::size_t k = 0; k < q.s.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(q.s[k]);
    }
    return out + "}";
}

// Sign of a bijection given as (source, image) pairs, by crossing count in
// the dag's vertex order.
int bijection_sign(const Dag& dag, std::vector<std::pair<int, int>> pairs) {
    std::sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
        return dag.order_index(x.first) < dag.order_index(y.first);
    });
    int crossings = 0;
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = a + 1; b < pairs.size(); ++b)
            if (dag.order_index(pairs[a].second) > dag.order_index(pairs[b].second))
                ++crossings;
    return crossings % 2 == 0 ? 1 : -1;
}

void require_pruned(const Dag& dag, const PcQuery& q) {
    for (int s : q.s)
        if (!dag.children(s).empty())
            throw std::invalid_argument("hypothesis-unmet: edges leave S");
}

Poly cross_minor(const SymbolicSigma& sigma, const PcQuery& q) {
    const Dag& dag = sigma.dag();
    return sigma.minor_det(with_vertex(dag, q.s, q.i0), with_vertex(dag, q.s, q.j0));
}

// c == eps * m for eps in {+1, -1}; 0 when no eps fits.
int match_sign(const Poly& c, const Poly& m) {
    if (c == m) return 1;
    if (c == -m) return -1;
    return 0;
}

}  // namespace

std::string Certificate::to_text() const {
    std::string out = "query: " + query_to_text(query) + "\n";
    out += "pruned edges:";
    if (removed_edges.empty()) {
        out += " none";
    } else {
        for (const auto& [i, j] : removed_edges)
            out += " " + std::to_string(i) + "->" + std::to_string(j);
    }
    out += "\n";
    out += "f = " + poly_to_text(f) + "\n";
    out += "lhs = " + poly_to_text(lhs) + "\n";
    for (const auto& t : terms) {
        out += "term: sign=" + std::string(t.sign > 0 ? "+1" : "-1") +
               " var=" + var_to_string(t.var) + " multiplier=" + poly_to_text(t.multiplier) +
               "\n";
    }
    out += verified ? "VERIFIED" : "FAILED";
    out += "\n";
    return out;
}

Dag prune_outgoing_from_S(const Dag& dag, const PcQuery& q) {
    std::set<int> s(q.s.begin(), q.s.end());
    std::vector<std::pair<int, int>> kept;
    for (const auto& e : dag.edges())
        if (!s.count(e.first)) kept.push_back(e);
    return Dag(dag.vertices(), kept);
}

LemmaReport check_lemma_sj(const Dag& dag, const PcQuery& q) {
    PcQuery qq = q;
    dag.validate_query(qq);
    LemmaReport rep{"sj", qq, true, std::nullopt, "", 0};
    SymbolicSigma sigma(dag, OmegaMode::identity);
    Poly f = cross_minor(sigma, qq);
    for (int s : qq.s) {
        for (int j : dag.children(s)) {
            Var v = Var::edge(s, j);
            if (f.uses_var(v)) {
                rep.holds = false;
                rep.witness = {f, Poly(v)};
                rep.detail = "f uses " + var_to_string(v);
                return rep;
            }
        }
    }
    Dag pruned = prune_outgoing_from_S(dag, qq);
    SymbolicSigma sigma_pruned(pruned, OmegaMode::identity);
    Poly f_pruned = cross_minor(sigma_pruned, qq);
    if (!(f == f_pruned)) {
        rep.holds = false;
        rep.witness = {f, f_pruned};
        rep.detail = "f changed under pruning";
    }
    return rep;
}

Poly path_weight_poly(const Dag& dag, int j0, int s) {
    Poly total;
    for (const auto& p : enumerate_paths(dag, j0, s)) {
        Poly w = Poly::one();
        for (std::size_t k = 0; k + 1 < p.size(); ++k)
            w = w * Poly(Var::edge(p[k], p[k + 1]));
        total += w;
    }
    return total;
}

LemmaReport check_lemma_i0s(const Dag& pruned, const PcQuery& q, int s) {
    PcQuery qq = q;
    pruned.validate_query(qq);
    require_pruned(pruned, qq);
    if (std::find(qq.s.begin(), qq.s.end(), s) == qq.s.end())
        throw std::invalid_argument("hypothesis-unmet: s not in S");
    if (!pruned.has_edge(qq.i0, s))
        throw std::invalid_argument("hypothesis-unmet: no edge i0->s");
    LemmaReport rep{"i0s", qq, true, std::nullopt, "s=" + std::to_string(s), 0};
    SymbolicSigma sigma(pruned, OmegaMode::identity);
    Poly f = cross_minor(sigma, qq);
    Var v = Var::edge(qq.i0, s);
    if (f.degree_in(v) > 1) {
        rep.holds = false;
        rep.witness = {f, Poly::zero()};
        rep.detail += " degree>1";
        return rep;
    }
    Poly c = f.coefficient_of_linear(v);
    auto cols = with_vertex(pruned, without_vertex(with_vertex(pruned, qq.s, qq.j0), s), qq.i0);
    Poly m = sigma.minor_det(with_vertex(pruned, qq.s, qq.i0), cols);
    if (c.is_zero() && m.is_zero()) {
        rep.observed_sign = 1;
        rep.detail += " eps=+1 (trivial)";
        return rep;
    }
    int eps = match_sign(c, m);
    if (eps == 0) {
        rep.holds = false;
        rep.witness = {c, m};
        rep.detail += " coefficient mismatch";
        return rep;
    }
    rep.observed_sign = eps;
    rep.detail += std::string(" eps=") + (eps > 0 ? "+1" : "-1");
    return rep;
}

std::pair<LemmaReport, Poly> check_lemma_i0j0(const Dag& pruned, const PcQuery& q) {
    PcQuery qq = q;
    pruned.validate_query(qq);
    require_pruned(pruned, qq);
    if (!pruned.has_edge(qq.i0, qq.j0))
        throw std::invalid_argument("hypothesis-unmet: no edge i0->j0");
    LemmaReport rep{"i0j0", qq, true, std::nullopt, "", 0};
    SymbolicSigma sigma(pruned, OmegaMode::identity);
    Poly f = cross_minor(sigma, qq);
    Var v = Var::edge(qq.i0, qq.j0);
    if (f.degree_in(v) > 1) {
        rep.holds = false;
        rep.witness = {f, Poly::zero()};
        rep.detail = "degree>1";
        return {rep, Poly::zero()};
    }
    Poly c = f.coefficient_of_linear(v);
    auto si0 = with_vertex(pruned, qq.s, qq.i0);
    Poly d0 = sigma.minor_det(si0, si0);
    // g: systems S+i0 -> S+i0 where one trek's down part passes j0.
    Poly g;
    for (const auto& ts : enumerate_trek_systems(pruned, si0, si0, true)) {
        bool hits = false;
        for (const auto& t : ts.treks) {
            if (std::find(t.down.begin(), t.down.end(), qq.j0) != t.down.end()) {
                hits = true;
                break;
            }
        }
        if (!hits) continue;
        Poly w = Poly::one();
        for (const auto& t : ts.treks) w = w * trek_weight(pruned, t, OmegaMode::identity);
        g += w * Rat(system_sign(pruned, ts));
    }
    int eps = match_sign(c, d0 - g);
    if (eps == 0) {
        rep.holds = false;
        rep.witness = {c, d0 - g};
        rep.detail = "coefficient mismatch";
        return {rep, g};
    }
    rep.observed_sign = eps;
    rep.detail = std::string("eps0=") + (eps > 0 ? "+1" : "-1");
    return {rep, g};
}

LemmaReport check_lemma_id(const Dag& pruned, const PcQuery& q, const Poly& g) {
    PcQuery qq = q;
    pruned.validate_query(qq);
    require_pruned(pruned, qq);
    LemmaReport rep{"id", qq, true, std::nullopt, "", 0};
    SymbolicSigma sigma(pruned, OmegaMode::identity);
    auto si0 = with_vertex(pruned, qq.s, qq.i0);
    Poly rhs;
    for (int s : qq.s) {
        if (!is_below(pruned, qq.j0, s)) continue;
        auto cols = with_vertex(pruned, without_vertex(si0, s), qq.j0);
        std::vector<std::pair<int, int>> pairs{{qq.j0, s}};
        for (int v : without_vertex(si0, s)) pairs.push_back({v, v});
        int sg = bijection_sign(pruned, pairs);
        rhs += sigma.minor_det(si0, cols) * path_weight_poly(pruned, qq.j0, s) * Rat(sg);
    }
    if (!(rhs == g)) {
        rep.holds = false;
        rep.witness = {g, rhs};
        rep.detail = "sum does not match g";
    }
    return rep;
}

Certificate certify_nonsingular(const Dag& dag, const PcQuery& q) {
    PcQuery qq = q;
    dag.validate_query(qq);
    if (!theorem_condition(dag, qq)) throw ConditionError("condition-unmet");
    SymbolicSigma sigma_orig(dag, OmegaMode::identity);
    Poly f_orig = cross_minor(sigma_orig, qq);
    if (f_orig.is_zero()) throw ConditionError("f-identically-zero");

    Certificate cert;
    cert.query = qq;
    cert.reports.push_back(check_lemma_sj(dag, qq));
    cert.pruned = prune_outgoing_from_S(dag, qq);
    {
        std::set<std::pair<int, int>> kept(cert.pruned.edges().begin(),
                                           cert.pruned.edges().end());
        for (const auto& e : dag.edges())
            if (!kept.count(e)) cert.removed_edges.push_back(e);
    }
    SymbolicSigma sigma(cert.pruned, OmegaMode::identity);
    cert.f = cross_minor(sigma, qq);
    auto si0 = with_vertex(cert.pruned, qq.s, qq.i0);
    cert.lhs = sigma.minor_det(si0, si0);

    auto [rep_i0j0, g] = check_lemma_i0j0(cert.pruned, qq);
    int eps0 = rep_i0j0.observed_sign == 0 ? 1 : rep_i0j0.observed_sign;
    cert.terms.push_back({Var::edge(qq.i0, qq.j0), eps0, Poly::one()});

    for (int s : qq.s) {
        if (!is_below(cert.pruned, qq.j0, s)) continue;
        LemmaReport rep_s = check_lemma_i0s(cert.pruned, qq, s);
        int eps_s = rep_s.observed_sign == 0 ? 1 : rep_s.observed_sign;
        std::vector<std::pair<int, int>> pairs{{qq.j0, s}};
        for (int v : without_vertex(si0, s)) pairs.push_back({v, v});
        int pi_sign = bijection_sign(cert.pruned, pairs);
        cert.terms.push_back(
            {Var::edge(qq.i0, s), eps_s * pi_sign, path_weight_poly(cert.pruned, qq.j0, s)});
        cert.reports.push_back(std::move(rep_s));
    }
    cert.reports.push_back(check_lemma_id(cert.pruned, qq, g));
    cert.reports.push_back(std::move(rep_i0j0));

    Poly rhs;
    for (const auto& term : cert.terms)
        rhs += term.multiplier * cert.f.derivative(term.var) * Rat(term.sign);
    bool lemmas_hold = true;
    for (const auto& r : cert.reports) lemmas_hold = lemmas_hold && r.holds;
    cert.verified = lemmas_hold && rhs == cert.lhs;
    return cert;
}

ParamPoint unequal_variance_forward(const Dag& dag, const ParamPoint& a,
                                    const std::map<int, Rat>& d) {
    if (!a.omega.empty())
        throw std::invalid_argument("point already carries error variances");
    for (const auto& [v, dv] : d) {
        (void)v;
        if (dv <= 0) throw std::invalid_argument("diagonal scale must be positive");
    }
    auto factor = [&](int v) {
        auto it = d.find(v);
        return it == d.end() ? Rat(1) : it->second;
    };
    ParamPoint out;
    for (const auto& [e, val] : a.edge)
        out.edge.emplace(e, val * factor(e.second) / factor(e.first));
    for (int m : dag.vertices()) out.omega.emplace(m, factor(m) * factor(m));
    return out;
}

std::pair<ParamPoint, std::map<int, Rat>> unequal_variance_inverse_exact(
    const Dag& dag, const ParamPoint& point) {
    std::map<int, Rat> d;
    for (int m : dag.vertices()) {
        auto it = point.omega.find(m);
        Rat w = it == point.omega.end() ? Rat(1) : it->second;
        if (w <= 0) throw std::invalid_argument("negative-omega");
        auto root = exact_sqrt(w);
        if (!root) throw std::invalid_argument("omega is not a rational square");
        d.emplace(m, *root);
    }
    ParamPoint out;
    for (const auto& [e, val] : point.edge)
        out.edge.emplace(e, val * d.at(e.first) / d.at(e.second));
    return {out, d};
}

std::pair<std::map<std::pair<int, int>, double>, std::map<int, double>>
unequal_variance_inverse_float(const Dag& dag,
                               const std::map<std::pair<int, int>, double>& edge,
                               const std::map<int, double>& omega) {
    std::map<int, double> d;
    for (int m : dag.vertices()) {
        auto it = omega.find(m);
        double w = it == omega.end() ? 1.0 : it->second;
        if (w <= 0) throw std::invalid_argument("negative-omega");
        d.emplace(m, std::sqrt(w));
    }
    std::map<std::pair<int, int>, double> out;
    for (const auto& [e, val] : edge) out.emplace(e, val * d.at(e.first) / d.at(e.second));
    return {out, d};
}

}  // namespace trekcalc
