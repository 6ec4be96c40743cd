#include "trekcalc/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>

#include "trekcalc/errors.hpp"

namespace trekcalc {

std::map<Var, Rat> ParamPoint::assignment() const {
    std::map<Var, Rat> out;
    for (const auto& [e, v] : edge) out.emplace(Var::edge(e.first, e.second), v);
    for (const auto& [m, v] : omega) out.emplace(Var::omega(m), v);
    return out;
}

SymbolicSigma::SymbolicSigma(const Dag& dag, OmegaMode mode) : dag_(dag), mode_(mode) {
    const std::size_t n = dag_.vertices().size();
    // B = I + A + A^2 + ...; A is nilpotent, so the series is finite.
    std::vector<std::vector<Poly>> a(n, std::vector<Poly>(n));
    for (const auto& [i, j] : dag_.edges())
        a[dag_.order_index(i)][dag_.order_index(j)] = Poly(Var::edge(i, j));
    std::vector<std::vector<Poly>> b(n, std::vector<Poly>(n)), power = a;
    for (std::size_t i = 0; i < n; ++i) b[i][i] = Poly::one();
    for (std::size_t step = 0; step < n; ++step) {
        bool all_zero = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!power[i][j].is_zero()) {
                    b[i][j] += power[i][j];
                    all_zero = false;
                }
        if (all_zero) break;
        std::vector<std::vector<Poly>> next(n, std::vector<Poly>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (power[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (a[k][j].is_zero()) continue;
                    next[i][j] += power[i][k] * a[k][j];
                }
            }
        power = std::move(next);
    }
    // Sigma = B^T Omega B.
    entries_.assign(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Poly s;
            for (std::size_t m = 0; m < n; ++m) {
                if (b[m][i].is_zero() || b[m][j].is_zero()) continue;
                Poly term = b[m][i] * b[m][j];
                if (mode_ == OmegaMode::symbolic)
                    term = term * Poly(Var::omega(dag_.vertices()[m]));
                s += term;
            }
            entries_[i][j] = s;
            if (i != j) entries_[j][i] = entries_[i][j];
        }
    }
}

const Poly& SymbolicSigma::entry(int i, int j) const {
    return entries_[dag_.order_index(i)][dag_.order_index(j)];
}

namespace {

// det of { rows fixed in order, columns = bitmask } by first-row expansion,
// memoized on the column mask.
Poly det_masked(const std::vector<std::vector<Poly>>& m, std::uint32_t mask,
                std::vector<std::optional<Poly>>& memo, const std::vector<int>& cols) {
    if (mask == 0) return Poly::one();
    if (memo[mask]) return *memo[mask];
    int k = static_cast<int>(m.size());
    int row = k - __builtin_popcount(mask);
    Poly det;
    int sign = 1;
    for (int c = 0; c < k; ++c) {
        if (!(mask & (1u << c))) continue;
        const Poly& e = m[row][cols[c]];
        if (!e.is_zero()) {
            Poly sub = det_masked(m, mask & ~(1u << c), memo, cols);
            if (!sub.is_zero()) det += e * sub * Rat(sign);
        }
        sign = -sign;
    }
    memo[mask] = det;
    return det;
}

}  // namespace

Poly det_cofactor(const std::vector<std::vector<Poly>>& m) {
    int k = static_cast<int>(m.size());
    if (k == 0) return Poly::one();
    std::vector<std::optional<Poly>> memo(1u << k);
    std::vector<int> cols(k);
    for (int c = 0; c < k; ++c) cols[c] = c;
    return det_masked(m, (1u << k) - 1, memo, cols);
}

Poly det_bareiss(std::vector<std::vector<Poly>> m) {
    int k = static_cast<int>(m.size());
    if (k == 0) return Poly::one();
    int sign = 1;
    Poly prev = Poly::one();
    for (int p = 0; p + 1 < k; ++p) {
        if (m[p][p].is_zero()) {
            int swap_row = -1;
            for (int r = p + 1; r < k; ++r)
                if (!m[r][p].is_zero()) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0) return Poly::zero();
            std::swap(m[p], m[swap_row]);
            sign = -sign;
        }
        for (int r = p + 1; r < k; ++r) {
            for (int c = p + 1; c < k; ++c) {
                Poly numer = m[r][c] * m[p][p] - m[r][p] * m[p][c];
                m[r][c] = exact_divide(numer, prev);
            }
            m[r][p] = Poly::zero();
        }
        prev = m[p][p];
    }
    return sign == 1 ? m[k - 1][k - 1] : -m[k - 1][k - 1];
}

Poly SymbolicSigma::minor_det(std::vector<int> I, std::vector<int> J) const {
    if (I.size() != J.size()) throw std::invalid_argument("size-mismatch");
    dag_.sort_by_order(I);
    dag_.sort_by_order(J);
    const int k = static_cast<int>(I.size());
    std::vector<std::vector<Poly>> sub(k, std::vector<Poly>(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub[r][c] = entry(I[r], J[c]);
    if (k <= 6) return det_cofactor(sub);
    return det_bareiss(std::move(sub));
}

std::vector<std::vector<Rat>> SymbolicSigma::evaluate(const ParamPoint& point) const {
    auto assign = point.assignment();
    if (mode_ == OmegaMode::symbolic)
        for (int v : dag_.vertices()) assign.emplace(Var::omega(v), Rat(1));
    const std::size_t n = entries_.size();
    std::vector<std::vector<Rat>> out(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            out[i][j] = entries_[i][j].evaluate(assign);
            out[j][i] = out[i][j];
        }
    return out;
}

SymbolicSigma build_sigma(const Dag& dag, OmegaMode mode) { return SymbolicSigma(dag, mode); }

Rat det_rational(std::vector<std::vector<Rat>> m) {
    const int k = static_cast<int>(m.size());
    Rat det(1);
    for (int p = 0; p < k; ++p) {
        int pivot = -1;
        for (int r = p; r < k; ++r)
            if (m[r][p] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rat(0);
        if (pivot != p) {
            std::swap(m[p], m[pivot]);
            det = -det;
        }
        det *= m[p][p];
        for (int r = p + 1; r < k; ++r) {
            if (m[r][p] == 0) continue;
            Rat factor = m[r][p] / m[p][p];
            for (int c = p; c < k; ++c) m[r][c] -= factor * m[p][c];
        }
    }
    return det;
}

double det_double(std::vector<std::vector<double>> m) {
    const int k = static_cast<int>(m.size());
    double det = 1.0;
    for (int p = 0; p < k; ++p) {
        int pivot = p;
        for (int r = p + 1; r < k; ++r)
            if (std::fabs(m[r][p]) > std::fabs(m[pivot][p])) pivot = r;
        if (m[pivot][p] == 0.0) return 0.0;
        if (pivot != p) {
            std::swap(m[p], m[pivot]);
            det = -det;
        }
        det *= m[p][p];
        for (int r = p + 1; r < k; ++r) {
            double factor = m[r][p] / m[p][p];
            for (int c = p; c < k; ++c) m[r][c] -= factor * m[p][c];
        }
    }
    return det;
}

namespace {

Rat minor_at_point(const std::vector<std::vector<Rat>>& cov, const Dag& dag,
                   std::vector<int> I, std::vector<int> J) {
    dag.sort_by_order(I);
    dag.sort_by_order(J);
    const int k = static_cast<int>(I.size());
    std::vector<std::vector<Rat>> sub(k, std::vector<Rat>(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            sub[r][c] = cov[dag.order_index(I[r])][dag.order_index(J[c])];
    return det_rational(std::move(sub));
}

}  // namespace

std::pair<Rat, int> partial_corr_exact(const SymbolicSigma& sigma, const PcQuery& q,
                                       const ParamPoint& point) {
    PcQuery qq = q;
    sigma.dag().validate_query(qq);
    auto cov = sigma.evaluate(point);
    const auto& dag = sigma.dag();
    Rat f = minor_at_point(cov, dag, with_vertex(dag, qq.s, qq.i0),
                           with_vertex(dag, qq.s, qq.j0));
    Rat di = minor_at_point(cov, dag, with_vertex(dag, qq.s, qq.i0),
                            with_vertex(dag, qq.s, qq.i0));
    Rat dj = minor_at_point(cov, dag, with_vertex(dag, qq.s, qq.j0),
                            with_vertex(dag, qq.s, qq.j0));
    Rat denom = di * dj;
    if (denom <= 0) throw std::invalid_argument("degenerate-denominator");
    return {f * f / denom, rat_sign(f)};
}

double partial_corr_float(const std::vector<std::vector<double>>& cov,
                          const std::vector<int>& vertices, const PcQuery& q) {
    auto index_of = [&](int v) {
        auto it = std::find(vertices.begin(), vertices.end(), v);
        if (it == vertices.end()) throw std::invalid_argument("unknown-vertex");
        return static_cast<int>(it - vertices.begin());
    };
    auto minor = [&](const std::vector<int>& I, const std::vector<int>& J) {
        const int k = static_cast<int>(I.size());
        std::vector<std::vector<double>> sub(k, std::vector<double>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub[r][c] = cov[index_of(I[r])][index_of(J[c])];
        return det_double(std::move(sub));
    };
    std::vector<int> si = q.s, sj = q.s;
    si.push_back(q.i0);
    sj.push_back(q.j0);
    auto by_index = [&](std::vector<int>& vs) {
        std::sort(vs.begin(), vs.end(), [&](int a, int b) { return index_of(a) < index_of(b); });
    };
    by_index(si);
    by_index(sj);
    double f = minor(si, sj);
    double di = minor(si, si);
    double dj = minor(sj, sj);
    double denom = di * dj;
    if (denom <= 0) throw std::invalid_argument("non-positive-denominator");
    return f / std::sqrt(denom);
}

ParamPoint scale_by_diagonal(const ParamPoint& point, const std::map<int, Rat>& d) {
    for (const auto& [v, dv] : d) {
        (void)v;
        if (dv <= 0) throw std::invalid_argument("diagonal scale must be positive");
    }
    auto factor = [&](int v) {
        auto it = d.find(v);
        return it == d.end() ? Rat(1) : it->second;
    };
    ParamPoint out;
    for (const auto& [e, val] : point.edge)
        out.edge.emplace(e, val * factor(e.second) / factor(e.first));
    std::set<int> omega_keys;
    for (const auto& [m, v] : point.omega) {
        (void)v;
        omega_keys.insert(m);
    }
    for (const auto& [m, v] : d) {
        (void)v;
        omega_keys.insert(m);
    }
    for (int m : omega_keys) {
        auto it = point.omega.find(m);
        Rat base = it == point.omega.end() ? Rat(1) : it->second;
        out.omega.emplace(m, base * factor(m) * factor(m));
    }
    return out;
}

}  // namespace trekcalc
