#ifndef XNET_SIMPLEX_HPP
#define XNET_SIMPLEX_HPP

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"

// Dense two-phase primal simplex over an exact field (mpq_class in practice).
// Bland's rule throughout, so the method terminates without cycling.

namespace xnet {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Field>
struct LinearProgram {
    struct Row {
        std::vector<Field> coeffs;
        Relation relation = Relation::GreaterEqual;
        Field rhs{};
    };

    std::size_t variables = 0;
    std::vector<Field> objective;  ///< minimized
    std::vector<Row> rows;
    std::vector<bool> free_variable; ///< empty means every variable is >= 0

    explicit LinearProgram(std::size_t n = 0) : variables(n), objective(n, Field(0)) {}

    void add_row(std::vector<Field> coeffs, Relation rel, Field rhs)
    {
        if (coeffs.size() != variables) throw StructuralError("LP row has the wrong number of coefficients");
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }
};

template <class Field>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Field objective{};
    std::vector<Field> x;
    std::vector<Field> duals; ///< one per row: y = c_B B^-1, sign convention of min c^T x
    std::size_t pivots = 0;
};

namespace detail {

template <class Field>
class Tableau {
public:
    std::vector<std::vector<Field>> t; // rows, last column is rhs
    std::vector<Field> z;              // reduced costs, last entry is -objective
    std::vector<std::size_t> basis;
    std::vector<bool> banned;
    std::size_t cols = 0;
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t c)
    {
        ++pivots;
        const Field inv = Field(1) / t[r][c];
        for (auto& v : t[r])
            if (v != 0) v *= inv;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0) continue;
            const Field f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
        }
        if (z[c] != 0) {
            const Field f = z[c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (t[r][j] != 0) z[j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    void price(const std::vector<Field>& cost)
    {
        z.assign(cols + 1, Field(0));
        for (std::size_t j = 0; j < cols; ++j) z[j] = cost[j];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Field& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= cols; ++j)
                if (t[i][j] != 0) z[j] -= cb * t[i][j];
        }
    }

    // returns false when unbounded
    bool run()
    {
        while (true) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (!banned[j] && z[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;
            std::size_t leave = t.size();
            Field best{};
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!(t[i][enter] > 0)) continue;
                Field ratio = t[i][cols] / t[i][enter];
                if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == t.size()) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace detail

template <class Field>
LpSolution<Field> solve_lp(const LinearProgram<Field>& lp)
{
    const std::size_t m = lp.rows.size();
    const std::size_t n = lp.variables;
    if (lp.objective.size() != n) throw StructuralError("LP objective has the wrong length");
    auto is_free = [&](std::size_t j) { return !lp.free_variable.empty() && lp.free_variable[j]; };

    // column layout: structural (+ negative part of free variables), slack/surplus, artificial
    std::vector<std::size_t> pos_col(n), neg_col(n, static_cast<std::size_t>(-1));
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos_col[j] = cols++;
        if (is_free(j)) neg_col[j] = cols++;
    }
    std::vector<bool> flipped(m, false);
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
        rel[i] = lp.rows[i].relation;
        if (lp.rows[i].rhs < 0) {
            flipped[i] = true;
            if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
            else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
        }
    }
    std::vector<std::size_t> slack_col(m, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < m; ++i)
        if (rel[i] != Relation::Equal) slack_col[i] = cols++;
    const std::size_t first_artificial = cols;
    std::vector<std::size_t> identity_col(m);
    for (std::size_t i = 0; i < m; ++i) identity_col[i] = rel[i] == Relation::LessEqual ? slack_col[i] : cols++;

    detail::Tableau<Field> tab;
    tab.cols = cols;
    tab.t.assign(m, std::vector<Field>(cols + 1, Field(0)));
    tab.basis.resize(m);
    tab.banned.assign(cols, false);
    for (std::size_t i = 0; i < m; ++i) {
        const Field sign = flipped[i] ? Field(-1) : Field(1);
        for (std::size_t j = 0; j < n; ++j) {
            const Field& a = lp.rows[i].coeffs[j];
            if (a == 0) continue;
            tab.t[i][pos_col[j]] = sign * a;
            if (is_free(j)) tab.t[i][neg_col[j]] = -(sign * a);
        }
        if (rel[i] == Relation::LessEqual) tab.t[i][slack_col[i]] = Field(1);
        if (rel[i] == Relation::GreaterEqual) tab.t[i][slack_col[i]] = Field(-1);
        tab.t[i][identity_col[i]] = Field(1);
        tab.t[i][cols] = sign * lp.rows[i].rhs;
        tab.basis[i] = identity_col[i];
    }

    LpSolution<Field> sol;
    // phase 1
    std::vector<Field> phase1(cols, Field(0));
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = Field(1);
    tab.price(phase1);
    tab.run();
    if (tab.z[cols] != 0) {
        sol.status = LpStatus::Infeasible;
        sol.pivots = tab.pivots;
        return sol;
    }
    // drive remaining artificials out of the basis; drop redundant rows
    std::vector<std::size_t> row_origin(m);
    for (std::size_t i = 0; i < m; ++i) row_origin[i] = i;
    for (std::size_t i = 0; i < tab.t.size();) {
        if (tab.basis[i] < first_artificial) {
            ++i;
            continue;
        }
        std::size_t c = first_artificial;
        for (std::size_t j = 0; j < first_artificial; ++j)
            if (tab.t[i][j] != 0) {
                c = j;
                break;
            }
        if (c < first_artificial) {
            tab.pivot(i, c);
            ++i;
        } else {
            tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
            tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
            row_origin.erase(row_origin.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) tab.banned[j] = true;

    // phase 2
    std::vector<Field> cost(cols, Field(0));
    for (std::size_t j = 0; j < n; ++j) {
        cost[pos_col[j]] = lp.objective[j];
        if (is_free(j)) cost[neg_col[j]] = -lp.objective[j];
    }
    tab.price(cost);
    const bool bounded = tab.run();
    sol.pivots = tab.pivots;
    if (!bounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    std::vector<Field> value(cols, Field(0));
    for (std::size_t i = 0; i < tab.t.size(); ++i) value[tab.basis[i]] = tab.t[i][cols];
    sol.x.assign(n, Field(0));
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = value[pos_col[j]];
        if (is_free(j)) sol.x[j] -= value[neg_col[j]];
    }
    sol.objective = Field(0);
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];

    sol.duals.assign(m, Field(0));
    for (std::size_t i = 0; i < m; ++i) {
        Field y(0);
        for (std::size_t r = 0; r < tab.t.size(); ++r) {
            const Field& cb = cost[tab.basis[r]];
            if (cb != 0 && tab.t[r][identity_col[i]] != 0) y += cb * tab.t[r][identity_col[i]];
        }
        sol.duals[i] = flipped[i] ? Field(-y) : y;
    }
    return sol;
}

} // namespace xnet

#endif
