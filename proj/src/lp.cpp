#include "gtp/lp.hpp"

#include <limits>
#include <optional>

#include "gtp/errors.hpp"

namespace gtp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Full-tableau simplex. Column ids: [0, n) structural variables,
// [n, n+m) slacks, [n+m, ...) phase-1 artificials. Every row keeps an
// explicit basic variable with coefficient 1; the objective row stores
// reduced costs d_j (so the current solution is optimal for maximization
// once d_j >= 0 for every eligible column) and the current value in its
// last entry.
class Tableau {
  public:
    explicit Tableau(const LinearProgram& lp) : n_(lp.num_vars()), m_(lp.num_rows()) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (lp.constraints[i].size() != n_) {
                throw InputError("LP row has wrong number of coefficients");
            }
            if (lp.bounds[i] < 0) ++num_art_;
        }
        total_ = n_ + m_ + num_art_;
        rows_.assign(m_, std::vector<Rational>(total_ + 1, Rational(0)));
        basis_.assign(m_, kNone);
        active_.assign(m_, true);

        std::size_t next_art = n_ + m_;
        for (std::size_t i = 0; i < m_; ++i) {
            auto& row = rows_[i];
            const bool flip = lp.bounds[i] < 0;
            const Rational sign = flip ? Rational(-1) : Rational(1);
            for (std::size_t j = 0; j < n_; ++j) row[j] = sign * lp.constraints[i][j];
            row[n_ + i] = sign;  // slack column
            row[total_] = sign * lp.bounds[i];
            if (flip) {
                row[next_art] = Rational(1);
                basis_[i] = next_art++;
            } else {
                basis_[i] = n_ + i;
            }
        }
    }

    std::size_t num_artificials() const { return num_art_; }

    // Phase 1: maximize -(sum of artificials); value 0 iff feasible.
    bool run_phase1() {
        obj_.assign(total_ + 1, Rational(0));
        for (std::size_t j = n_ + m_; j < total_; ++j) obj_[j] = Rational(1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_ + m_) subtract_row_from_objective(i, Rational(1));
        }
        const bool bounded = bland_loop(/*allow_artificials=*/true);
        if (!bounded) {
            throw InternalError("phase-1 LP reported unbounded");
        }
        return obj_[total_] == 0;
    }

    // After a feasible phase 1: pivot basic artificials out (their rows sit
    // at value 0) or deactivate redundant rows, then rebuild the objective.
    void enter_phase2(const std::vector<Rational>& objective) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i] || basis_[i] < n_ + m_) continue;
            std::size_t col = kNone;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (rows_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col == kNone) {
                active_[i] = false;  // 0 = 0 row
            } else {
                pivot(i, col);
            }
        }
        obj_.assign(total_ + 1, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) obj_[j] = -objective[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            const Rational d = obj_[basis_[i]];
            if (d != 0) subtract_row_from_objective(i, d);
        }
    }

    // Returns false when unbounded.
    bool run_phase2() { return bland_loop(/*allow_artificials=*/false); }

    Rational value() const { return obj_[total_]; }

    std::vector<Rational> primal() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (active_[i] && basis_[i] < n_) x[basis_[i]] = rows_[i][total_];
        }
        return x;
    }

    // Dual value of row i is the final reduced cost of its slack column.
    std::vector<Rational> dual() const {
        std::vector<Rational> y(m_);
        for (std::size_t i = 0; i < m_; ++i) y[i] = obj_[n_ + i];
        return y;
    }

  private:
    void subtract_row_from_objective(std::size_t row, const Rational& factor) {
        for (std::size_t j = 0; j <= total_; ++j) obj_[j] -= factor * rows_[row][j];
    }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        const Rational inv = Rational(1) / prow[c];
        for (auto& v : prow) v *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || !active_[i]) continue;
            const Rational f = rows_[i][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= total_; ++j) rows_[i][j] -= f * prow[j];
        }
        const Rational f = obj_[c];
        if (f != 0) {
            for (std::size_t j = 0; j <= total_; ++j) obj_[j] -= f * prow[j];
        }
        basis_[r] = c;
    }

    bool bland_loop(bool allow_artificials) {
        const std::size_t limit = allow_artificials ? total_ : n_ + m_;
        for (;;) {
            // Bland entering rule: lowest-id column with negative reduced cost.
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == kNone) return true;

            // Ratio test; ties broken by lowest basic-variable id.
            std::size_t leave = kNone;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i] || rows_[i][enter] <= 0) continue;
                const Rational ratio = rows_[i][total_] / rows_[i][enter];
                if (leave == kNone || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == kNone) return false;
            pivot(leave, enter);
        }
    }

    std::size_t n_;
    std::size_t m_;
    std::size_t num_art_ = 0;
    std::size_t total_ = 0;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> obj_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
};

void validate_certificates(const LinearProgram& lp, const LpResult& res) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    Rational primal_obj(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (res.primal[j] < 0) throw InternalError("LP primal has a negative component");
        primal_obj += lp.objective[j] * res.primal[j];
    }
    Rational dual_obj(0);
    for (std::size_t i = 0; i < m; ++i) {
        Rational lhs(0);
        for (std::size_t j = 0; j < n; ++j) lhs += lp.constraints[i][j] * res.primal[j];
        if (lhs > lp.bounds[i]) throw InternalError("LP primal violates a constraint");
        if (res.dual[i] < 0) throw InternalError("LP dual has a negative component");
        dual_obj += lp.bounds[i] * res.dual[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        Rational col(0);
        for (std::size_t i = 0; i < m; ++i) col += lp.constraints[i][j] * res.dual[i];
        if (col < lp.objective[j]) throw InternalError("LP dual is infeasible");
    }
    if (primal_obj != res.objective || dual_obj != res.objective) {
        throw InternalError("LP strong duality violated");
    }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    if (lp.bounds.size() != lp.num_rows()) {
        throw InputError("LP bound count does not match row count");
    }

    Tableau tableau(lp);
    if (tableau.num_artificials() > 0 && !tableau.run_phase1()) {
        return LpResult{LpStatus::Infeasible, Rational(0), {}, {}};
    }
    tableau.enter_phase2(lp.objective);
    if (!tableau.run_phase2()) {
        return LpResult{LpStatus::Unbounded, Rational(0), {}, {}};
    }

    LpResult res;
    res.status = LpStatus::Optimal;
    res.objective = tableau.value();
    res.primal = tableau.primal();
    res.dual = tableau.dual();
    validate_certificates(lp, res);
    return res;
}

}  // namespace gtp
