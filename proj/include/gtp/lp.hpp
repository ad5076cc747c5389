#pragma once

#include <vector>

#include "gtp/rational.hpp"

namespace gtp {

/// Standard form: maximize c'x subject to Ax <= b, x >= 0, all data rational.
struct LinearProgram {
    std::vector<std::vector<Rational>> constraints;  // A, one vector per row
    std::vector<Rational> bounds;                    // b
    std::vector<Rational> objective;                 // c

    std::size_t num_rows() const { return constraints.size(); }
    std::size_t num_vars() const { return objective.size(); }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational objective;            // meaningful only when Optimal
    std::vector<Rational> primal;  // x, one entry per variable
    std::vector<Rational> dual;    // y, one entry per constraint row

    bool optimal() const { return status == LpStatus::Optimal; }
};

/// Exact two-phase tableau simplex with Bland's anti-cycling rule.
///
/// When the status is Optimal the result carries both an optimal primal
/// point and an optimal dual point, and the solver has already verified
/// primal feasibility, dual feasibility (y >= 0, A'y >= c) and exact
/// strong duality (c'x == b'y). Any violation raises InternalError rather
/// than returning silently wrong data.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace gtp
