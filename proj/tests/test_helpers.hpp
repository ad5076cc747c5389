#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "gtp/gamble.hpp"
#include "gtp/lp.hpp"

namespace gtp::testing {

// ---------------------------------------------------------------------------
// Independent LP oracle: enumerate all vertices of {x : Ax <= b, x >= 0} by
// solving every n-subset of the constraint rows (including the nonnegativity
// rows) with exact Gaussian elimination, keep the feasible ones, and take
// the best objective. Only usable on small bounded-feasible instances; it
// shares no code with the simplex path it cross-checks.
// ---------------------------------------------------------------------------

inline std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;  // singular
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (auto& v : a[col]) v *= inv;
        b[col] *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational f = a[row][col];
            for (std::size_t k = 0; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    return b;
}

struct VertexOracle {
    bool feasible = false;
    Rational best;  // max c'x over vertices, when feasible
};

inline VertexOracle vertex_enumeration_max(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    // All constraints as rows of Gx <= h: the m given rows then -x_j <= 0.
    std::vector<std::vector<Rational>> g;
    std::vector<Rational> h;
    for (std::size_t i = 0; i < m; ++i) {
        g.push_back(lp.constraints[i]);
        h.push_back(lp.bounds[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> row(n, Rational(0));
        row[j] = Rational(-1);
        g.push_back(std::move(row));
        h.emplace_back(0);
    }

    VertexOracle out;
    const std::size_t total = g.size();

    // Enumerate all n-subsets of the constraint set.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (n == 0) return out;
    for (;;) {
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
        std::vector<Rational> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = g[idx[i]];
            b[i] = h[idx[i]];
        }
        if (const auto x = solve_square(std::move(a), std::move(b))) {
            bool ok = true;
            for (std::size_t i = 0; i < total && ok; ++i) {
                Rational lhs(0);
                for (std::size_t j = 0; j < n; ++j) lhs += g[i][j] * (*x)[j];
                ok = lhs <= h[i];
            }
            if (ok) {
                Rational value(0);
                for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
                if (!out.feasible || value > out.best) out.best = value;
                out.feasible = true;
            }
        }
        // next combination
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == total - n + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < n; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

inline Gamble gamble(const SpacePtr& space, std::vector<long> payoffs) {
    std::vector<Rational> values;
    values.reserve(payoffs.size());
    for (long p : payoffs) values.emplace_back(p);
    return Gamble(space, std::move(values));
}

}  // namespace gtp::testing
