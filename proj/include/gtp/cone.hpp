#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gtp/gamble.hpp"

namespace gtp {

enum class ConeKind { RawGenerators, ZeroCone, NonpositiveCone, SpanOf };

/// Outcome of a coherence check, always with a machine-checkable certificate.
///
/// Coherent:   a calibrating probability vector P with E_P[G] <= 0 for every
///             generator G.
/// Incoherent: nonnegative coefficients c (normalized so max c_i = 1) whose
///             combination sum_i c_i G_i is strictly positive at every outcome.
struct CoherenceVerdict {
    bool coherent = false;
    std::optional<ProbabilityVector> calibrating;
    std::vector<Rational> witness;
};

/// A finitely generated cone of gambles { sum_i c_i G_i : c_i >= 0 }.
///
/// Zero and nonpositive cones of a probability vector are compiled down to
/// generators; SpanOf lists each generator together with its negation. The
/// represented set is closed under addition and nonnegative scaling by
/// construction and always contains the zero gamble.
class Cone {
  public:
    /// Generators spanning { F : E_P[F] = 0 }: for each outcome i other than
    /// the first positive-weight outcome j, the primitive integer scaling of
    /// p_i e_j - p_j e_i together with its negation (2(m-1) generators).
    static Cone zero_cone(const ProbabilityVector& p);
    /// The zero-cone generators plus the constant -1 gamble; generates
    /// { F : E_P[F] <= 0 }.
    static Cone nonpositive_cone(const ProbabilityVector& p);
    static Cone raw(SpacePtr space, std::vector<Gamble> generators);
    /// Each generator duplicated with its negation (the linear span).
    static Cone span(SpacePtr space, std::vector<Gamble> generators);

    ConeKind kind() const { return kind_; }
    const SpacePtr& space() const { return space_; }
    const std::vector<Gamble>& generators() const { return generators_; }
    const std::optional<ProbabilityVector>& measure() const { return measure_; }

    /// Cached coherence verdict; computed once, safe under concurrent use.
    const CoherenceVerdict& coherence() const;

    Gamble combine(const std::vector<Rational>& coefficients) const;

  private:
    Cone(SpacePtr space, ConeKind kind, std::vector<Gamble> generators,
         std::optional<ProbabilityVector> measure);

    SpacePtr space_;
    ConeKind kind_;
    std::vector<Gamble> generators_;
    std::optional<ProbabilityVector> measure_;

    struct Cache {
        std::once_flag flag;
        std::optional<CoherenceVerdict> verdict;
    };
    std::shared_ptr<Cache> cache_;
};

/// Decides coherence with a certificate (the Farkas alternative, solved by
/// the exact LP: maximize s subject to sum_i c_i G_i(w) >= s for every
/// outcome w, sum_i c_i <= 1, c >= 0; coherent iff the optimum is 0, and
/// the dual optimum then supplies the calibrating measure).
const CoherenceVerdict& check_coherence(const Cone& cone);

void require_coherent(const Cone& cone);

struct PricePoint {
    Rational price;
    Gamble hedge;                       // sum_i c_i G_i at the optimum
    std::vector<Rational> coefficients; // the optimal c
};

/// min alpha such that alpha + sum_i c_i G_i(w) >= f(w) for all w, c >= 0.
/// The returned hedge satisfies price + hedge(w) >= f(w) exactly, everywhere.
/// Throws IncoherentConeError when the cone is incoherent.
PricePoint one_step_upper_price(const Cone& cone, const Gamble& f);

/// -one_step_upper_price(cone, -f); never exceeds the upper price.
Rational one_step_lower_price(const Cone& cone, const Gamble& f);

/// Nonnegative generator coefficients reproducing f exactly, when f is a
/// member of the cone.
std::optional<std::vector<Rational>> membership_coefficients(const Cone& cone, const Gamble& f);

bool cone_contains(const Cone& cone, const Gamble& f);

/// An outcome at which the cone member F pays at most 0 (one exists for any
/// member of a coherent cone). Returns the lowest-index minimizer of F.
/// With require_nonzero, the search is restricted to outcomes carrying a
/// nonzero numeric value; an outcome with F <= 0 must exist among those.
std::size_t evasion_outcome(const Cone& cone, const Gamble& F, bool require_nonzero = false);

}  // namespace gtp
