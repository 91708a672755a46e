#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "steklov/closedform.hpp"
#include "steklov/harmonics.hpp"
#include "steklov/radial.hpp"
#include "steklov/warp.hpp"

namespace steklov {

// ============================================================================
// Curvature-conditioned eigenvalue bounds, verdicts, and spectrum assembly.
//
// Lower bounds hold under Ric >= 0 with strictly convex boundary; the sigma
// bound reverses under Ric <= 0, and the n = 2 fourth-order bounds reverse as
// well. Equality in every stated case forces h(r) = r, so equality detection
// additionally requires the warp to be Euclidean to within 1e-9 R on the
// validation grid. With an indefinite Ricci sign nothing is predicted and no
// bound is tested.
// ============================================================================

enum class BoundKind { LowerRicNonneg, UpperRicNonpos, None };
enum class Verdict { Holds, EqualityCase, ViolationSuspected, NotApplicable };

inline const char* bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::LowerRicNonneg: return "lower";
        case BoundKind::UpperRicNonpos: return "upper";
        case BoundKind::None: return "none";
    }
    return "?";
}

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::EqualityCase: return "EqualityCase";
        case Verdict::ViolationSuspected: return "ViolationSuspected";
        case Verdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct BoundDescription {
    double value = 0.0;
    BoundKind kind = BoundKind::None;
    std::string tag;            // e.g. "Thm2/(bound3)"
    std::string applicability;  // why the bound applies or not
};

struct BoundReport {
    Problem problem = Problem::Sigma;
    int n = 0, m = 0;
    double bound_value = 0.0;
    BoundKind bound_kind = BoundKind::None;
    std::string theorem_tag;
    double eigenvalue = 0.0;
    double margin = 0.0;  // eigenvalue - bound (lower) or bound - eigenvalue (upper)
    Verdict verdict = Verdict::NotApplicable;
    std::string applicability;
};

// Case table for the applicable theorem bound at (problem, n, m) given the
// grid-classified curvature sign. A zero sign (flat) satisfies the Ric >= 0
// hypotheses, so the lower-bound branch is used there.
inline BoundDescription theoretical_bound(Problem p, const Geometry& g, int m,
                                          const CurvatureReport& curv) {
    BoundDescription out;
    if (!curv.boundary_convex) {
        out.applicability = "boundary not strictly convex (h'(R) <= 0)";
        return out;
    }
    if (curv.ric_sign == RicciSign::Indefinite) {
        out.applicability = "curvature hypothesis unmet (indefinite Ricci sign)";
        return out;
    }
    const bool nonneg = curv.ric_sign == RicciSign::NonNegative || curv.ric_sign == RicciSign::Zero;
    const double kap = curv.kappa;
    const double hR = g.h(g.R);
    const double hpR = g.dh(g.R);
    const double taum = tau(m, g.n);
    const int n = g.n;

    if (nonneg) {
        switch (p) {
            case Problem::Sigma:
                out = {m * kap, BoundKind::LowerRicNonneg, "Thm1/(1.4)", "Ric >= 0, convex boundary"};
                return out;
            case Problem::Xi:
                if (m == 0) {
                    out.applicability = "trivial zero eigenvalue; no bound stated";
                    return out;
                }
                if (n == 2) {
                    out = {2.0 * m * m * (m + 1.0) * hpR / (hR * hR * hR), BoundKind::LowerRicNonneg,
                           "Thm2/(bound2)", "Ric >= 0, convex boundary, n = 2"};
                    return out;
                }
                if (n == 3 && m == 1) {
                    out.applicability = "open case n = 3, m = 1";
                    return out;
                }
                if (n == 3) {
                    out = {(4.0 * taum - 13.0) * taum / (2.0 * taum - 6.0) * hpR / (hR * hR * hR),
                           BoundKind::LowerRicNonneg, "Thm2/(bound3)", "Ric >= 0, convex boundary, n = 3"};
                    return out;
                }
                out = {(4.0 * taum + n * (n - 4.0)) * taum / (2.0 * taum + (n - 1.0) * (n - 4.0)) *
                           hpR / (hR * hR * hR),
                       BoundKind::LowerRicNonneg, "Thm2/(bound4)", "Ric >= 0, convex boundary, n >= 4"};
                return out;
            case Problem::Eta:
                if (m == 0) {
                    out = {n * kap, BoundKind::LowerRicNonneg, "Thm3/(eta0)",
                           "Ric >= 0, convex boundary, first eigenvalue"};
                    return out;
                }
                if (n == 2) {
                    out = {2.0 * (m + 1.0) * kap, BoundKind::LowerRicNonneg, "Thm3/(bound5)",
                           "Ric >= 0, convex boundary, n = 2"};
                    return out;
                }
                if (n == 3 && m == 1) {
                    out.applicability = "open case n = 3, m = 1";
                    return out;
                }
                if (n == 3) {
                    out = {(4.0 * taum - 13.0) / (taum - 3.0) * kap, BoundKind::LowerRicNonneg,
                           "Thm3/(bound6)", "Ric >= 0, convex boundary, n = 3"};
                    return out;
                }
                out = {(4.0 * taum + n * (n - 4.0)) * (n - 1.0) / (2.0 * taum + (n - 1.0) * (n - 4.0)) *
                           kap,
                       BoundKind::LowerRicNonneg, "Thm3/(bound7)", "Ric >= 0, convex boundary, n >= 4"};
                return out;
        }
    }

    // Ric <= 0 branch
    switch (p) {
        case Problem::Sigma:
            out = {m * kap, BoundKind::UpperRicNonpos, "Thm1.1", "Ric <= 0, convex boundary"};
            return out;
        case Problem::Xi:
            if (n == 2 && m >= 1) {
                out = {2.0 * m * m * (m + 1.0) * hpR / (hR * hR * hR), BoundKind::UpperRicNonpos,
                       "Thm2/(upper-n2)", "Ric <= 0, convex boundary, n = 2"};
                return out;
            }
            out.applicability = m == 0 ? "trivial zero eigenvalue; no bound stated"
                                       : "no Ric <= 0 bound stated for n >= 3";
            return out;
        case Problem::Eta:
            if (n == 2) {
                out = {2.0 * (m + 1.0) * kap, BoundKind::UpperRicNonpos, "Thm3/(upper-n2)",
                       "Ric <= 0, convex boundary, n = 2"};
                return out;
            }
            out.applicability = "no Ric <= 0 bound stated for n >= 3";
            return out;
    }
    return out;
}

inline BoundDescription theoretical_bound(Problem p, const Geometry& g, int m) {
    return theoretical_bound(p, g, m, curvature_classify(g));
}

// Eigenvalue vs bound with verdict. Equality detection requires both a margin
// inside tolerance and a warp indistinguishable from h(r) = r.
inline BoundReport verify(Problem p, const Geometry& g, int m, const ShootingConfig& cfg = {},
                          const CurvatureReport* curv = nullptr) {
    CurvatureReport local;
    if (!curv) {
        local = curvature_classify(g);
        curv = &local;
    }
    const BoundDescription bd = theoretical_bound(p, g, m, *curv);

    BoundReport rep;
    rep.problem = p;
    rep.n = g.n;
    rep.m = m;
    rep.bound_value = bd.value;
    rep.bound_kind = bd.kind;
    rep.theorem_tag = bd.tag;
    rep.applicability = bd.applicability;

    ShootingConfig quiet = cfg;
    quiet.certify_eps = false;
    rep.eigenvalue = solve_with_solution(p, g, m, quiet).result.value;

    if (bd.kind == BoundKind::None) {
        rep.verdict = Verdict::NotApplicable;
        return rep;
    }

    rep.margin = bd.kind == BoundKind::LowerRicNonneg ? rep.eigenvalue - bd.value
                                                      : bd.value - rep.eigenvalue;
    const double tol = 1e-6 * std::max(std::abs(rep.eigenvalue), std::abs(rep.bound_value));
    const bool euclid_like = g.warp.max_dev_from_euclidean() < 1e-9 * g.R;
    if (rep.margin < -tol) rep.verdict = Verdict::ViolationSuspected;
    else if (std::abs(rep.margin) <= tol && euclid_like) rep.verdict = Verdict::EqualityCase;
    else rep.verdict = Verdict::Holds;
    return rep;
}

struct SpectrumRow {
    int m = 0;
    double eigenvalue = 0.0;
    long long multiplicity = 1;
    long long index_from = 0, index_to = 0;
};

struct SpectrumTable {
    Problem problem = Problem::Sigma;
    int n = 0;
    double R = 0.0;
    std::vector<SpectrumRow> rows;  // sorted ascending by eigenvalue
    bool ordering_certified = false;
};

// Sort rows by eigenvalue and assign cumulative index ranges.
inline void sort_and_index(SpectrumTable& table) {
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const SpectrumRow& a, const SpectrumRow& b) { return a.eigenvalue < b.eigenvalue; });
    long long idx = 0;
    for (auto& row : table.rows) {
        row.index_from = idx;
        row.index_to = idx + row.multiplicity - 1;
        idx += row.multiplicity;
    }
}

// Per-degree ordering transfers to a global ordering for sigma always
// (Rayleigh numerators increase in tau_m); for the fourth-order problems the
// argument additionally needs h' <= 1, i.e. Ric >= 0.
inline bool ordering_certified_for(Problem p, const Geometry& g) {
    if (p == Problem::Sigma) return true;
    const CurvatureReport curv = curvature_classify(g);
    return curv.boundary_convex &&
           (curv.ric_sign == RicciSign::NonNegative || curv.ric_sign == RicciSign::Zero);
}

// Per-degree eigenvalues for m = 0..m_max with multiplicities and cumulative
// index ranges. Ordering across degrees is certified for sigma always, and
// for the fourth-order problems under Ric >= 0; otherwise rows are sorted
// numerically but stand only for per-degree values.
inline SpectrumTable assemble_spectrum(Problem p, const Geometry& g, int m_max,
                                       const ShootingConfig& cfg = {}) {
    if (m_max < 0) throw Error("assemble_spectrum: need m_max >= 0");
    SpectrumTable table;
    table.problem = p;
    table.n = g.n;
    table.R = g.R;

    ShootingConfig quiet = cfg;
    quiet.certify_eps = false;
    for (int m = 0; m <= m_max; ++m) {
        const EigenResult res = solve_with_solution(p, g, m, quiet).result;
        table.rows.push_back({m, res.value, res.multiplicity, 0, 0});
    }
    sort_and_index(table);
    table.ordering_certified = ordering_certified_for(p, g);
    return table;
}

}  // namespace steklov
