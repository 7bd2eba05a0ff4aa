#pragma once

#include "latflow/enumerate.hpp"

namespace latflow {

struct ShortestVector {
    IntVector coeffs;  // primitive, canonical sign
    Vec v;             // embedded vector in the original lattice
    double norm;       // outer norm (conjugated norm if a conjugator is set)
};

// Minimal nonzero outer-norm vector.  With a conjugator g0 the quantity
// minimized is |v * g0^-1| over v in the lattice, i.e. the search runs on
// the transformed basis while coefficients refer to the original one.
inline ShortestVector shortest_vector(const Lattice& x, const NormPair& norms,
                                      const EnumOptions& opt = {}) {
    if (std::fabs(determinant(x.basis)) < detail::kDegenerate)
        throw std::domain_error("shortest_vector: degenerate basis");
    const int n = x.n();
    SquareMatrix work = norms.conjugator_inv ? x.basis * (*norms.conjugator_inv) : x.basis;
    LLLResult red = lll_reduce_matrix(work);

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) best = std::min(best, norm_of(&red.basis.a[static_cast<size_t>(i) * n], n, norms.outer));

    Lattice search{x.dims, work};  // same coefficients as x
    const double pad = best * (1.0 + 1e-9);
    Region region;
    if (norms.outer == NormTag::euclidean) {
        region = ball_region(Vec(n, 0.0), pad);
    } else {
        region = box_region(Vec(n, -pad), Vec(n, pad));
    }
    auto pts = enumerate_points(search, region, /*primitive_only=*/true, opt);

    ShortestVector result;
    result.norm = std::numeric_limits<double>::infinity();
    for (auto& p : pts) {
        const double nv = norm_of(p.point, norms.outer);
        IntVector c = canonical_sign(p.coeffs);
        if (nv < result.norm - 1e-15 ||
            (std::fabs(nv - result.norm) <= 1e-15 && c < result.coeffs)) {
            result.norm = nv;
            result.coeffs = std::move(c);
        }
    }
    if (!std::isfinite(result.norm)) throw std::runtime_error("shortest_vector: no candidate found");
    result.v = row_times(result.coeffs, x.basis);
    return result;
}

struct AlphaResult {
    double value;  // 1 / lambda_1
    ShortestVector minimizer;
};

// alpha(x) = 1 / (shortest nonzero vector norm); log alpha gauges how far
// into the cusp the lattice sits.
inline AlphaResult alpha(const Lattice& x, const NormPair& norms, const EnumOptions& opt = {}) {
    ShortestVector sv = shortest_vector(x, norms, opt);
    return AlphaResult{1.0 / sv.norm, std::move(sv)};
}

}  // namespace latflow
